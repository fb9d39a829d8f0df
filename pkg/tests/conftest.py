import numpy as np
import pytest
from hypothesis import settings

from leakage_lab.funcfield import hermitian
from leakage_lab.gf import get_field
from leakage_lab.sss import agsh

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def F3():
    return get_field(3)


@pytest.fixture(scope="session")
def F5():
    return get_field(5)


@pytest.fixture(scope="session")
def F9():
    return get_field(3, 2)


@pytest.fixture(scope="session")
def F25():
    return get_field(5, 2)


@pytest.fixture(scope="session")
def herm_scheme(F9):
    return agsh(hermitian(F9), 7)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(1234))


# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
