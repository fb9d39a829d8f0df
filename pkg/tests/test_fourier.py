import cmath
import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from leakage_lab.codes import from_generator, full_space, zero_code
from leakage_lab.fourier import (
    c_mu,
    c_mu_prime,
    check_cmgen,
    check_cmpe,
    check_maxcmpe,
    check_newxi1,
    check_newxi2,
    check_norm2,
    check_poisson,
    check_rootsum,
    extremal_set,
    fourier_coeff,
    fourier_transform,
    indicator,
    indicator_coeffs,
    labels_from_parts,
    omega_sum,
    partition_coeff_sum,
    partition_max_coeff_sum,
    poisson_lhs,
    poisson_rhs,
    root_sum_max_oracle,
    trace_level_sets,
    xi,
    zeta,
)
from leakage_lab.gf import character, character_matrix, get_field


def brute_coeff(F, table, a):
    """Coefficient from scalar characters, one term at a time."""
    alpha = F.element(a)
    return sum(table[x] * character(alpha, F.element(x)) for x in range(F.q)) / F.q


def test_transform_matches_definition(F9, rng):
    f = rng.normal(size=9) + 1j * rng.normal(size=9)
    hat = fourier_transform(F9, f)
    for a in range(9):
        assert hat[a] == pytest.approx(brute_coeff(F9, f, a))
        assert fourier_coeff(F9, f, a) == pytest.approx(hat[a])


def test_transform_examples(F9, F25, rng):
    hat = fourier_transform(F9, np.ones(9))
    assert hat[0] == pytest.approx(1) and np.allclose(hat[1:], 0)
    A = [0, 3, 4, 7]
    assert fourier_transform(F9, indicator(F9, A))[0] == pytest.approx(len(A) / 9)
    for F in (F9, F25):
        f = rng.normal(size=F.q) + 1j * rng.normal(size=F.q)
        hat = fourier_transform(F, f)
        assert np.sum(np.abs(hat) ** 2) == pytest.approx(np.sum(np.abs(f) ** 2) / F.q, abs=1e-9)
        # inversion with conjugate characters
        M = character_matrix(F)
        assert np.allclose(hat @ M.conj(), f)
    with pytest.raises(ValueError):
        fourier_transform(F9, np.ones(8))


def test_poisson_extremes(F9, rng):
    n = 3
    f = rng.normal(size=(n, 9)) + 1j * rng.normal(size=(n, 9))
    full = full_space(F9, n)
    assert poisson_lhs(full, f) == pytest.approx(np.prod(f.mean(axis=1)))
    assert poisson_rhs(full, f) == pytest.approx(np.prod(fourier_transform(F9, f)[:, 0]))
    zc = zero_code(F9, n)
    assert poisson_lhs(zc, f) == pytest.approx(np.prod(f[:, 0]))
    assert poisson_rhs(zc, f) == pytest.approx(np.prod(f[:, 0]))
    C = from_generator(F9, rng.integers(0, 9, size=(2, 4)))
    g = rng.normal(size=(4, 9)) + 1j * rng.normal(size=(4, 9))
    assert check_poisson(C, g).passed


def test_omega_sums(F9):
    assert omega_sum(F9, []) == 0
    assert abs(omega_sum(F9, range(9))) < 1e-12
    T = trace_level_sets(F9)
    assert [len(t) for t in T] == [3, 3, 3]
    assert omega_sum(F9, T[0]) == pytest.approx(3)


def test_extremal_sets(F9, F3):
    P = extremal_set(F9, 3)
    assert set(P.subset) == set(trace_level_sets(F9)[0].tolist())
    assert P.value == pytest.approx(3)
    P = extremal_set(F9, 4)
    w = cmath.exp(2j * math.pi / 3)
    assert (P.s1, P.s2) == (1, 1)
    assert P.value == pytest.approx(abs(1 * (1 + w) + 2 * 1))
    assert root_sum_max_oracle(F3, 2) == pytest.approx(1)
    assert root_sum_max_oracle(F9, 3) == pytest.approx(3)


def test_rootsum_against_itertools(F9):
    roots = [cmath.exp(2j * math.pi * F9.element(x).trace() / 3) for x in range(9)]
    for s in range(1, 9):
        best = max(abs(sum(roots[x] for x in S)) for S in itertools.combinations(range(9), s))
        assert root_sum_max_oracle(F9, s) == pytest.approx(best, abs=1e-12)
        assert check_rootsum(F9, s).passed


def test_partial_level_choice_is_irrelevant(F25, rng):
    levels = trace_level_sets(F25)
    for s in (2, 7, 13, 21):
        base = extremal_set(F25, s)
        for _ in range(5):
            part = rng.choice(levels[base.s1], base.s2, replace=False) if base.s2 else []
            assert extremal_set(F25, s, part).value == pytest.approx(base.value, abs=1e-9)
    with pytest.raises(ValueError):
        extremal_set(F25, 2, [levels[1][0]])


def test_constants_high_precision():
    mpmath.mp.dps = 30
    for p, mu in [(3, 1), (5, 1), (5, 2), (7, 2), (13, 3)]:
        L = mpmath.mpf(2) ** mu
        ref = L * mpmath.sin(mpmath.pi / L) / (p * mpmath.sin(mpmath.pi / p))
        ref2 = L * mpmath.sin(mpmath.pi / L + mpmath.pi / mpmath.mpf(2) ** (4 * mu)) / (p * mpmath.sin(mpmath.pi / p))
        assert c_mu(p, mu) == pytest.approx(float(ref), rel=1e-14)
        assert c_mu_prime(p, mu) == pytest.approx(float(ref2), rel=1e-14)
    assert c_mu(3, 1) == pytest.approx(0.769800, abs=5e-7)
    for p in (3, 5, 7, 11, 13):
        for mu in range(1, 5):
            assert (c_mu(p, mu) < 1) == (2**mu < p)
    with pytest.raises(ValueError):
        c_mu(3, 0)


def test_xi_floor(F9, F25):
    for F in (F9, F25):
        for mu in (1, 2):
            assert np.all(xi(F, mu, np.arange(F.q + 1)) >= 2.0 ** -(4 * mu + 1))
    assert zeta(F9, 0) == 0


def test_partition_sums(F9):
    parts = [[0, 1, 2, 3], [4, 5, 6, 7, 8]]
    assert partition_coeff_sum(F9, parts, 0) == pytest.approx(1)
    for a in range(1, 9):
        assert partition_coeff_sum(F9, parts, a) <= c_mu(3, 1) + 1e-12
    assert partition_max_coeff_sum(F9, parts) <= c_mu(3, 1) + 1e-12
    labels = labels_from_parts(F9, parts)
    assert partition_coeff_sum(F9, labels, 3) == pytest.approx(partition_coeff_sum(F9, parts, 3))
    with pytest.raises(ValueError, match="not a partition"):
        labels_from_parts(F9, [[0, 1], [1, 2, 3, 4, 5, 6, 7, 8]])
    with pytest.raises(ValueError, match="not a partition"):
        labels_from_parts(F9, [[0, 1], [2]])


def test_newxi2_exceeds_constant_at_mu1(F9, F25):
    """Near-balanced two-set partitions beat c'_1: the sine is past its peak."""
    mpmath.mp.dps = 30
    res = check_newxi2(F9, 1, labels_from_parts(F9, [range(4), range(4, 9)]))
    ref = 2 * mpmath.sin(4 * mpmath.pi / 9) / (3 * mpmath.sin(mpmath.pi / 3))
    assert res.lhs == pytest.approx(float(ref), rel=1e-12)
    assert res.rhs == pytest.approx(float(2 * mpmath.cos(mpmath.pi / 16) / (3 * mpmath.sin(mpmath.pi / 3))), rel=1e-12)
    assert not res.passed and res.lhs == pytest.approx(0.758105, abs=1e-6)
    res = check_newxi2(F25, 1, labels_from_parts(F25, [range(12), range(12, 25)]))
    assert not res.passed


def test_cmgen_small(F9, rng):
    D = from_generator(F9, [[1, 1, 1]])
    tables = rng.integers(0, 2, size=(3, 9))
    assert check_cmgen(D, tables, 1).passed


mu1_labels = st.lists(st.integers(0, 1), min_size=9, max_size=9)
mu2_labels = st.lists(st.integers(0, 3), min_size=25, max_size=25)


@given(mu1_labels)
def test_cmpe_family_f9(labels):
    F = get_field(3, 2)
    for check in (check_cmpe, check_maxcmpe, check_norm2):
        assert check(F, 1, labels).passed
    H = indicator_coeffs(F, labels, 2)
    assert np.abs(H[:, 0]).sum() == pytest.approx(1)


@given(mu2_labels)
def test_mu2_family_f25(labels):
    F = get_field(5, 2)
    for check in (check_cmpe, check_maxcmpe, check_norm2, check_newxi2):
        r = check(F, 2, labels)
        assert r.passed, r.to_dict()


@given(st.sets(st.integers(0, 24)), st.integers(1, 2))
def test_newxi1(A, mu):
    assert check_newxi1(get_field(5, 2), mu, A).passed


@given(st.lists(st.lists(st.integers(0, 8), min_size=3, max_size=3), min_size=1, max_size=2), st.integers(0, 2**31))
def test_poisson_random_codes(rows, seed):
    F = get_field(3, 2)
    C = from_generator(F, rows)
    r = np.random.Generator(np.random.Philox(seed))
    f = r.normal(size=(3, 9)) + 1j * r.normal(size=(3, 9))
    assert abs(poisson_lhs(C, f) - poisson_rhs(C, f)) <= 1e-9
