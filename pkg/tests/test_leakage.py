import itertools
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from leakage_lab.codes import codewords, from_generator, full_space, repetition_code, zero_sum_code
from leakage_lab.gf import get_field
from leakage_lab.leakage import (
    AdversaryModel,
    LeakageFamily,
    exact_sd,
    lowbits,
    make_family,
    phi0,
    random_family,
    reconstruction_weights,
    sd_dual_form,
    table_family,
    trace_attack,
    tracebit,
)
from leakage_lab.sss import additive, build_conditional_code, shamir, share


def brute_sd(C, tau):
    """SD by listing every vector of F_q^n, in exact rational arithmetic."""
    F = C.field
    pc = Counter(tuple(tau.apply(w[None, :])[0]) for w in codewords(C))
    pu = Counter()
    for v in itertools.product(range(F.q), repeat=C.n):
        pu[tuple(tau.apply(np.array([v]))[0])] += 1
    nc, nu = C.size, F.q**C.n
    keys = set(pc) | set(pu)
    return float(sum(abs(Fraction(pc[k], nc) - Fraction(pu[k], nu)) for k in keys) / 2)


def test_family_builders(F9, F25):
    t = tracebit(F9, 3)
    assert t.alphabet == 2 and t.mu == 1 and t.tables.shape == (3, 9)
    assert np.all(t.tables[0] == (F9.trace_table == 2))
    lb = lowbits(F25, 2, 2)
    assert np.all(lb.tables[1] == np.arange(25) % 4)
    r1, r2 = random_family(F25, 3, 2, seed=7), random_family(F25, 3, 2, seed=7)
    assert np.array_equal(r1.tables, r2.tables)
    assert make_family(F9, 2, "random:7:1").tables.shape == (2, 9)
    assert make_family(F9, 2, {"table": list(range(2)) * 4 + [1], "mu": 1}).tables.shape == (2, 9)
    with pytest.raises(ValueError):
        make_family(F9, 2, "bogus")
    with pytest.raises(ValueError):
        table_family(F9, np.full((2, 9), 2), 1)
    with pytest.raises(ValueError, match="attackable regime"):
        lowbits(F9, 2, 2).check_mu()
    with pytest.raises(ValueError):
        phi0(F9, 2).check_mu()


def test_adversary_model():
    assert AdversaryModel(2, 1).corrupted() == (0, 1)
    assert AdversaryModel(2, 1, (4, 1)).corrupted() == (4, 1)
    with pytest.raises(ValueError):
        AdversaryModel(2, 1, (1, 1)).corrupted()


def test_sd_trivial_cases(F9, rng):
    C = from_generator(F9, rng.integers(0, 9, (2, 4)))
    const = table_family(F9, np.zeros((4, 9), dtype=np.int64), 1)
    assert exact_sd(C, const) == pytest.approx(0, abs=1e-12)
    full = full_space(F9, 3)
    tau = random_family(F9, 3, 1, seed=3)
    assert exact_sd(full, tau) == pytest.approx(0, abs=1e-12)
    assert sd_dual_form(full, tau) == pytest.approx(0, abs=1e-12)


def test_diagonal_tracebit(F9):
    C = from_generator(F9, [(1, 1)])
    tau = tracebit(F9, 2)
    # leak pair is (b, b) with P[b=1] = 1/3; uniform pair has product law
    ref = 0.5 * (abs(2 / 3 - 4 / 9) + abs(1 / 3 - 1 / 9) + 2 * 2 / 9)
    assert exact_sd(C, tau) == pytest.approx(ref, abs=1e-12)
    assert sd_dual_form(C, tau) == pytest.approx(ref, abs=1e-12)
    assert brute_sd(C, tau) == pytest.approx(ref, abs=1e-12)


def test_against_brute_force(F9, F5, rng):
    for F, n, k in [(F9, 3, 1), (F9, 4, 2), (F5, 4, 2), (F5, 5, 3)]:
        for seed in range(3):
            C = from_generator(F, rng.integers(0, F.q, (k, n)))
            tau = random_family(F, n, 1, seed)
            ref = brute_sd(C, tau)
            assert exact_sd(C, tau) == pytest.approx(ref, abs=1e-12)
            assert sd_dual_form(C, tau) == pytest.approx(ref, abs=1e-9)


def test_repetition_f5(F5):
    C = repetition_code(F5, 3)
    for seed in range(5):
        tau = random_family(F5, 3, 1, seed)
        assert sd_dual_form(C, tau) == pytest.approx(exact_sd(C, tau), abs=1e-9)


def test_threads_give_same_answer(F9, herm_scheme):
    sl = build_conditional_code(herm_scheme, 0, [], [])
    tau = random_family(F9, 26, 1, seed=1)
    assert exact_sd(sl, tau, threads=4) == exact_sd(sl, tau, threads=1)


def test_affine_shift_invariance(F9, herm_scheme):
    sv = share(herm_scheme, 3, seed=4)
    sl = build_conditional_code(herm_scheme, 3, [0], sv.shares[[0]])
    tau = random_family(F9, 25, 1, seed=8)
    assert exact_sd(sl, tau) == pytest.approx(exact_sd(sl.code, tau.compose_shift(sl.live_shift)), abs=1e-12)


def test_length_mismatch(F9):
    with pytest.raises(ValueError):
        exact_sd(zero_sum_code(F9, 3), tracebit(F9, 4))


def test_attack_additive_and_shamir(F9, F25):
    rep = trace_attack(additive(F9, 3), 0, 1, trials=200)
    assert rep.relation_holds == 200 and rep.separated and rep.empirical_sd == 1.0
    s = shamir(F25, 6, 2)
    w = reconstruction_weights(s)
    for seed in range(10):
        sv = share(s, 17, seed)
        acc = 0
        for wi, si in zip(w, sv.shares):
            acc = F25.add(acc, F25.mul(int(wi), int(si)))
        assert acc == 17
    rep = trace_attack(s, 0, 1, trials=200, seed=5)
    assert rep.relation_holds == 200 and rep.separated
    # 0 and 5 share their first coordinate in F_25
    rep = trace_attack(s, 0, 5, trials=50)
    assert "no separation" in rep.flags and not rep.separated and rep.relation_holds == 50


def test_attack_rejects_vector_secrets(F9):
    from leakage_lab.funcfield import rational
    from leakage_lab.sss import agsh, eagsh

    with pytest.raises(ValueError):
        trace_attack(eagsh(agsh(rational(F9), 2), 1, 2))


@given(st.integers(0, 2**31), st.integers(2, 4), st.integers(1, 2))
def test_primal_dual_agree(seed, n, k):
    F = get_field(3, 2)
    r = np.random.Generator(np.random.Philox(seed))
    C = from_generator(F, r.integers(0, 9, (min(k, n), n)))
    tau = random_family(F, n, 1, seed)
    assert abs(exact_sd(C, tau) - sd_dual_form(C, tau)) <= 1e-9


@given(st.integers(0, 2**31), st.integers(2, 5))
def test_sd_is_a_distance(seed, n):
    F = get_field(5)
    r = np.random.Generator(np.random.Philox(seed))
    C = from_generator(F, r.integers(0, 5, (2, n)))
    sd = exact_sd(C, random_family(F, n, 2, seed))
    assert -1e-12 <= sd <= 1 + 1e-12
