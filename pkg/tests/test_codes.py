import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from leakage_lab.budget import BudgetExceeded
from leakage_lab.codes import (
    codewords,
    concatenate,
    concatenation_map,
    dependent_column_distance,
    distance,
    dual,
    dual_distance,
    enumerate_codewords,
    from_generator,
    full_space,
    min_distance,
    puncture,
    repetition_code,
    zero_code,
    zero_sum_code,
)
from leakage_lab.funcfield import reed_solomon
from leakage_lab.gf import get_field
from leakage_lab.linalg import matmul, nullspace, rank, rref, solve


def brute_words(F, rows):
    """All F-combinations of rows, by scalar arithmetic."""
    rows = [[F.element(int(x)) for x in r] for r in rows]
    n = len(rows[0]) if rows else 0
    out = set()
    for coeffs in itertools.product(range(F.q), repeat=len(rows)):
        w = [F.zero()] * n
        for c, r in zip(coeffs, rows):
            w = [a + F.element(c) * b for a, b in zip(w, r)]
        out.add(tuple(x.enc for x in w))
    return out


def brute_distance(words):
    nz = [sum(1 for x in w if x) for w in words if any(w)]
    return min(nz) if nz else None


def test_repetition_examples(F3):
    C = from_generator(F3, [(1, 1)])
    assert (C.n, C.k) == (2, 1)
    assert {tuple(w) for w in codewords(C)} == {(0, 0), (1, 1), (2, 2)}
    assert from_generator(F3, [(1, 1), (2, 2)]).k == 1
    assert dual(C).same_code(from_generator(F3, [(1, 2)]))
    assert min_distance(repetition_code(F3, 3)) == 3


def test_dual_of_extremes(F3):
    assert dual(full_space(F3, 2)).k == 0
    assert dual(zero_code(F3, 4)).same_code(full_space(F3, 4))
    assert min_distance(zero_code(F3, 4)) == 5
    assert dual_distance(full_space(F3, 3)).value == 4


def test_random_generator_parity(F9, rng):
    G = rng.integers(0, 9, size=(3, 6))
    C = from_generator(F9, G)
    assert C.parity.shape == (6 - C.k, 6)
    assert not np.any(matmul(F9, C.generator, C.parity.T))
    assert rank(F9, C.generator) == C.k
    assert rank(F9, C.parity) == 6 - C.k


def test_enumeration(F9, rng):
    C = from_generator(F9, np.eye(3, 6, dtype=np.int64) + np.triu(rng.integers(0, 9, (3, 6)), 3))
    words = codewords(C)
    assert words.shape == (729, 6)
    assert len({tuple(w) for w in words}) == 729
    assert all(C.contains(w) for w in words[::37])
    chunks = list(enumerate_codewords(C, chunk_size=100))
    assert sum(len(c) for c in chunks) == 729
    with pytest.raises(BudgetExceeded, match="budget 10"):
        codewords(C, budget=10)


def test_rs_is_mds(F9, F25):
    for F in (F9, F25):
        for k in (1, 2, 3, 4):
            C = reed_solomon(F, k)
            assert min_distance(C) == F.q - k + 1
    assert dual_distance(reed_solomon(F9, 3)).value == 4


def test_min_distance_matches_brute_force(F9, rng):
    for _ in range(10):
        G = rng.integers(0, 9, size=(2, 5))
        C = from_generator(F9, G)
        words = brute_words(F9, G.tolist())
        assert words == {tuple(w) for w in codewords(C)}
        d = brute_distance(words)
        assert min_distance(C) == (d if d is not None else 6)


def test_column_distance_agrees(F9, rng):
    for _ in range(10):
        C = from_generator(F9, rng.integers(0, 9, size=(3, 6)))
        assert dependent_column_distance(F9, C.parity).value == min_distance(C)
        assert dependent_column_distance(F9, C.generator).value == min_distance(C.dual())
    # falls back to a lower bound when the subset search is over budget
    C = reed_solomon(F9, 3)
    d = dependent_column_distance(F9, C.parity, budget=5)
    assert not d.exact and d.value <= 7
    d = distance(C, budget=100)
    assert not d.exact and d.value <= 7
    assert distance(C).value == 7


def test_concatenation_example(F9, F3):
    C = from_generator(F9, [(1, 1)])
    Cc = concatenate(C, 1, 2)
    assert Cc.field == F3 and (Cc.n, Cc.k) == (4, 2)
    pi = concatenation_map(F9, 1, 2)
    # expand is a bijection and F_3-linear
    ex = pi.expand(np.arange(9)[:, None])
    assert len({tuple(r) for r in ex}) == 9
    assert np.all(pi.collapse(ex)[:, 0] == np.arange(9))
    for a, b in itertools.product(range(9), repeat=2):
        assert np.all(pi.table[F9.add(a, b)] == F3.add(pi.table[a], pi.table[b]))
    assert min_distance(Cc) >= min_distance(C)
    expanded = {tuple(np.concatenate([pi.table[w[0]], pi.table[w[1]]])) for w in codewords(C)}
    assert expanded == {tuple(w) for w in codewords(Cc)}
    assert concatenate(zero_code(F9, 3), 1, 2).k == 0


def test_puncture(F3, F9, rng):
    assert puncture(repetition_code(F3, 3), [0, 1]).same_code(repetition_code(F3, 2))
    assert puncture(from_generator(F3, [(1, 0)]), [1]).k == 0
    for _ in range(6):
        C = from_generator(F9, rng.integers(0, 9, size=(3, 6)))
        dp = dual_distance(C).value
        for kappa in (3, 4, 5):
            live = sorted(rng.choice(6, kappa, replace=False))
            assert dual_distance(puncture(C, live)).value >= dp - (6 - kappa)


def test_zero_sum(F9):
    C = zero_sum_code(F9, 4)
    assert (C.k, min_distance(C), dual_distance(C).value) == (3, 2, 4)


def test_linalg(F9, rng):
    a = rng.integers(0, 9, size=(3, 5))
    R, piv = rref(F9, a)
    assert rank(F9, a) == len(piv)
    N = nullspace(F9, a)
    assert N.shape[0] == 5 - len(piv)
    assert not np.any(matmul(F9, a, N.T))
    x = rng.integers(0, 9, size=5)
    b = matmul(F9, a, x[:, None])[:, 0]
    y = solve(F9, a, b)
    assert np.all(matmul(F9, a, y[:, None])[:, 0] == b)
    assert solve(F9, np.zeros((2, 2), dtype=np.int64), np.array([1, 0])) is None


@given(st.lists(st.lists(st.integers(0, 4), min_size=4, max_size=4), min_size=1, max_size=3))
def test_generator_invariants(rows):
    F = get_field(5)
    C = from_generator(F, rows)
    assert C.k == rank(F, np.array(rows))
    assert C.k + C.dual().k == 4
    if C.k and C.dual().k:
        assert not np.any(matmul(F, C.generator, C.parity.T))
    for r in rows:
        assert C.contains(r)
    if C.k:
        assert min_distance(C) <= 4 - C.k + 1
