import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from leakage_lab.codes import dual_distance, min_distance
from leakage_lab.funcfield import (
    ag_code,
    enumerate_points,
    eval_map_rank,
    evaluate,
    evaluation_matrix,
    hermitian,
    make_curve,
    on_curve,
    rational,
    reed_solomon,
    rr_basis,
)
from leakage_lab.gf import get_field


def test_curves(F9, F3):
    assert rational(F9).genus == 0
    H = hermitian(F9)
    assert (H.q0, H.genus) == (3, 3)
    with pytest.raises(ValueError):
        hermitian(get_field(3, 3))
    with pytest.raises(ValueError):
        make_curve("elliptic", F9)


def test_rr_basis_examples(F9):
    assert rr_basis(rational(F9), 2).monomials == ((0, 0), (1, 0), (2, 0))
    H = hermitian(F9)
    assert set(rr_basis(H, 6).monomials) == {(0, 0), (1, 0), (2, 0), (0, 1)}
    assert len(rr_basis(H, 5)) == 3
    assert len(rr_basis(H, -1)) == 0
    # independent count of (i, j) with 3i + 4j <= m, j <= 2
    for m in range(0, 30):
        count = sum(1 for i in range(m + 1) for j in range(3) if 3 * i + 4 * j <= m)
        assert len(rr_basis(H, m)) == count
        if m >= 5:
            assert count == m + 1 - 3


def test_points(F9):
    assert len(enumerate_points(rational(F9))) == 9
    H = hermitian(F9)
    pts = enumerate_points(H)
    # independent brute force with scalar arithmetic
    brute = set()
    for x, y in itertools.product(range(9), repeat=2):
        X, Y = F9.element(x), F9.element(y)
        if Y**3 + Y == X**4:
            brute.add((x, y))
    assert set(pts.points) == brute and len(brute) == 27
    assert len(set(pts.points)) == 27
    assert all(on_curve(H, pt) for pt in pts.points)
    assert not on_curve(H, (1, 0))


def test_evaluate(F9):
    H = hermitian(F9)
    B = rr_basis(H, 6)
    idx = B.monomials.index((0, 1))
    for pt in enumerate_points(H).points[:5]:
        c = [0] * len(B)
        c[idx] = 1
        assert evaluate(B, c, pt).enc == pt[1]
        assert evaluate(B, [4, 0, 0, 0], pt).enc == 4
    R = rr_basis(rational(F9), 3)
    assert evaluate(R, [0, 1, 0, 0], (5,)).enc == 5
    with pytest.raises(ValueError):
        evaluate(R, [1, 2], (0,))


def test_evaluation_matrix_matches_scalar(F9):
    H = hermitian(F9)
    B = rr_basis(H, 9)
    pts = enumerate_points(H)
    E = evaluation_matrix(B, pts)
    for b, (i, j) in enumerate(B.monomials):
        for col, (x, y) in enumerate(pts.points):
            assert E[b, col] == (F9.element(x) ** i * F9.element(y) ** j).enc


def test_ag_codes(F9):
    C = ag_code(rational(F9), 2, enumerate_points(rational(F9)))
    assert (C.n, C.k, min_distance(C)) == (9, 3, 7)
    assert dual_distance(C).value == 4
    H = hermitian(F9)
    C = ag_code(H, 6, enumerate_points(H))
    assert (C.n, C.k) == (27, 4)
    assert min_distance(C) >= 21
    with pytest.raises(ValueError):
        ag_code(H, 4, enumerate_points(H))
    with pytest.raises(ValueError):
        ag_code(H, 27, enumerate_points(H))


def test_eval_map_rank(F9):
    R = rational(F9)
    assert eval_map_rank(R, 3, enumerate_points(R).subset(range(4))) == 4
    H = hermitian(F9)
    pts = enumerate_points(H)
    for ell in range(1, 9):
        assert eval_map_rank(H, 5 + ell, pts.subset(range(ell))) == ell
    assert eval_map_rank(H, 5, pts) == 3


@given(st.integers(1, 4), st.sampled_from([(3, 2), (5, 2), (7, 1)]))
def test_rs_singleton(k, pw):
    F = get_field(*pw)
    k = min(k, F.q - 1)
    C = reed_solomon(F, k)
    assert C.k == k
    assert min_distance(C) == F.q - k + 1


@given(st.integers(5, 26), st.lists(st.integers(0, 26), min_size=1, max_size=12, unique=True))
def test_hermitian_surjectivity(m, subset):
    """Evaluation on ell points is onto once m >= 2g - 1 + ell."""
    F = get_field(3, 2)
    H = hermitian(F)
    pts = enumerate_points(H).subset(subset)
    r = eval_map_rank(H, m, pts)
    assert r <= min(len(subset), len(rr_basis(H, m)))
    if m >= 5 + len(subset):
        assert r == len(subset)
