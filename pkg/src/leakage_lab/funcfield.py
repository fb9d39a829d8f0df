"""Algebraic-geometric codes from two concrete curves.

* the rational function field (genus 0): L(m P_inf) is the polynomials of
  degree <= m, giving Reed-Solomon codes;
* the Hermitian curve ``y^{q0} + y = x^{q0+1}`` over F_{q0^2} (genus
  ``q0 (q0 - 1) / 2``), whose space L(m P_inf) has the monomial basis
  ``x^i y^j`` with ``j < q0`` and pole order ``i q0 + j (q0 + 1) <= m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .codes import LinearCode, from_generator
from .gf import FieldElement, FieldParams
from .linalg import rank

RATIONAL = "rational"
HERMITIAN = "hermitian"


@dataclass(frozen=True)
class Curve:
    kind: str
    field: FieldParams
    q0: int = 0

    @property
    def genus(self) -> int:
        if self.kind == RATIONAL:
            return 0
        return self.q0 * (self.q0 - 1) // 2

    def __str__(self) -> str:
        return f"{self.kind} curve over F_{self.field} (genus {self.genus})"


def rational(F: FieldParams) -> Curve:
    return Curve(RATIONAL, F)


def hermitian(F: FieldParams) -> Curve:
    if F.w % 2:
        raise ValueError(f"Hermitian curve needs a square field size, got F_{F}")
    return Curve(HERMITIAN, F, F.p ** (F.w // 2))


def make_curve(kind: str, F: FieldParams) -> Curve:
    if kind == RATIONAL:
        return rational(F)
    if kind == HERMITIAN:
        return hermitian(F)
    raise ValueError(f"unknown curve {kind!r}")


@dataclass(frozen=True)
class RRBasis:
    curve: Curve
    m: int
    monomials: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.monomials)

    def pole_orders(self) -> list[int]:
        return [pole_order(self.curve, i, j) for i, j in self.monomials]


def pole_order(curve: Curve, i: int, j: int) -> int:
    if curve.kind == RATIONAL:
        return i
    return i * curve.q0 + j * (curve.q0 + 1)


def rr_basis(curve: Curve, m: int) -> RRBasis:
    """Monomial basis of L(m P_inf), sorted by pole order."""
    if m < 0:
        return RRBasis(curve, m, ())
    if curve.kind == RATIONAL:
        mons = [(i, 0) for i in range(m + 1)]
    else:
        q0 = curve.q0
        mons = [(i, j) for j in range(q0) for i in range(m // q0 + 1) if i * q0 + j * (q0 + 1) <= m]
    mons.sort(key=lambda ij: (pole_order(curve, *ij), ij))
    return RRBasis(curve, m, tuple(mons))


@dataclass(frozen=True)
class PointSet:
    curve: Curve
    points: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.points)

    def subset(self, indices: Sequence[int]) -> "PointSet":
        return PointSet(self.curve, tuple(self.points[i] for i in indices))


def enumerate_points(curve: Curve) -> PointSet:
    """All affine rational points, ordered by the encodings of (x, y)."""
    F = curve.field
    if curve.kind == RATIONAL:
        return PointSet(curve, tuple((a,) for a in range(F.q)))
    q0 = curve.q0
    xs = np.arange(F.q)
    lhs = F.add(F.power(xs, q0), xs)  # y^q0 + y, indexed by y
    rhs = F.power(xs, q0 + 1)  # x^(q0+1), indexed by x
    pts = [(int(x), int(y)) for x in xs for y in xs if lhs[y] == rhs[x]]
    return PointSet(curve, tuple(pts))


def on_curve(curve: Curve, point: tuple[int, ...]) -> bool:
    F = curve.field
    if curve.kind == RATIONAL:
        return len(point) == 1 and 0 <= point[0] < F.q
    x, y = (F.element(c) for c in point)
    return (y**curve.q0 + y) == x ** (curve.q0 + 1)


def evaluation_matrix(basis: RRBasis, points: PointSet | Sequence[tuple[int, ...]]) -> np.ndarray:
    """``E[b, j] = monomial_b(P_j)``, shape (dim L, #points)."""
    pts = points.points if isinstance(points, PointSet) else tuple(points)
    F = basis.curve.field
    out = np.zeros((len(basis), len(pts)), dtype=np.int64)
    if not pts:
        return out
    xs = np.array([pt[0] for pt in pts], dtype=np.int64)
    ys = np.array([pt[1] if len(pt) > 1 else 0 for pt in pts], dtype=np.int64)
    for b, (i, j) in enumerate(basis.monomials):
        out[b] = F.mul(F.power(xs, i), F.power(ys, j))
    return out


def evaluate(basis: RRBasis, f_coeffs: Sequence[int | FieldElement], point: tuple[int, ...]) -> FieldElement:
    """Value at ``point`` of the function with the given basis coefficients."""
    if len(f_coeffs) != len(basis):
        raise ValueError(f"expected {len(basis)} coefficients, got {len(f_coeffs)}")
    F = basis.curve.field
    x = F.element(point[0])
    y = F.element(point[1]) if len(point) > 1 else F.zero()
    acc = F.zero()
    for c, (i, j) in zip(f_coeffs, basis.monomials):
        c = c if isinstance(c, FieldElement) else F.element(int(c))
        acc = acc + c * (x**i) * (y**j)
    return acc


def ag_code(curve: Curve, m: int, points: PointSet) -> LinearCode:
    """The evaluation code C(m P_inf, points): an [n, m-g+1, >= n-m] code."""
    g = curve.genus
    n = len(points)
    if not (2 * g - 1 <= m < n):
        raise ValueError(f"pole order m={m} outside [2g-1, n) = [{2 * g - 1}, {n})")
    basis = rr_basis(curve, m)
    return from_generator(curve.field, evaluation_matrix(basis, points), n)


def reed_solomon(F: FieldParams, k: int, n: int | None = None) -> LinearCode:
    """[n, k] RS code on the first n field elements (all of F_q by default)."""
    pts = enumerate_points(rational(F))
    if n is not None:
        pts = pts.subset(range(n))
    return ag_code(rational(F), k - 1, pts)


def eval_map_rank(curve: Curve, m: int, subset_points: PointSet | Sequence[tuple[int, ...]]) -> int:
    """Rank of f -> (f(P))_{P in subset} on L(m P_inf)."""
    e = evaluation_matrix(rr_basis(curve, m), subset_points)
    if e.size == 0:
        return 0
    return rank(curve.field, e)
