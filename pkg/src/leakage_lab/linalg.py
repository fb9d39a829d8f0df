"""Dense linear algebra over F_q on arrays of canonical encodings."""

from __future__ import annotations

import numpy as np

from .gf import FieldParams


def as_matrix(rows, ncols: int | None = None) -> np.ndarray:
    m = np.asarray(rows, dtype=np.int64)
    if m.size == 0:
        return np.zeros((0, ncols or 0), dtype=np.int64)
    if m.ndim != 2:
        raise ValueError("ragged or non-2D matrix")
    return m


def matmul(F: FieldParams, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product over F_q of an (r, s) and an (s, c) matrix."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.ndim == 1:
        return matmul(F, a[None, :], b)[0]
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} x {b.shape}")
    mul, add = F.mul_table, F.add_table
    for j in range(a.shape[1]):
        out = add[out, mul[a[:, j, None], b[None, j, :]]]
    return out


def rref(F: FieldParams, m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns; zero rows are dropped."""
    m = np.array(m, dtype=np.int64, copy=True)
    if m.size == 0:
        return m.reshape(0, m.shape[1] if m.ndim == 2 else 0), []
    rows, cols = m.shape
    mul, add, neg, inv = F.mul_table, F.add_table, F.neg_table, F.inv_table
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = mul[inv[m[r, c]], m[r]]
        factors = neg[m[:, c]]
        factors[r] = 0
        m = add[m, mul[factors[:, None], m[r][None, :]]]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(F: FieldParams, m: np.ndarray) -> int:
    return len(rref(F, m)[1])


def nullspace(F: FieldParams, m: np.ndarray) -> np.ndarray:
    """Rows spanning ``{x : m @ x = 0}``."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    r, pivots = rref(F, m)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = F.neg_table[r[row, f]]
    return basis


def solve(F: FieldParams, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """A particular ``x`` with ``a @ x = b`` (free variables set to 0), or None."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.zeros(cols, dtype=np.int64)
    aug = np.concatenate([a, b[:, None]], axis=1)
    r, pivots = rref(F, aug)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = r[row, cols]
    return x


def row_space_equal(F: FieldParams, a: np.ndarray, b: np.ndarray) -> bool:
    ra, _ = rref(F, a)
    rb, _ = rref(F, b)
    return ra.shape == rb.shape and bool(np.all(ra == rb))
