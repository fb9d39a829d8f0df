"""Linear codes over F_q: generator/parity pairs, duals, brute-force
distances, codeword enumeration, puncturing and symbol concatenation."""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import budget as _budget
from .gf import FieldParams, get_field
from .linalg import as_matrix, matmul, nullspace, rank, row_space_equal, rref


@dataclass(frozen=True, eq=False)
class LinearCode:
    """An ``[n, k]`` code with row-reduced generator and a parity-check matrix."""

    field: FieldParams
    n: int
    generator: np.ndarray
    parity: np.ndarray

    @property
    def k(self) -> int:
        return int(self.generator.shape[0])

    @property
    def size(self) -> int:
        return self.field.q**self.k

    def __repr__(self) -> str:
        return f"LinearCode([{self.n}, {self.k}] over F_{self.field})"

    def dual(self) -> "LinearCode":
        return LinearCode(self.field, self.n, self.parity, self.generator)

    def contains(self, word) -> bool:
        word = np.asarray(word, dtype=np.int64)
        if self.parity.shape[0] == 0:
            return True
        return not np.any(matmul(self.field, self.parity, word[:, None]))

    def same_code(self, other: "LinearCode") -> bool:
        return (
            self.field == other.field
            and self.n == other.n
            and self.k == other.k
            and row_space_equal(self.field, self.generator, other.generator)
        )

    def encode(self, messages) -> np.ndarray:
        messages = np.atleast_2d(np.asarray(messages, dtype=np.int64))
        if self.k == 0:
            return np.zeros((messages.shape[0], self.n), dtype=np.int64)
        return matmul(self.field, messages, self.generator)


def from_generator(F: FieldParams, rows, n: int | None = None) -> LinearCode:
    """Code spanned by ``rows``; dependent rows are dropped."""
    if isinstance(rows, np.ndarray):
        m = rows.astype(np.int64)
    else:
        rows = [list(r) for r in rows]
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("ragged generator rows")
        m = as_matrix(rows, n)
    if m.ndim != 2:
        raise ValueError("generator must be 2D")
    if m.shape[0] == 0 and n is None and m.shape[1] == 0:
        raise ValueError("empty generator needs an explicit length n")
    length = m.shape[1] if m.shape[1] or n is None else n
    if n is not None and length != n:
        raise ValueError(f"rows have length {length}, expected {n}")
    if np.any((m < 0) | (m >= F.q)):
        raise ValueError("generator entries must be encodings in [0, q)")
    if m.shape[0] == 0:
        m = np.zeros((0, length), dtype=np.int64)
    g, _ = rref(F, m)
    h = nullspace(F, g) if g.shape[0] else np.eye(length, dtype=np.int64)
    return LinearCode(F, length, g, h)


def zero_code(F: FieldParams, n: int) -> LinearCode:
    return from_generator(F, np.zeros((0, n), dtype=np.int64), n)


def full_space(F: FieldParams, n: int) -> LinearCode:
    return from_generator(F, np.eye(n, dtype=np.int64))


def repetition_code(F: FieldParams, n: int) -> LinearCode:
    return from_generator(F, np.ones((1, n), dtype=np.int64))


def zero_sum_code(F: FieldParams, n: int) -> LinearCode:
    """Additive shares of 0: ``{x : sum x_i = 0}``."""
    return repetition_code(F, n).dual()


def dual(C: LinearCode) -> LinearCode:
    return C.dual()


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _messages(q: int, k: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    return (idx[:, None] // (q ** np.arange(k, dtype=np.int64))[None, :]) % q


def enumerate_codewords(
    C: LinearCode, chunk_size: int = 1 << 15, budget: int | None = None
) -> Iterator[np.ndarray]:
    """Yield all ``q^k`` codewords in chunks of rows.

    Row ``i`` overall is the encoding of the message whose base-q digits,
    least significant first, are the message coordinates.
    """
    total = C.size
    _budget.check("codeword enumeration", total, budget)
    if C.k == 0:
        yield np.zeros((1, C.n), dtype=np.int64)
        return
    for start in range(0, total, chunk_size):
        stop = min(total, start + chunk_size)
        yield matmul(C.field, _messages(C.field.q, C.k, start, stop), C.generator)


def codewords(C: LinearCode, budget: int | None = None) -> np.ndarray:
    return np.concatenate(list(enumerate_codewords(C, budget=budget)), axis=0)


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Distance:
    """A minimum distance; ``exact=False`` marks a certified lower bound."""

    value: int
    exact: bool
    method: str


def min_distance(C: LinearCode, budget: int | None = None) -> int:
    """Minimum Hamming weight of a nonzero codeword (n+1 for the zero code).

    Enumerates one representative per line through the origin, since scalar
    multiples share a weight.
    """
    if C.k == 0:
        return C.n + 1
    q, k = C.field.q, C.k
    try:
        _budget.check("distance enumeration", q**k, budget)
    except _budget.BudgetExceeded as exc:
        raise _budget.BudgetExceeded("distance enumeration", exc.size, exc.budget) from None
    best = C.n
    # messages whose leading (last) nonzero coordinate is 1
    for lead in range(k):
        count = q**lead
        for start in range(0, count, 1 << 15):
            stop = min(count, start + (1 << 15))
            msgs = np.zeros((stop - start, k), dtype=np.int64)
            if lead:
                msgs[:, :lead] = _messages(q, lead, start, stop)
            msgs[:, lead] = 1
            words = matmul(C.field, msgs, C.generator)
            best = min(best, int(np.count_nonzero(words, axis=1).min()))
    return best


def dependent_column_distance(
    F: FieldParams, m: np.ndarray, budget: int | None = None
) -> Distance:
    """Size of the smallest linearly dependent set of columns of ``m``.

    For a parity-check matrix this is the code's minimum distance; for a
    generator matrix it is the dual distance. When the subset search runs out
    of budget the result is a certified lower bound.
    """
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[1]
    r = rank(F, m) if m.shape[0] else 0
    if r == 0:
        return Distance(1, True, "columns")
    limit = _budget.get_budget(budget)
    spent = 0
    for s in range(1, min(r, n) + 1):
        cnt = math.comb(n, s)
        if spent + cnt > limit:
            return Distance(s, False, "columns")
        spent += cnt
        for cols in itertools.combinations(range(n), s):
            sub = m[:, cols]
            if rank(F, sub) < s:
                return Distance(s, True, "columns")
    # every set of <= r columns independent; r+1 columns always dependent
    return Distance(r + 1 if n > r else n + 1, True, "columns")


def distance(C: LinearCode, budget: int | None = None) -> Distance:
    """Exact distance by enumeration, else by column dependency of H."""
    try:
        return Distance(min_distance(C, budget), True, "enumeration")
    except _budget.BudgetExceeded:
        if C.k == C.n:
            return Distance(1, True, "columns")
        return dependent_column_distance(C.field, C.parity, budget)


def dual_distance(C: LinearCode, budget: int | None = None) -> Distance:
    """Distance of ``C``'s dual; n+1 when ``C`` is the full space."""
    if C.k == C.n:
        return Distance(C.n + 1, True, "convention")
    if C.k == 0:
        return Distance(1, True, "convention")
    q = C.field.q
    # enumerating the dual is cheap when it is small; otherwise search G's columns
    if q ** (C.n - C.k) <= min(_budget.get_budget(budget), 10**6):
        return Distance(min_distance(C.dual(), budget), True, "enumeration")
    return dependent_column_distance(C.field, C.generator, budget)


def singleton_defect(C: LinearCode, budget: int | None = None) -> int:
    return C.n - C.k + 1 - min_distance(C, budget)


# ---------------------------------------------------------------------------
# puncturing
# ---------------------------------------------------------------------------


def puncture(C: LinearCode, live_indices: Sequence[int]) -> LinearCode:
    """Projection of C onto ``live_indices`` (in the given order)."""
    live = [int(i) for i in live_indices]
    if not live:
        raise ValueError("empty index set")
    if any(i < 0 or i >= C.n for i in live):
        raise ValueError("index out of range")
    return from_generator(C.field, C.generator[:, live], len(live))


# ---------------------------------------------------------------------------
# concatenation F_{p^w} -> F_{p^u}^v
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Concatenation:
    """A fixed F_{p^u}-linear bijection ``F_{p^w} -> F_{p^u}^v``.

    ``gamma`` generates the copy of F_{p^u} inside F_{p^w} (a root of the
    small field's modulus), ``betas = 1, beta, ..., beta^{v-1}`` is a power
    basis over that subfield. ``table[x]`` holds the ``v`` coordinates of
    ``x`` as F_{p^u} encodings.
    """

    big: FieldParams
    small: FieldParams
    u: int
    v: int
    embed: np.ndarray
    betas: np.ndarray
    table: np.ndarray
    inverse: np.ndarray = field(repr=False)

    def expand(self, x) -> np.ndarray:
        """Apply the map symbol-wise: shape (..., n) -> (..., v*n)."""
        x = np.asarray(x, dtype=np.int64)
        out = self.table[x]
        return out.reshape(*x.shape[:-1], x.shape[-1] * self.v)

    def collapse(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=np.int64)
        blocks = y.reshape(*y.shape[:-1], -1, self.v)
        weights = self.small.q ** np.arange(self.v, dtype=np.int64)
        return self.inverse[blocks @ weights]


@functools.lru_cache(maxsize=None)
def concatenation_map(big: FieldParams, u: int, v: int) -> Concatenation:
    if u * v != big.w:
        raise ValueError(f"w={big.w} is not u*v={u}*{v}")
    p = big.p
    small = get_field(p, u)
    # gamma: smallest root of the small field's modulus inside big
    gamma = None
    for g in range(big.q):
        acc = 0
        for c in reversed(small.modulus):
            acc = int(big.add(big.mul(acc, g), c))
        if acc == 0:
            gamma = g
            break
    if gamma is None:  # pragma: no cover
        raise ValueError("small field does not embed")
    gpow = [1]
    for _ in range(1, u):
        gpow.append(int(big.mul(gpow[-1], gamma)))
    sd = small.digits(np.arange(small.q))
    embed = np.zeros(small.q, dtype=np.int64)
    for i in range(u):
        embed = big.add(embed, big.mul(sd[:, i] % p, gpow[i]))

    prime = get_field(p, 1)
    for b in range(big.q):
        bpow = [1]
        for _ in range(1, v):
            bpow.append(int(big.mul(bpow[-1], b)))
        basis = [int(big.mul(gpow[i], bpow[j])) for j in range(v) for i in range(u)]
        m = big.digits(np.array(basis))
        if rank(prime, m) == big.w:
            break
    else:  # pragma: no cover
        raise ValueError("no power basis found")
    # coordinates c with c @ m = digits(x)  ->  c = digits(x) @ m^{-1}
    aug = np.concatenate([m, np.eye(big.w, dtype=np.int64)], axis=1)
    r, _ = rref(prime, aug)
    minv = r[:, big.w :]
    coords = (big.digits(np.arange(big.q)) @ minv) % p  # (q, v*u), index j*u + i
    coords = coords.reshape(big.q, v, u)
    table = small.encode_digits(coords)
    weights = small.q ** np.arange(v, dtype=np.int64)
    inverse = np.zeros(big.q, dtype=np.int64)
    inverse[table @ weights] = np.arange(big.q)
    return Concatenation(big, small, u, v, embed, np.array(bpow, dtype=np.int64), table, inverse)


def concatenate(C: LinearCode, u: int, v: int) -> LinearCode:
    """Image of C under the symbol-wise map F_{p^w} -> F_{p^u}^v."""
    pi = concatenation_map(C.field, u, v)
    if C.k == 0:
        return zero_code(pi.small, v * C.n)
    rows = [pi.expand(C.field.mul(b, g)) for g in C.generator for b in pi.betas]
    return from_generator(pi.small, np.array(rows), v * C.n)
