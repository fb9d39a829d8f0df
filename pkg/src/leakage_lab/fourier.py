"""Fourier analysis on (F_q, +) for leakage bounds.

Coefficients follow ``f^(a) = E_x[f(x) chi_a(x)]`` with
``chi_a(x) = exp(2 pi i Tr(a x) / p)``.  Every inequality used by the
bounds is exposed as a check returning both sides, so tests and the CLI
report margins instead of bare booleans.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import budget as _budget
from .codes import LinearCode, codewords, min_distance
from .gf import FieldParams, character_matrix

TOL = 1e-9
ORACLE_BUDGET = 10**8


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------


def fourier_transform(F: FieldParams, table) -> np.ndarray:
    """All coefficients ``f^(a)`` for ``a`` in encoding order."""
    table = np.asarray(table, dtype=complex)
    if table.shape[-1] != F.q:
        raise ValueError(f"table must have {F.q} entries")
    return table @ character_matrix(F).T / F.q


def fourier_coeff(F: FieldParams, table, alpha: int) -> complex:
    table = np.asarray(table, dtype=complex)
    if table.shape != (F.q,):
        raise ValueError(f"table must have {F.q} entries")
    return complex(character_matrix(F)[int(alpha)] @ table / F.q)


def indicator(F: FieldParams, A: Iterable[int]) -> np.ndarray:
    out = np.zeros(F.q)
    out[list(A)] = 1.0
    return out


def labels_from_parts(F: FieldParams, parts: Sequence[Iterable[int]]) -> np.ndarray:
    """Convert a list of sets into a label table, checking it partitions F_q."""
    labels = np.full(F.q, -1, dtype=np.int64)
    for i, A in enumerate(parts):
        for x in A:
            x = int(x)
            if not 0 <= x < F.q:
                raise ValueError(f"{x} is not an element of F_{F}")
            if labels[x] >= 0:
                raise ValueError("not a partition: sets overlap")
            labels[x] = i
    if np.any(labels < 0):
        raise ValueError("not a partition: sets do not cover the field")
    return labels


def _check_labels(F: FieldParams, labels, n_classes: int | None = None) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (F.q,):
        raise ValueError(f"label table must have {F.q} entries")
    if np.any(labels < 0) or (n_classes is not None and np.any(labels >= n_classes)):
        raise ValueError("label outside the output alphabet")
    return labels


def indicator_coeffs(F: FieldParams, labels, n_classes: int | None = None) -> np.ndarray:
    """``H[l, a]`` = coefficient at ``a`` of the indicator of ``labels == l``."""
    labels = _check_labels(F, labels, n_classes)
    L = int(labels.max()) + 1 if n_classes is None else n_classes
    ind = (labels[None, :] == np.arange(L)[:, None]).astype(float)
    return fourier_transform(F, ind)


# ---------------------------------------------------------------------------
# Poisson summation
# ---------------------------------------------------------------------------


def _tables(C: LinearCode, tables) -> np.ndarray:
    t = np.asarray(tables, dtype=complex)
    if t.shape != (C.n, C.field.q):
        raise ValueError(f"need {C.n} tables of {C.field.q} entries")
    return t


def poisson_lhs(C: LinearCode, tables, budget: int | None = None) -> complex:
    """``E_{x in C} prod_i f_i(x_i)`` by codeword enumeration."""
    t = _tables(C, tables)
    words = codewords(C, budget)
    vals = t[np.arange(C.n)[None, :], words]
    return complex(np.prod(vals, axis=1).mean())


def poisson_rhs(C: LinearCode, tables, budget: int | None = None) -> complex:
    """``sum_{a in dual} prod_j f_j^(a_j)`` by dual enumeration."""
    t = _tables(C, tables)
    hats = fourier_transform(C.field, t)
    words = codewords(C.dual(), budget)
    vals = hats[np.arange(C.n)[None, :], words]
    return complex(np.prod(vals, axis=1).sum())


# ---------------------------------------------------------------------------
# sums of p-th roots of unity
# ---------------------------------------------------------------------------


def omega_sum(F: FieldParams, S: Iterable[int]) -> complex:
    """``sum_{x in S} omega_p^{Tr(x)}``."""
    S = np.asarray(list(S), dtype=np.int64)
    if S.size == 0:
        return 0j
    return complex(np.exp(2j * np.pi * F.trace(S) / F.p).sum())


def trace_level_sets(F: FieldParams) -> list[np.ndarray]:
    """``T_i = {x : Tr(x) = i}`` for i = 0..p-1, each sorted by encoding."""
    tr = F.trace_table
    return [np.nonzero(tr == i)[0] for i in range(F.p)]


@dataclass(frozen=True)
class RootSumProblem:
    field: FieldParams
    subset: tuple[int, ...]
    s: int
    s1: int
    s2: int

    @property
    def value(self) -> float:
        return abs(omega_sum(self.field, self.subset))

    @property
    def closed_form(self) -> float:
        p, w = self.field.p, self.field.w
        om = np.exp(2j * np.pi * np.arange(p) / p)
        block = p ** (w - 1)
        return float(abs(self.s2 * om[: self.s1 + 1].sum() + (block - self.s2) * om[: self.s1].sum()))

    @property
    def sine_bound(self) -> float:
        p, w = self.field.p, self.field.w
        return p ** (w - 1) * math.sin(math.pi * self.s / p**w) / math.sin(math.pi / p)


def split_size(F: FieldParams, s: int) -> tuple[int, int]:
    if not 0 <= s <= F.q - 1:
        raise ValueError(f"subset size s={s} outside [0, {F.q - 1}]")
    block = F.p ** (F.w - 1)
    return s // block, s % block


def extremal_set(F: FieldParams, s: int, partial: Sequence[int] | None = None) -> RootSumProblem:
    """Whole trace levels 0..s1-1 plus s2 elements of level s1.

    The partial level uses its smallest encodings unless ``partial`` names
    the elements explicitly.
    """
    s1, s2 = split_size(F, s)
    levels = trace_level_sets(F)
    chosen = [int(x) for i in range(s1) for x in levels[i]]
    if s2:
        if partial is None:
            extra = [int(x) for x in levels[s1][:s2]]
        else:
            extra = sorted({int(x) for x in partial})
            if len(extra) != s2 or not set(extra) <= set(levels[s1].tolist()):
                raise ValueError(f"partial level must be {s2} elements of trace {s1}")
        chosen += extra
    return RootSumProblem(F, tuple(sorted(chosen)), s, s1, s2)


def root_sum_max_oracle(F: FieldParams, s: int, budget: int | None = ORACLE_BUDGET) -> float:
    """Max of ``|omega_sum(S)|`` over every size-s subset, by exhaustion."""
    split_size(F, s)
    _budget.check("subset enumeration", math.comb(F.q, s), budget)
    roots = np.exp(2j * np.pi * F.trace_table / F.p)
    if s == 0:
        return 0.0
    best = 0.0
    combos = itertools.combinations(range(F.q), s)
    while True:
        chunk = np.array(list(itertools.islice(combos, 1 << 16)), dtype=np.int64)
        if chunk.size == 0:
            break
        best = max(best, float(np.abs(roots[chunk].sum(axis=1)).max()))
    return best


# ---------------------------------------------------------------------------
# bound constants
# ---------------------------------------------------------------------------


def _check_mu(mu) -> int:
    if int(mu) != mu or mu <= 0:
        raise ValueError(f"mu must be a positive integer, got {mu}")
    return int(mu)


def c_mu(p: float, mu: int) -> float:
    """``2^mu sin(pi / 2^mu) / (p sin(pi / p))``."""
    L = 2 ** _check_mu(mu)
    return L * math.sin(math.pi / L) / (p * math.sin(math.pi / p))


def c_mu_prime(p: float, mu: int) -> float:
    """``2^mu sin(pi / 2^mu + pi / 2^{4 mu}) / (p sin(pi / p))``."""
    mu = _check_mu(mu)
    L = 2**mu
    return L * math.sin(math.pi / L + math.pi / 2 ** (4 * mu)) / (p * math.sin(math.pi / p))


def zeta(F: FieldParams, x) -> np.ndarray | float:
    x = np.asarray(x, dtype=float)
    out = F.q * np.sin(np.pi * x / F.q) / (F.p * math.sin(math.pi / F.p))
    return float(out) if out.ndim == 0 else out


def xi(F: FieldParams, mu: int, x) -> np.ndarray | float:
    mu = _check_mu(mu)
    out = np.maximum(np.asarray(zeta(F, x)) / F.q, 2.0 ** -(4 * mu + 1))
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# partition sums
# ---------------------------------------------------------------------------


def _as_labels(F: FieldParams, parts) -> np.ndarray:
    """Accept a label table or a list of sets."""
    if isinstance(parts, np.ndarray) or all(isinstance(v, (int, np.integer)) for v in parts):
        return _check_labels(F, parts)
    return labels_from_parts(F, parts)


def partition_coeff_sum(F: FieldParams, parts, alpha: int) -> float:
    """``sum_i |1_{A_i}^(alpha)|`` for a partition given as sets or a label table."""
    H = indicator_coeffs(F, _as_labels(F, parts))
    return float(np.abs(H[:, int(alpha)]).sum())


def partition_max_coeff_sum(F: FieldParams, parts) -> float:
    """``sum_i max_{alpha != 0} |1_{A_i}^(alpha)|``."""
    H = indicator_coeffs(F, _as_labels(F, parts))
    return float(np.abs(H[:, 1:]).max(axis=1).sum())


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


@dataclass
class LemmaCheck:
    name: str
    lhs: float
    rhs: float
    passed: bool
    detail: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        return {"lemma": self.name, "lhs": self.lhs, "rhs": self.rhs, "margin": self.margin, "pass": self.passed, **self.detail}


def _leq(name: str, lhs: float, rhs: float, tol: float = TOL, **detail) -> LemmaCheck:
    return LemmaCheck(name, float(lhs), float(rhs), bool(lhs <= rhs + tol), detail)


def check_poisson(C: LinearCode, tables, tol: float = TOL) -> LemmaCheck:
    lhs = poisson_lhs(C, tables)
    rhs = poisson_rhs(C, tables)
    err = abs(lhs - rhs)
    return LemmaCheck("poisson", err, tol, err <= tol, {"lhs_value": str(lhs), "rhs_value": str(rhs)})


def check_rootsum(F: FieldParams, s: int, tol: float = TOL) -> LemmaCheck:
    """Brute-force max equals the extremal set's sum and sits under the sine bound."""
    prob = extremal_set(F, s)
    oracle = root_sum_max_oracle(F, s)
    tight = abs(oracle - prob.value) <= tol and abs(prob.value - prob.closed_form) <= tol
    return LemmaCheck(
        "rootsum",
        oracle,
        prob.sine_bound,
        bool(tight and oracle <= prob.sine_bound + tol),
        {"s": s, "extremal": prob.value, "closed_form": prob.closed_form},
    )


def check_cmpe(F: FieldParams, mu: int, labels, tol: float = TOL) -> LemmaCheck:
    """``sum_i |1_{A_i}^(a)| <= c_mu`` for every ``a != 0`` and ``= 1`` at ``a = 0``."""
    H = np.abs(indicator_coeffs(F, labels, 2 ** _check_mu(mu)))
    sums = H.sum(axis=0)
    lhs = float(sums[1:].max())
    rhs = c_mu(F.p, mu)
    ok = lhs <= rhs + tol and abs(sums[0] - 1.0) <= tol
    return LemmaCheck("cmpe", lhs, rhs, bool(ok), {"at_zero": float(sums[0])})


def check_maxcmpe(F: FieldParams, mu: int, labels, tol: float = TOL) -> LemmaCheck:
    H = np.abs(indicator_coeffs(F, labels, 2 ** _check_mu(mu)))
    return _leq("maxcmpe", H[:, 1:].max(axis=1).sum(), c_mu(F.p, mu), tol)


def check_newxi1(F: FieldParams, mu: int, A: Iterable[int], tol: float = TOL) -> LemmaCheck:
    """``|1_A^(a)| <= xi(|A|)`` off zero and ``<= 2^{4mu+1} xi(|A|)`` at zero."""
    A = sorted({int(x) for x in A})
    hat = np.abs(fourier_transform(F, indicator(F, A)))
    bound = xi(F, mu, len(A))
    lhs = float(hat[1:].max()) if F.q > 1 else 0.0
    ok = lhs <= bound + tol and hat[0] <= 2 ** (4 * mu + 1) * bound + tol
    return LemmaCheck("newxi1", lhs, bound, bool(ok), {"size": len(A), "at_zero": float(hat[0])})


def check_newxi2(F: FieldParams, mu: int, labels, tol: float = TOL) -> LemmaCheck:
    """``sum_i xi(|A_i|) <= c'_mu`` over the classes of a partition."""
    labels = _check_labels(F, labels, 2 ** _check_mu(mu))
    sizes = np.bincount(labels, minlength=2**mu)
    return _leq("newxi2", np.sum(xi(F, mu, sizes)), c_mu_prime(F.p, mu), tol, sizes=sizes.tolist())


def check_norm2(F: FieldParams, mu: int, labels, tol: float = TOL) -> LemmaCheck:
    """``sum_l ||1_l^||_2 <= 2^{mu/2}``."""
    H = indicator_coeffs(F, labels, 2 ** _check_mu(mu))
    lhs = np.sqrt((np.abs(H) ** 2).sum(axis=1)).sum()
    return _leq("norm2", lhs, 2 ** (mu / 2), tol)


def cmgen_quantity(D: LinearCode, label_tables, mu: int, budget: int | None = None) -> float:
    """``sum_l max_{a in D \\ 0} prod_j |1_{l_j}^(a_j)|`` by full enumeration."""
    L = 2 ** _check_mu(mu)
    kappa = D.n
    _budget.check("transcript enumeration", L**kappa * D.size, budget)
    words = codewords(D, budget)
    words = words[np.any(words != 0, axis=1)]
    if words.shape[0] == 0:
        return 0.0
    H = np.stack([np.abs(indicator_coeffs(D.field, label_tables[j], L)) for j in range(kappa)])  # (kappa, L, q)
    # acc[l_1..l_j, word] accumulates the product over the first j coordinates
    acc = np.ones((1, words.shape[0]))
    for j in range(kappa):
        acc = (acc[:, None, :] * H[j][:, words[:, j]][None, :, :]).reshape(-1, words.shape[0])
    return float(acc.max(axis=1).sum())


def check_cmgen(D: LinearCode, label_tables, mu: int, tol: float = TOL, budget: int | None = None) -> LemmaCheck:
    d = min_distance(D, budget)
    kappa = D.n
    lhs = cmgen_quantity(D, label_tables, mu, budget)
    rhs = 2.0 ** ((4 * mu + 1) * (kappa - d)) * c_mu_prime(D.field.p, mu) ** kappa
    return _leq("cmgen", lhs, rhs, tol, kappa=kappa, d=d)
