"""Local leakage families, exact statistical distance of leakage
transcripts and the linear trace attack."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import budget as _budget
from .codes import LinearCode, codewords, enumerate_codewords
from .fourier import indicator_coeffs
from .gf import FieldParams
from .linalg import solve
from .sss import AffineCodeSlice, RampScheme, share

FAMILY_KINDS = ("phi0", "lowbits", "tracebit", "random", "table")


@dataclass(frozen=True, eq=False)
class LeakageFamily:
    """n per-coordinate lookup tables ``F_q -> [0, alphabet)``."""

    field: FieldParams
    tables: np.ndarray  # (n, q)
    alphabet: int
    mu: int | None
    kind: str = "table"
    attack: bool = False

    def __post_init__(self):
        t = self.tables
        if t.ndim != 2 or t.shape[1] != self.field.q:
            raise ValueError(f"tables must have shape (n, {self.field.q})")
        if np.any((t < 0) | (t >= self.alphabet)):
            raise ValueError(f"table outputs must lie in [0, {self.alphabet})")

    @property
    def n(self) -> int:
        return int(self.tables.shape[0])

    def apply(self, words: np.ndarray) -> np.ndarray:
        words = np.asarray(words, dtype=np.int64)
        return self.tables[np.arange(self.n)[None, :], words]

    def preimage_counts(self) -> np.ndarray:
        """``cnt[j, l] = |tau_j^{-1}(l)|``."""
        return np.stack([np.bincount(t, minlength=self.alphabet) for t in self.tables])

    def compose_shift(self, shift) -> "LeakageFamily":
        """Tables of ``x -> tau_j(x + b_j)``."""
        F = self.field
        b = np.asarray(shift, dtype=np.int64)
        xs = np.arange(F.q)
        tables = np.stack([self.tables[j][F.add(xs, b[j])] for j in range(self.n)])
        return LeakageFamily(F, tables, self.alphabet, self.mu, self.kind, self.attack)

    def restrict(self, coords: Sequence[int]) -> "LeakageFamily":
        return LeakageFamily(self.field, self.tables[list(coords)], self.alphabet, self.mu, self.kind, self.attack)

    def check_mu(self) -> None:
        """Bounds need ``2^mu < p``; the attack family is exempt."""
        if self.attack:
            raise ValueError("attack family (p-ary outputs) is outside the bound regime")
        if self.mu is not None and 2**self.mu >= self.field.p:
            raise ValueError(f"attackable regime: 2^mu = {2 ** self.mu} >= p = {self.field.p}")


def phi0(F: FieldParams, n: int, weights: Sequence[int] | None = None) -> LeakageFamily:
    """First coordinate of each (optionally scaled) share, a p-ary output."""
    xs = np.arange(F.q)
    w = np.ones(n, dtype=np.int64) if weights is None else np.asarray(weights, dtype=np.int64)
    tables = np.stack([F.phi_table[F.mul(int(w[j]), xs)] for j in range(n)])
    return LeakageFamily(F, tables, F.p, None, "phi0", attack=True)


def lowbits(F: FieldParams, n: int, mu: int) -> LeakageFamily:
    t = np.arange(F.q) % (2**mu)
    return LeakageFamily(F, np.tile(t, (n, 1)), 2**mu, mu, "lowbits")


def tracebit(F: FieldParams, n: int) -> LeakageFamily:
    t = (F.trace_table > (F.p - 1) // 2).astype(np.int64)
    return LeakageFamily(F, np.tile(t, (n, 1)), 2, 1, "tracebit")


def random_family(F: FieldParams, n: int, mu: int, seed: int = 0) -> LeakageFamily:
    rng = np.random.Generator(np.random.Philox(seed))
    return LeakageFamily(F, rng.integers(0, 2**mu, size=(n, F.q), dtype=np.int64), 2**mu, mu, "random")


def table_family(F: FieldParams, tables, mu: int) -> LeakageFamily:
    return LeakageFamily(F, np.asarray(tables, dtype=np.int64), 2**mu, mu, "table")


def make_family(F: FieldParams, n: int, spec, seed: int = 0) -> LeakageFamily:
    """Build a family from ``phi0``, ``lowbits:mu``, ``tracebit``,
    ``random:seed:mu`` or an explicit ``{"table": [...], "mu": mu}``."""
    if isinstance(spec, dict):
        tables = spec["table"]
        if len(tables) == F.q and not isinstance(tables[0], (list, tuple)):
            tables = [tables] * n
        return table_family(F, tables, int(spec.get("mu", 1)))
    parts = str(spec).split(":")
    kind = parts[0]
    if kind == "phi0" and len(parts) == 1:
        return phi0(F, n)
    if kind == "tracebit" and len(parts) == 1:
        return tracebit(F, n)
    if kind == "lowbits" and len(parts) == 2:
        return lowbits(F, n, int(parts[1]))
    if kind == "random" and len(parts) in (2, 3):
        if len(parts) == 2:
            return random_family(F, n, int(parts[1]), seed)
        return random_family(F, n, int(parts[2]), int(parts[1]))
    raise ValueError(f"unknown leakage family {spec!r}; expected one of {', '.join(FAMILY_KINDS)}")


@dataclass(frozen=True)
class AdversaryModel:
    theta: int
    mu: int
    Theta: tuple[int, ...] | None = None

    def corrupted(self) -> tuple[int, ...]:
        if self.Theta is None:
            return tuple(range(self.theta))
        if len(self.Theta) != self.theta or len(set(self.Theta)) != self.theta:
            raise ValueError("explicit corrupted set must have theta distinct players")
        return tuple(self.Theta)


# ---------------------------------------------------------------------------
# exact statistical distance
# ---------------------------------------------------------------------------


def _histogram(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    uniq, counts = np.unique(rows, axis=0, return_counts=True)
    return uniq, counts


def _merge(parts: list[tuple[np.ndarray, np.ndarray]]) -> tuple[np.ndarray, np.ndarray]:
    rows = np.concatenate([u for u, _ in parts], axis=0)
    weights = np.concatenate([c for _, c in parts])
    uniq, inv = np.unique(rows, axis=0, return_inverse=True)
    return uniq, np.bincount(inv.reshape(-1), weights=weights).astype(np.int64)


def transcript_histogram(
    target: LinearCode | AffineCodeSlice, tau: LeakageFamily, budget: int | None = None, threads: int = 1
) -> tuple[np.ndarray, np.ndarray, int]:
    """Observed transcripts, their counts and the total number of words."""
    if isinstance(target, AffineCodeSlice):
        code, shift = target.code, target.live_shift
    else:
        code, shift = target, None
    if tau.n != code.n or tau.field != code.field:
        raise ValueError(f"leakage family has {tau.n} tables over F_{tau.field}, code is length {code.n} over F_{code.field}")
    F = code.field

    def leak(chunk):
        if shift is not None:
            chunk = F.add(chunk, shift[None, :])
        return _histogram(tau.apply(chunk))

    chunks = enumerate_codewords(code, budget=budget)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(leak, chunks))
    else:
        parts = [leak(c) for c in chunks]
    uniq, counts = _merge(parts)
    return uniq, counts, code.size


def exact_sd(
    target: LinearCode | AffineCodeSlice, tau: LeakageFamily, budget: int | None = None, threads: int = 1
) -> float:
    """SD between the leakage of a uniform codeword (or slice element) and of
    a uniform vector.

    Unobserved transcripts carry only uniform mass, which is the complement
    of the observed uniform mass, so the sum never visits all ``alphabet^n``
    transcripts.
    """
    uniq, counts, total = transcript_histogram(target, tau, budget, threads)
    q = tau.field.q
    frac = tau.preimage_counts() / q  # (n, alphabet)
    pu = np.prod(frac[np.arange(tau.n)[None, :], uniq], axis=1)
    pc = counts / total
    return float(0.5 * (np.abs(pc - pu).sum() + max(0.0, 1.0 - pu.sum())))


def sd_dual_form(C: LinearCode | AffineCodeSlice, tau: LeakageFamily, budget: int | None = None) -> float:
    """``1/2 sum_l |sum_{a in dual, a != 0} prod_j 1_{l_j}^(a_j)|`` evaluated literally."""
    if isinstance(C, AffineCodeSlice):
        tau = tau.compose_shift(C.live_shift)
        C = C.code
    if tau.n != C.n:
        raise ValueError("leakage family and code lengths differ")
    L, n = tau.alphabet, C.n
    dual = C.dual()
    _budget.check("dual-form enumeration", L**n * dual.size, budget)
    H = np.stack([indicator_coeffs(C.field, tau.tables[j], L) for j in range(n)])  # (n, L, q)
    total = np.zeros(L**n, dtype=complex)
    for words in enumerate_codewords(dual, chunk_size=max(1, (1 << 22) // max(1, L**n)), budget=budget):
        words = words[np.any(words != 0, axis=1)]
        if words.shape[0] == 0:
            continue
        acc = np.ones((1, words.shape[0]), dtype=complex)
        for j in range(n):
            acc = (acc[:, None, :] * H[j][:, words[:, j]][None, :, :]).reshape(-1, words.shape[0])
        total += acc.sum(axis=1)
    return float(0.5 * np.abs(total).sum())


# ---------------------------------------------------------------------------
# trace attack
# ---------------------------------------------------------------------------


@dataclass
class AttackReport:
    scheme: str
    weights: list[int]
    phi_s0: int
    phi_s1: int
    trials: int
    relation_holds: int
    empirical_sd: float
    separated: bool
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def reconstruction_weights(scheme: RampScheme) -> np.ndarray:
    """``w`` with ``sum_i w_i s_i = s`` for every sharing (all shares used)."""
    if scheme.S.shape[1] != 1:
        raise ValueError("attack needs a scheme whose secret is one linear combination of shares")
    w = solve(scheme.field, scheme.E, scheme.S[:, 0])
    if w is None:
        raise ValueError("scheme has no linear reconstruction from all shares")
    return w


def trace_attack(scheme: RampScheme, s0: int = 0, s1: int = 1, trials: int = 1000, seed: int = 0) -> AttackReport:
    """Leak ``phi_p(w_i s_i)`` from every share; the leaks sum to ``phi_p(s)``.

    Half of the trials share ``s0`` and half ``s1``; the report counts the
    trials where the relation holds and the SD between the two empirical
    transcript distributions.
    """
    F = scheme.field
    w = reconstruction_weights(scheme)
    tau = phi0(F, scheme.n, w)
    phi = F.phi_table
    holds = 0
    transcripts: list[list[np.ndarray]] = [[], []]
    for i in range(trials):
        which = i % 2
        s = (s0, s1)[which]
        sv = share(scheme, s, seed=seed + i)
        leak = tau.apply(sv.shares[None, :])[0]
        holds += int(leak.sum() % F.p == phi[s])
        transcripts[which].append(leak)
    a, b = (np.array(t) for t in transcripts)
    sd = _empirical_sd(a, b)
    flags = [] if phi[s0] != phi[s1] else ["no separation"]
    return AttackReport(
        scheme.kind, [int(x) for x in w], int(phi[s0]), int(phi[s1]), trials, holds, sd, sd == 1.0, flags
    )


def _empirical_sd(a: np.ndarray, b: np.ndarray) -> float:
    """SD of two empirical distributions, exact for disjoint supports."""
    if len(a) == 0 or len(b) == 0:
        return 0.0
    ua, ca = _histogram(a)
    ub, cb = _histogram(b)
    rows, inv = np.unique(np.concatenate([ua, ub]), axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    na, nb = len(a), len(b)
    ha = np.bincount(inv[: len(ua)], weights=ca, minlength=len(rows)).astype(np.int64)
    hb = np.bincount(inv[len(ua) :], weights=cb, minlength=len(rows)).astype(np.int64)
    num = int(np.abs(ha * nb - hb * na).sum())
    return num / (2 * na * nb)
