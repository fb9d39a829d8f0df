"""Linear ramp secret sharing: AG-code schemes, their concatenated
expansion, Shamir and additive sharing.

Every scheme is stored in one linear form.  A random vector ``r`` in
``F^dim`` is drawn subject to ``r @ S = secret`` and the shares are
``r @ E``.  For an AG scheme ``r`` holds the coefficients of ``f`` in the
monomial basis of L(m P_inf), ``E`` evaluates the basis at the share points
and ``S`` at the secret point.  The concatenated scheme rewrites the same
thing over the subfield F_{p^u}, so all exact enumerations below work on it
unchanged.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import budget as _budget
from .codes import Concatenation, LinearCode, codewords, concatenation_map, from_generator
from .funcfield import Curve, PointSet, enumerate_points, evaluation_matrix, make_curve, rr_basis
from .gf import FieldElement, FieldParams
from .linalg import matmul, nullspace, solve

UNDERDETERMINED = "underdetermined"


@dataclass(frozen=True, eq=False)
class RampScheme:
    kind: str
    field: FieldParams  # share alphabet
    secret_field: FieldParams
    E: np.ndarray  # (dim, n)
    S: np.ndarray  # (dim, sigma)
    t: int
    r: int
    g: int = 0
    m: int | None = None
    curve: Curve | None = None
    secret_point: tuple[int, ...] | None = None
    share_points: PointSet | None = None
    base: "RampScheme | None" = None
    concat: Concatenation | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return int(self.E.shape[1])

    @property
    def dim(self) -> int:
        return int(self.E.shape[0])

    @property
    def block(self) -> int:
        """Coordinates per original player (v for the concatenated scheme)."""
        return self.concat.v if self.concat is not None else 1

    @property
    def players(self) -> int:
        return self.n // self.block

    def secret_vector(self, s) -> np.ndarray:
        s = _as_enc(self.secret_field, s)
        if self.concat is not None:
            return self.concat.table[s].copy()
        return np.array([s], dtype=np.int64)

    def decode_secret(self, vec) -> FieldElement:
        vec = np.asarray(vec, dtype=np.int64).reshape(-1)
        if self.concat is not None:
            return self.secret_field.element(int(self.concat.collapse(vec)[0]))
        return self.secret_field.element(int(vec[0]))

    def player_coords(self, players: Sequence[int]) -> list[int]:
        """Share coordinates owned by the given players."""
        b = self.block
        out = []
        for i in players:
            if not 0 <= int(i) < self.players:
                raise ValueError(f"player {i} out of range [0, {self.players})")
            out.extend(range(int(i) * b, int(i) * b + b))
        return out

    def summary(self) -> dict:
        d = {"kind": self.kind, "field": str(self.field), "n": self.n, "t": self.t, "r": self.r, "g": self.g}
        if self.m is not None:
            d["m"] = self.m
        if self.concat is not None:
            d.update(u=self.concat.u, v=self.concat.v, base_n=self.base.n, secret_field=str(self.secret_field))
        return d


@dataclass(frozen=True)
class ShareVector:
    secret: FieldElement
    shares: np.ndarray

    def __len__(self) -> int:
        return len(self.shares)

    def to_list(self) -> list[int]:
        return [int(x) for x in self.shares]


def _as_enc(F: FieldParams, s) -> int:
    if isinstance(s, FieldElement):
        if s.field != F:
            raise ValueError(f"secret lives in F_{s.field}, scheme expects F_{F}")
        return s.enc
    s = int(s)
    if not 0 <= s < F.q:
        raise ValueError(f"secret {s} is not an element of F_{F}")
    return s


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def agsh(curve: Curve, m: int, secret_index: int = 0, share_indices: Sequence[int] | None = None) -> RampScheme:
    """Ramp scheme from L(m P_inf): secret at one rational point, shares at the others.

    By default the secret point is the first affine point and all remaining
    affine points carry shares.
    """
    pts = enumerate_points(curve)
    if share_indices is None:
        share_indices = [i for i in range(len(pts)) if i != secret_index]
    share_indices = [int(i) for i in share_indices]
    if secret_index in share_indices or len(set(share_indices)) != len(share_indices):
        raise ValueError("secret and share points must be pairwise distinct")
    g = curve.genus
    t = m - 2 * g
    n = len(share_indices)
    r = 2 * g + t + 1
    if t < 1:
        raise ValueError(f"m={m} gives privacy t=m-2g={t} < 1")
    if r > n:
        raise ValueError(f"reconstruction r={r} exceeds n={n}")
    basis = rr_basis(curve, m)
    shares = pts.subset(share_indices)
    P0 = pts.points[secret_index]
    E = evaluation_matrix(basis, shares)
    S = evaluation_matrix(basis, [P0])
    return RampScheme("agsh", curve.field, curve.field, E, S, t, r, g, m, curve, P0, shares)


def eagsh(base: RampScheme, u: int, v: int) -> RampScheme:
    """Expand every F_{p^w} share of ``base`` into v symbols of F_{p^u}."""
    if base.kind != "agsh":
        raise ValueError("the concatenated scheme is built on an AG scheme")
    pi = concatenation_map(base.field, u, v)
    F = base.field
    rows_e, rows_s = [], []
    for b in range(base.dim):
        for beta in pi.betas:
            rows_e.append(pi.expand(F.mul(beta, base.E[b])))
            rows_s.append(pi.expand(F.mul(beta, base.S[b])))
    E = np.array(rows_e, dtype=np.int64)
    S = np.array(rows_s, dtype=np.int64)
    N = v * base.n
    T = base.m - 2 * base.g
    R = (v - 1) * base.n + base.m + 1
    return RampScheme(
        "eagsh", pi.small, F, E, S, T, R, base.g, base.m, base.curve, base.secret_point, base.share_points, base, pi
    )


def shamir(F: FieldParams, n: int, t: int) -> RampScheme:
    """Shamir sharing: degree <= t polynomial, secret f(0), shares f(a) at encodings 1..n."""
    if not 1 <= n <= F.q - 1:
        raise ValueError(f"Shamir over F_{F} supports 1 <= n <= {F.q - 1}")
    if not 0 <= t < n:
        raise ValueError("need 0 <= t < n")
    curve = make_curve("rational", F)
    basis = rr_basis(curve, t)
    shares = enumerate_points(curve).subset(range(1, n + 1))
    E = evaluation_matrix(basis, shares)
    S = evaluation_matrix(basis, [(0,)])
    return RampScheme("shamir", F, F, E, S, t, t + 1, 0, t, curve, (0,), shares)


def additive(F: FieldParams, n: int) -> RampScheme:
    """n-out-of-n additive sharing: shares sum to the secret."""
    if n < 1:
        raise ValueError("n must be positive")
    E = np.eye(n, dtype=np.int64)
    S = np.ones((n, 1), dtype=np.int64)
    return RampScheme("additive", F, F, E, S, n - 1, n)


# ---------------------------------------------------------------------------
# share / reconstruct
# ---------------------------------------------------------------------------


def _secret_space(scheme: RampScheme, s) -> tuple[np.ndarray, np.ndarray]:
    """Particular solution and null basis of ``r @ S = secret``."""
    sv = scheme.secret_vector(s)
    r0 = solve(scheme.field, scheme.S.T, sv)
    if r0 is None:  # pragma: no cover - S always has full column rank
        raise ValueError("secret not representable")
    return r0, nullspace(scheme.field, scheme.S.T)


def share_from_randomness(scheme: RampScheme, s, z) -> ShareVector:
    """Shares for the explicit free coordinates ``z`` (length dim - sigma)."""
    F = scheme.field
    r0, K = _secret_space(scheme, s)
    z = np.asarray(z, dtype=np.int64).reshape(-1)
    if len(z) != K.shape[0]:
        raise ValueError(f"expected {K.shape[0]} random symbols, got {len(z)}")
    r = r0 if len(z) == 0 else F.add(r0, matmul(F, z, K))
    shares = matmul(F, r, scheme.E)
    return ShareVector(scheme.secret_field.element(_as_enc(scheme.secret_field, s)), shares)


def share(scheme: RampScheme, s, seed: int = 0) -> ShareVector:
    """Share ``s`` with f drawn uniformly from the functions that hide it.

    The draw is replayable: a Philox generator keyed by ``seed`` supplies the
    free coordinates of the affine solution space.
    """
    F = scheme.field
    free = scheme.dim - scheme.S.shape[1]
    rng = np.random.Generator(np.random.Philox(seed))
    z = rng.integers(0, F.q, size=free, dtype=np.int64)
    return share_from_randomness(scheme, s, z)


def reconstruct(scheme: RampScheme, indices: Sequence[int], shares) -> FieldElement | str:
    """Recover the secret from the shares at ``indices`` (share coordinates).

    Returns ``"underdetermined"`` when several secrets fit the shares and
    raises ``ValueError("invalid share set")`` when none does.
    """
    F = scheme.field
    idx = [int(i) for i in indices]
    if len(set(idx)) != len(idx):
        raise ValueError("share indices must be distinct")
    if any(i < 0 or i >= scheme.n for i in idx):
        raise ValueError("share index out of range")
    shares = np.asarray(shares, dtype=np.int64).reshape(-1)
    if len(shares) != len(idx):
        raise ValueError("one share per index expected")
    if np.any((shares < 0) | (shares >= F.q)):
        raise ValueError("invalid share set")
    A = scheme.E[:, idx]
    if not idx:
        return UNDERDETERMINED
    r0 = solve(F, A.T, shares)
    if r0 is None:
        raise ValueError("invalid share set")
    K = nullspace(F, A.T)
    if K.shape[0] and np.any(matmul(F, K, scheme.S)):
        return UNDERDETERMINED
    return scheme.decode_secret(matmul(F, r0, scheme.S))


# ---------------------------------------------------------------------------
# conditional distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AffineCodeSlice:
    """Uniform distribution ``{(y | 0) + b : y in code}`` on ``n`` coordinates.

    ``code`` lives on the ``live`` coordinates; ``fixed`` are the revealed
    ones, where every sample equals ``shift``.  ``fiber`` counts how many
    random vectors give each word.
    """

    code: LinearCode
    shift: np.ndarray
    live: tuple[int, ...]
    fixed: tuple[int, ...]
    fiber: int = 1

    @property
    def field(self) -> FieldParams:
        return self.code.field

    @property
    def live_shift(self) -> np.ndarray:
        return self.shift[list(self.live)]

    def words(self, budget: int | None = None, with_multiplicity: bool = False) -> np.ndarray:
        """All live-coordinate words, sorted lexicographically."""
        F = self.field
        w = F.add(codewords(self.code, budget), self.live_shift[None, :])
        if with_multiplicity and self.fiber > 1:
            w = np.repeat(w, self.fiber, axis=0)
        return _sort_rows(w)


def _sort_rows(a: np.ndarray) -> np.ndarray:
    if a.shape[0] == 0 or a.shape[1] == 0:
        return a
    return a[np.lexsort(a.T[::-1])]


def _conditional_space(scheme: RampScheme, s, coords: list[int], x_fixed):
    F = scheme.field
    x_fixed = np.asarray(x_fixed, dtype=np.int64).reshape(-1)
    if len(x_fixed) != len(coords):
        raise ValueError("one revealed value per revealed coordinate expected")
    A = np.concatenate([scheme.S, scheme.E[:, coords]], axis=1)
    rhs = np.concatenate([scheme.secret_vector(s), x_fixed])
    r0 = solve(F, A.T, rhs)
    if r0 is None:
        raise ValueError("revealed shares are not attainable for this secret")
    return r0, nullspace(F, A.T)


def conditional_share_distribution(
    scheme: RampScheme, secret, theta: Sequence[int], x_theta, budget: int | None = None
) -> np.ndarray:
    """Every remaining-share vector, with multiplicity, given the revealed shares.

    ``theta`` indexes players; for the concatenated scheme a player owns a
    block of v coordinates and ``x_theta`` lists all of them.  Rows are the
    shares outside ``theta`` in increasing coordinate order, sorted.
    """
    F = scheme.field
    coords = scheme.player_coords(theta)
    r0, K = _conditional_space(scheme, secret, coords, x_theta)
    live = [i for i in range(scheme.n) if i not in set(coords)]
    total = F.q ** K.shape[0]
    _budget.check("conditional share enumeration", total, budget)
    base = matmul(F, r0, scheme.E[:, live])
    if K.shape[0] == 0:
        return base[None, :]
    kl = matmul(F, K, scheme.E[:, live])
    msgs = (np.arange(total)[:, None] // (F.q ** np.arange(K.shape[0]))[None, :]) % F.q
    words = F.add(matmul(F, msgs, kl), base[None, :])
    return _sort_rows(words)


def build_conditional_code(scheme: RampScheme, secret, theta: Sequence[int], x_theta) -> AffineCodeSlice:
    """The code and shift describing the shares once ``theta`` is revealed.

    The code is the image on the remaining coordinates of the functions that
    vanish at the secret point and on ``theta``; the shift is the share
    vector of one function meeting all constraints.
    """
    F = scheme.field
    coords = scheme.player_coords(theta)
    r0, K = _conditional_space(scheme, secret, coords, x_theta)
    live = [i for i in range(scheme.n) if i not in set(coords)]
    shift = matmul(F, r0, scheme.E)
    rows = matmul(F, K, scheme.E[:, live]) if K.shape[0] else np.zeros((0, len(live)), dtype=np.int64)
    code = from_generator(F, rows, len(live))
    return AffineCodeSlice(code, shift, tuple(live), tuple(coords), F.q ** (K.shape[0] - code.k))


def expected_conditional_params(scheme: RampScheme, theta: int) -> dict:
    """Length, dimension and distance bounds of the conditional code as the
    lemma for AG schemes states them (scaled by v for the concatenation)."""
    if scheme.m is None or scheme.kind not in ("agsh", "eagsh"):
        raise ValueError("only AG schemes have closed-form conditional parameters")
    v = scheme.block
    n = scheme.n // v
    m, g = scheme.m, scheme.g
    return {
        "n": scheme.n - v * theta,
        "k": v * (m - theta - g),
        "d_min": n - m + 1,
        "dual_k": scheme.n - v * theta - v * (m - theta - g),
        "dual_d_min": m - theta - 2 * g + 1,
    }


# ---------------------------------------------------------------------------
# concatenated thresholds
# ---------------------------------------------------------------------------


def eagsh_threshold_check(n: int, v: int, T: int, R: int, m: int, budget: int | None = None) -> dict:
    """Pigeonhole facts behind the concatenated thresholds, by exhaustion.

    Over all T-subsets of the N = v n coordinates, the number of players
    touched is at most T; over all R-subsets, the number of players whose
    whole block is present is at least m + 1.
    """
    from math import comb

    N = v * n
    _budget.check("threshold subsets", comb(N, T) + comb(N, R), budget)
    max_touched = 0
    for sub in itertools.combinations(range(N), T):
        max_touched = max(max_touched, len({i // v for i in sub}))
    min_complete = None
    for sub in itertools.combinations(range(N), R):
        counts = np.bincount(np.array(sub, dtype=np.int64) // v, minlength=n)
        c = int(np.sum(counts == v))
        min_complete = c if min_complete is None else min(min_complete, c)
    return {
        "max_players_touched_by_T": max_touched,
        "min_complete_players_in_R": min_complete,
        "privacy_ok": max_touched <= T,
        "reconstruction_ok": min_complete is not None and min_complete >= m + 1,
    }


def share_marginal(scheme: RampScheme, secret, coords: Sequence[int], budget: int | None = None) -> np.ndarray:
    """Multiset (sorted rows) of the shares at ``coords`` over all sharings of ``secret``."""
    F = scheme.field
    r0, K = _secret_space(scheme, secret)
    coords = [int(c) for c in coords]
    total = F.q ** K.shape[0]
    _budget.check("sharing enumeration", total, budget)
    base = matmul(F, r0, scheme.E[:, coords])
    if K.shape[0] == 0:
        return base[None, :]
    msgs = (np.arange(total)[:, None] // (F.q ** np.arange(K.shape[0]))[None, :]) % F.q
    return _sort_rows(F.add(matmul(F, msgs, matmul(F, K, scheme.E[:, coords])), base[None, :]))
