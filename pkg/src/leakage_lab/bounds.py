"""Closed-form leakage bounds, resilience reports and the regime comparison.

Every bound is a product of powers, so each is evaluated as a base-2
logarithm first; ``math.inf`` is returned when the value overflows a double.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

from .codes import dual_distance
from .fourier import c_mu, c_mu_prime
from .leakage import AdversaryModel, LeakageFamily, exact_sd, sd_dual_form
from .sss import RampScheme, build_conditional_code, share

SCHEMA_VERSION = 1
LOG2_HALF = -1.0


def from_log2(lg: float) -> float:
    if lg > 1023:
        return math.inf
    return 2.0**lg


def _require_regime(p: float, mu: int) -> None:
    if 2**mu >= p:
        raise ValueError(f"attackable regime: 2^mu = {2 ** mu} >= p = {p}; a trace leak of log p bits breaks any linear scheme")


# ---------------------------------------------------------------------------
# bounds on SD(tau(C), tau(U)) for a linear code
# ---------------------------------------------------------------------------


def log2_thm1(n: int, k: int, d_perp: int, p: int, w: int, mu: int) -> float:
    _require_regime(p, mu)
    if d_perp < 1:
        raise ValueError("dual distance must be at least 1")
    return LOG2_HALF + w * (n - k) * math.log2(p) + d_perp * math.log2(c_mu(p, mu))


def bound_thm1(n: int, k: int, d_perp: int, p: int, w: int, mu: int) -> float:
    """``1/2 p^{w(n-k)} c_mu^{d_perp}``."""
    return from_log2(log2_thm1(n, k, d_perp, p, w, mu))


def log2_thm2(n: int, k: int, d_perp: int, p: int, w: int, mu: int) -> float:
    _require_regime(p, mu)
    if d_perp < 1:
        raise ValueError("dual distance must be at least 1")
    return LOG2_HALF + (5 * mu + 1) * (n - d_perp) + mu + (2 * d_perp - n - 2) * math.log2(c_mu_prime(p, mu))


def bound_thm2(n: int, k: int, d_perp: int, p: int, w: int, mu: int) -> float:
    """``1/2 2^{(5mu+1)(n-d_perp)+mu} c'_mu^{2 d_perp - n - 2}``; does not depend on w or k."""
    return from_log2(log2_thm2(n, k, d_perp, p, w, mu))


def bound_mds(n: int, k: int, p: int, w: int, mu: int) -> float:
    """Both bounds for an MDS ``[n, k]`` code (dual distance k + 1), minimised."""
    _require_regime(p, mu)
    a = w * (n - k) * math.log2(p) + (k + 1) * math.log2(c_mu(p, mu))
    b = (5 * mu + 1) * (n - k - 1) + mu + (2 * k - n) * math.log2(c_mu_prime(p, mu))
    return from_log2(LOG2_HALF + min(a, b))


def bound_additive(n: int, p: int, w: int, mu: int) -> float:
    """``1/2 2^mu c_mu^{n-2}`` for additive shares of zero."""
    _require_regime(p, mu)
    return from_log2(LOG2_HALF + mu + (n - 2) * math.log2(c_mu(p, mu)))


# ---------------------------------------------------------------------------
# epsilon for secret pairs (no factor 1/2)
# ---------------------------------------------------------------------------


def _pair(lg_a: float, lg_b: float) -> dict:
    a, b = from_log2(lg_a), from_log2(lg_b)
    return {"first": a, "second": b, "min": min(a, b), "log2_first": lg_a, "log2_second": lg_b}


def eps_agsh(n: int, t: int, r: int, theta: int, p: int, w: int, mu: int) -> dict:
    """Both branches for the AG ramp scheme over F_{p^w}."""
    _require_regime(p, mu)
    a = w * (n - t - (r - 1 - t) / 2) * math.log2(p) + (t - theta + 1) * math.log2(c_mu(p, mu))
    b = (n - t - 1) * (5 * mu + 1) + mu + (2 * t - n - theta) * math.log2(c_mu_prime(p, mu))
    return _pair(a, b)


def eps_eagsh(N: int, T: int, R: int, theta: int, p: int, w: int, v: int, mu: int) -> dict:
    """The two alternative values for the concatenated scheme and their min."""
    _require_regime(p, mu)
    a = (w / 2) * ((v + 1) / v * N - T - R + 1) * math.log2(p) + (T - theta + 1) * math.log2(c_mu(p, mu))
    b = (N - (v - 1) * theta - T - 1) * (5 * mu + 1) + mu + (2 * T + (v - 2) * theta - N) * math.log2(
        c_mu_prime(p, mu)
    )
    return _pair(a, b)


def log2_eps1(N, T, theta, mu, q, g1=None) -> float:
    g1 = N / (math.sqrt(q) - 1) if g1 is None else g1
    return (N - T - g1) * math.log2(q) + (T - theta + 1) * math.log2(c_mu(math.sqrt(q), mu))


def log2_eps2(N, T, theta, mu, q) -> float:
    return (N - T - 1) * (5 * mu + 1) + mu + (2 * T - N - theta) * math.log2(c_mu_prime(math.sqrt(q), mu))


def log2_eps3(N, T, theta, mu, q, g2=None) -> float:
    g2 = N / (q - 1) if g2 is None else g2
    return (N - 2 * T - g2) * math.log2(q) + (T - theta + 1) * math.log2(c_mu(q, mu))


def log2_eps4(N, T, theta, mu, q) -> float:
    return (N - theta - T - 1) * (5 * mu + 1) + mu + (2 * T - N) * math.log2(c_mu_prime(q, mu))


def eps_main1(N: int, T: int, theta: int, mu: int, p: int, g: float) -> dict:
    """AG scheme over F_{p^2} with explicit genus g."""
    _require_regime(p, mu)
    q = p * p
    return _pair(log2_eps1(N, T, theta, mu, q, g), log2_eps2(N, T, theta, mu, q))


def eps_main2(N: int, T: int, theta: int, mu: int, q: int, g: float) -> dict:
    """Concatenated scheme over the prime field F_q; g is the exponent's genus term."""
    _require_regime(q, mu)
    return _pair(log2_eps3(N, T, theta, mu, q, g), log2_eps4(N, T, theta, mu, q))


# ---------------------------------------------------------------------------
# resilience report
# ---------------------------------------------------------------------------


@dataclass
class BoundReport:
    params: dict
    mu: int
    theta: int
    conditional: dict
    eps_thm1: float
    eps_thm2: float
    corollary: dict = field(default_factory=dict)
    main_theorem: dict = field(default_factory=dict)
    sd_exact: float | None = None
    sd_dual_form: float | None = None
    sound: bool | None = None
    flags: list[str] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema_version"] = SCHEMA_VERSION
        return d


def ll_resilience_report(
    scheme: RampScheme,
    adversary: AdversaryModel,
    tau: LeakageFamily | None = None,
    secret: int = 0,
    seed: int = 0,
    g_main: float | None = None,
    exact: bool = True,
    dual_form: bool = False,
    budget: int | None = None,
    threads: int = 1,
) -> BoundReport:
    """Bounds for one scheme against ``theta`` corruptions plus ``mu`` bits elsewhere.

    The revealed shares come from a seeded sharing of ``secret``.  If a
    leakage family is given and the conditional code is enumerable, the
    exact SD is computed too and checked against both bounds.
    """
    t0 = time.perf_counter()
    theta, mu = adversary.theta, adversary.mu
    if theta >= scheme.t:
        raise ValueError(f"no privacy margin: theta = {theta} >= t = {scheme.t}")
    F = scheme.field
    _require_regime(F.p, mu)
    Theta = adversary.corrupted()
    coords = scheme.player_coords(Theta)
    sv = share(scheme, secret, seed)
    sl = build_conditional_code(scheme, secret, Theta, sv.shares[coords])
    C = sl.code
    dperp = dual_distance(C, budget)
    t1 = time.perf_counter()
    cond = {"n": C.n, "k": C.k, "d_perp": dperp.value, "d_perp_exact": dperp.exact, "Theta": list(Theta)}
    e1 = bound_thm1(C.n, C.k, dperp.value, F.p, F.w, mu)
    e2 = bound_thm2(C.n, C.k, dperp.value, F.p, F.w, mu)
    report = BoundReport(scheme.summary(), mu, theta, cond, e1, e2)

    if scheme.kind == "agsh":
        report.corollary = eps_agsh(scheme.n, scheme.t, scheme.r, theta, F.p, F.w, mu)
        if F.w == 2:
            g = scheme.g if g_main is None else g_main
            report.main_theorem = {"g": g, **eps_main1(scheme.n, scheme.t, theta, mu, F.p, g)}
    elif scheme.kind == "eagsh":
        w, v = scheme.secret_field.w, scheme.block
        report.corollary = eps_eagsh(scheme.n, scheme.t, scheme.r, theta, F.p, w, v, mu)
        if w == 2 and v == 2 and F.w == 1:
            g = 2 * scheme.g if g_main is None else g_main
            report.main_theorem = {"g": g, **eps_main2(scheme.n, scheme.t, theta, mu, F.p, g)}
    elif scheme.kind == "additive":
        report.corollary = {"additive": bound_additive(C.n, F.p, F.w, mu)}
    elif scheme.kind == "shamir":
        report.corollary = {"mds": bound_mds(C.n, C.k, F.p, F.w, mu)}

    if tau is not None and exact:
        if tau.n != C.n:
            tau = tau.restrict(list(sl.live)) if tau.n == scheme.n else tau
        tau.check_mu()
        report.sd_exact = exact_sd(sl, tau, budget, threads)
        if dual_form:
            report.sd_dual_form = sd_dual_form(sl, tau, budget)
        report.sound = bool(report.sd_exact <= min(e1, e2) + 1e-9)
    if min(e1, e2) >= 1:
        report.flags.append("bound > 1 (vacuous)")
    if report.corollary.get("min", 0) >= 1:
        report.flags.append("corollary bound > 1 (vacuous)")
    report.timings = {"construct_s": t1 - t0, "total_s": time.perf_counter() - t0}
    return report


# ---------------------------------------------------------------------------
# regime comparison
# ---------------------------------------------------------------------------

RHO = math.log(5 / 3) / math.log(51 / 50)

CSV_COLUMNS = (
    "schema_version",
    "q",
    "mu",
    "N",
    "T",
    "theta",
    "g1",
    "g2",
    "R1",
    "R2",
    "log2_eps1",
    "log2_eps2",
    "log2_eps3",
    "log2_eps4",
    "eps1",
    "eps2",
    "eps3",
    "eps4",
    "r1_lt_r2",
    "prop1vs3_hyp",
    "eps1_lt_eps3",
    "prop1vs2_hyp",
    "prop1vs2_hyp_rho",
    "eps1_lt_eps2",
    "prop3vs4_hyp",
    "eps3_lt_eps4",
    "mt1better_hyp",
    "mt1better_holds",
)


@dataclass
class ComparisonReport:
    q: float
    mu: int
    N: int
    T: int
    theta: int
    g1: float
    g2: float
    R1: float
    R2: float
    log2_eps: tuple[float, float, float, float]
    hyp: dict
    holds: dict
    flags: list[str] = field(default_factory=list)

    @property
    def eps(self) -> tuple[float, ...]:
        return tuple(from_log2(x) for x in self.log2_eps)

    def row(self) -> dict:
        e = self.eps
        le = self.log2_eps
        return {
            "schema_version": SCHEMA_VERSION,
            "q": self.q,
            "mu": self.mu,
            "N": self.N,
            "T": self.T,
            "theta": self.theta,
            "g1": self.g1,
            "g2": self.g2,
            "R1": self.R1,
            "R2": self.R2,
            "log2_eps1": le[0],
            "log2_eps2": le[1],
            "log2_eps3": le[2],
            "log2_eps4": le[3],
            "eps1": e[0],
            "eps2": e[1],
            "eps3": e[2],
            "eps4": e[3],
            "r1_lt_r2": self.holds["r1_lt_r2"],
            "prop1vs3_hyp": self.hyp["prop1vs3"],
            "eps1_lt_eps3": self.holds["eps1_lt_eps3"],
            "prop1vs2_hyp": self.hyp["prop1vs2"],
            "prop1vs2_hyp_rho": self.hyp["prop1vs2_rho"],
            "eps1_lt_eps2": self.holds["eps1_lt_eps2"],
            "prop3vs4_hyp": self.hyp["prop3vs4"],
            "eps3_lt_eps4": self.holds["eps3_lt_eps4"],
            "mt1better_hyp": self.hyp["mt1better"],
            "mt1better_holds": self.holds["mt1better"],
        }


def compare_regimes(N: int, T: int, theta: int, mu: int, q: float, g1: float | None = None, g2: float | None = None) -> ComparisonReport:
    """The four Main-Theorem style epsilons at one parameter point, each
    proposition's hypothesis and whether its inequality holds here."""
    sq = math.sqrt(q)
    g1 = N / (sq - 1) if g1 is None else g1
    g2 = N / (q - 1) if g2 is None else g2
    le = (
        log2_eps1(N, T, theta, mu, q, g1),
        log2_eps2(N, T, theta, mu, q),
        log2_eps3(N, T, theta, mu, q, g2),
        log2_eps4(N, T, theta, mu, q),
    )
    R1 = T + N / (sq - 1) + 1
    R2 = T + N / 2 + N / (q - 1) + T + 1
    a = sq * N / (q - 1)
    lsq = math.log2(sq)
    hyp = {
        "prop1vs3": T < a - 1 and theta >= 2 * T - a + 1 and q >= 4,
        "prop1vs2": max(2, 0.4 * lsq) <= mu < lsq and N - T + 1 >= (T - theta + 1) / RHO,
        "prop1vs2_rho": max(2, 0.4 * lsq) <= mu < lsq and theta >= (RHO + 1) * T - RHO * N - (RHO - 1),
        "prop3vs4": math.log2(q) / 5 <= mu < math.log2(q),
        "mt1better": (
            q > 16
            and T < a - 1
            and theta >= max(2 * T - a + 1, (RHO + 1) * T - RHO * N - (RHO - 1))
            and max(2, 0.2 * lsq) <= mu < lsq
        ),
    }
    holds = {
        "r1_lt_r2": R1 < R2,
        "eps1_lt_eps3": le[0] < le[2],
        "eps1_lt_eps2": le[0] < le[1],
        "eps3_lt_eps4": le[2] < le[3],
        "mt1better": min(le[0], le[1]) < min(le[2], le[3]),
    }
    flags = []
    if not (0 <= theta < T < N):
        flags.append("parameter sanity: need 0 <= theta < T < N")
    return ComparisonReport(q, mu, N, T, theta, g1, g2, R1, R2, le, hyp, holds, flags)


@dataclass
class Threshold:
    name: str
    N_star: int | None
    checked_up_to: int
    counterexamples: list[int]

    @property
    def verified(self) -> bool:
        return self.N_star is not None and not self.counterexamples


def discover_threshold(
    which: str, T: int, theta: int, mu: int, q: float, N0: int | None = None, N_max: int = 2000, factor: int = 10
) -> Threshold:
    """Smallest N from which ``which`` (a key of ``holds``) is true on every
    N up to ``factor * N``, restricted to points meeting the matching hypothesis.

    Points whose hypothesis fails are skipped rather than counted against
    the inequality.
    """
    hyp_key = {"eps1_lt_eps2": "prop1vs2", "eps3_lt_eps4": "prop3vs4", "eps1_lt_eps3": "prop1vs3", "mt1better": "mt1better"}[which]
    start = N0 if N0 is not None else T + 1
    top = factor * N_max
    ok = {}
    for N in range(start, top + 1):
        r = compare_regimes(N, T, theta, mu, q)
        ok[N] = (not r.hyp[hyp_key]) or r.holds[which]
    for N in range(start, N_max + 1):
        if all(ok[M] for M in range(N, factor * N + 1)):
            return Threshold(which, N, factor * N, [])
    bad = [N for N in range(start, top + 1) if not ok[N]]
    return Threshold(which, None, top, bad[:20])


def parse_range(spec: str) -> list[int]:
    """``a:b:step`` (inclusive), ``a:b`` or a comma list."""
    if ":" in spec:
        parts = [int(x) for x in spec.split(":")]
        if len(parts) == 2:
            parts.append(1)
        a, b, s = parts
        if s <= 0:
            raise ValueError("range step must be positive")
        return list(range(a, b + 1, s))
    return [int(x) for x in spec.split(",") if x.strip()]


def comparison_grid(Ns, Ts, thetas, mus, qs) -> list[ComparisonReport]:
    out = []
    for q in qs:
        for mu in mus:
            for T in Ts:
                for theta in thetas:
                    for N in Ns:
                        out.append(compare_regimes(N, T, theta, mu, q))
    return out
