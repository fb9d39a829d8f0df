"""``leakage-lab`` command-line front end.

Every subcommand writes JSON (``compare`` writes CSV) carrying a
``schema_version`` field.  The exit status is 0 exactly when every
inequality the command asserts holds, 1 when one fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (
    CSV_COLUMNS,
    SCHEMA_VERSION,
    bound_thm1,
    bound_thm2,
    compare_regimes,
    ll_resilience_report,
    parse_range,
)
from .budget import BudgetExceeded
from .codes import dual_distance, from_generator, repetition_code, zero_sum_code
from .config import ConfigError, ExperimentConfig
from .funcfield import make_curve, reed_solomon
from .gf import parse_field
from .leakage import AdversaryModel, exact_sd, make_family, sd_dual_form, trace_attack
from .sss import UNDERDETERMINED, additive, agsh, eagsh, reconstruct, shamir, share
from .verify import LEMMAS, run_lemma

TOL = 1e-9

# option defaults live here rather than in argparse so a config file can
# tell which options were given on the command line
DEFAULTS = {
    "seed": 0,
    "budget": None,
    "threads": 1,
    "out": None,
    "field": "3^2",
    "scheme": "agsh",
    "curve": "hermitian",
    "m": None,
    "n": None,
    "t": None,
    "u": 1,
    "v": 2,
    "secret_index": 0,
    "theta": 0,
    "Theta": None,
    "mu": 1,
    "leakage": None,
    "secret": 0,
    "dual_form": False,
    "no_exact": False,
    "g_main": None,
    "code": None,
    "generator": None,
    "s0": 0,
    "s1": 1,
    "trials": None,
    "q": None,
    "N": None,
    "T": None,
    "N0": None,
    "lemma": None,
    "indices": None,
    "shares": None,
}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    return x


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj: dict, out: str | None) -> None:
    obj = {"schema_version": SCHEMA_VERSION, **_clean(obj)}
    _emit(json.dumps(obj, indent=2) + "\n", out)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError(f"--{args.scheme} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))


def build_scheme(args):
    F = parse_field(args.field)
    if args.scheme in ("agsh", "eagsh"):
        _need(args, "m")
        base = agsh(make_curve(args.curve, F), int(args.m), int(args.secret_index))
        return base if args.scheme == "agsh" else eagsh(base, int(args.u), int(args.v))
    if args.scheme == "shamir":
        _need(args, "n", "t")
        return shamir(F, int(args.n), int(args.t))
    if args.scheme == "additive":
        _need(args, "n")
        return additive(F, int(args.n))
    raise ValueError(f"unknown scheme {args.scheme!r}")


def _ints(text) -> list[int]:
    if text is None:
        return []
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    return [int(x) for x in str(text).replace(" ", "").split(",") if x]


def build_code(args):
    """``rs:k[:n]``, ``repetition:n``, ``zerosum:n`` or ``random:n:k``; or ``--generator``."""
    F = parse_field(args.field)
    if args.generator is not None:
        rows = json.loads(args.generator) if isinstance(args.generator, str) else args.generator
        return from_generator(F, np.array(rows, dtype=np.int64).reshape(len(rows), -1))
    if args.code is None:
        raise ValueError("sd needs --code or --generator")
    kind, *rest = str(args.code).split(":")
    nums = [int(x) for x in rest]
    if kind == "rs" and len(nums) in (1, 2):
        return reed_solomon(F, *nums)
    if kind == "repetition" and len(nums) == 1:
        return repetition_code(F, nums[0])
    if kind == "zerosum" and len(nums) == 1:
        return zero_sum_code(F, nums[0])
    if kind == "random" and len(nums) == 2:
        rng = np.random.Generator(np.random.Philox(int(args.seed)))
        return from_generator(F, rng.integers(0, F.q, size=(nums[1], nums[0])), nums[0])
    raise ValueError(f"unknown code {args.code!r}; expected rs:k[:n], repetition:n, zerosum:n or random:n:k")


def _family(args, F, n):
    spec = args.leakage if args.leakage is not None else f"random:{int(args.seed)}:{int(args.mu)}"
    return make_family(F, n, spec, int(args.seed))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_analyze(args) -> int:
    scheme = build_scheme(args)
    Theta = tuple(_ints(args.Theta)) if args.Theta is not None else None
    adv = AdversaryModel(int(args.theta), int(args.mu), Theta)
    tau = None if args.no_exact else _family(args, scheme.field, scheme.n)
    rep = ll_resilience_report(
        scheme,
        adv,
        tau,
        secret=int(args.secret),
        seed=int(args.seed),
        g_main=None if args.g_main is None else float(args.g_main),
        dual_form=bool(args.dual_form),
        budget=args.budget,
        threads=int(args.threads),
    )
    d = rep.to_dict()
    ok = rep.sound is not False
    if rep.sd_dual_form is not None:
        ok = ok and abs(rep.sd_exact - rep.sd_dual_form) <= TOL
    d["leakage"] = None if tau is None else tau.kind
    d["pass"] = ok
    _emit_json(d, args.out)
    return 0 if ok else 1


def cmd_sd(args) -> int:
    C = build_code(args)
    F = C.field
    tau = _family(args, F, C.n)
    exact = exact_sd(C, tau, args.budget, int(args.threads))
    dual = sd_dual_form(C, tau, args.budget)
    d = {"code": {"n": C.n, "k": C.k, "field": str(F)}, "leakage": tau.kind, "sd_exact": exact, "sd_dual_form": dual}
    ok = abs(exact - dual) <= TOL
    if not tau.attack and tau.mu is not None and 2**tau.mu < F.p:
        dp = dual_distance(C, args.budget)
        d["code"]["d_perp"] = dp.value
        e1 = bound_thm1(C.n, C.k, dp.value, F.p, F.w, tau.mu)
        e2 = bound_thm2(C.n, C.k, dp.value, F.p, F.w, tau.mu)
        d.update(eps_thm1=e1, eps_thm2=e2)
        ok = ok and exact <= e1 + TOL
        if 2 * dp.value - C.n - 2 >= 0:
            ok = ok and exact <= e2 + TOL
    d["pass"] = ok
    _emit_json(d, args.out)
    return 0 if ok else 1


def cmd_attack(args) -> int:
    scheme = build_scheme(args)
    trials = 1000 if args.trials is None else int(args.trials)
    rep = trace_attack(scheme, int(args.s0), int(args.s1), trials, int(args.seed))
    ok = rep.relation_holds == rep.trials and (rep.separated or "no separation" in rep.flags)
    _emit_json({**rep.to_dict(), "pass": ok}, args.out)
    return 0 if ok else 1


def cmd_compare(args) -> int:
    if args.q is None or args.N is None or args.T is None:
        raise ValueError("compare needs --q, --N and --T")
    Ns, Ts = parse_range(str(args.N)), parse_range(str(args.T))
    thetas = parse_range(str(args.theta))
    mus = parse_range(str(args.mu))
    q = float(args.q)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    ok = True
    first = {}
    for mu in mus:
        for T in Ts:
            for theta in thetas:
                for N in Ns:
                    if args.N0 is not None and N < int(args.N0):
                        continue
                    r = compare_regimes(N, T, theta, mu, q)
                    writer.writerow(r.row())
                    if r.flags:
                        continue
                    if r.hyp["prop1vs3"] and not r.holds["eps1_lt_eps3"]:
                        ok = False
                    if q >= 6 and not r.holds["r1_lt_r2"]:
                        ok = False
                    for key in ("eps1_lt_eps2", "eps3_lt_eps4", "eps1_lt_eps3", "mt1better"):
                        label = f"{key}@mu={mu},T={T},theta={theta}"
                        if first.get(label) is None:
                            first[label] = N if r.holds[key] else None
    _emit(buf.getvalue(), args.out)
    print(json.dumps({"schema_version": SCHEMA_VERSION, "first_N_holding": first, "pass": ok}), file=sys.stderr)
    return 0 if ok else 1


def cmd_verify_lemma(args) -> int:
    if args.lemma is None:
        raise ValueError(f"verify-lemma needs --lemma ({', '.join(LEMMAS)})")
    F = parse_field(args.field)
    trials = 200 if args.trials is None else int(args.trials)
    d = run_lemma(args.lemma, F, trials, int(args.seed), int(args.mu))
    _emit_json(d, args.out)
    return 0 if d["pass"] else 1


def cmd_share(args) -> int:
    scheme = build_scheme(args)
    sv = share(scheme, int(args.secret), int(args.seed))
    _emit_json({"scheme": scheme.summary(), "secret": int(sv.secret.enc), "shares": sv.to_list()}, args.out)
    return 0


def cmd_reconstruct(args) -> int:
    scheme = build_scheme(args)
    idx, vals = _ints(args.indices), _ints(args.shares)
    if not idx or len(idx) != len(vals):
        raise ValueError("reconstruct needs --indices and --shares of equal length")
    res = reconstruct(scheme, idx, vals)
    secret = UNDERDETERMINED if isinstance(res, str) else int(res.enc)
    _emit_json({"scheme": scheme.summary(), "indices": idx, "secret": secret}, args.out)
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "sd": cmd_sd,
    "attack": cmd_attack,
    "compare": cmd_compare,
    "verify-lemma": cmd_verify_lemma,
    "share": cmd_share,
    "reconstruct": cmd_reconstruct,
}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

S = argparse.SUPPRESS


def _common(p):
    p.add_argument("--config", default=S, help="JSON config file ({\"v\": 1, ...}); flags override it")
    p.add_argument("--seed", type=int, default=S, help="seed for every random choice (default 0)")
    p.add_argument("--budget", type=int, default=S, help="enumeration budget (default $LEAKAGE_LAB_BUDGET or 1e7)")
    p.add_argument("--threads", type=int, default=S, help="worker threads for exact SD (default 1)")
    p.add_argument("--out", default=S, help="write the report here instead of stdout")


def _scheme_opts(p):
    p.add_argument("--scheme", choices=["agsh", "eagsh", "shamir", "additive"], default=S)
    p.add_argument("--field", default=S, help='share field "p^w" (default 3^2)')
    p.add_argument("--curve", choices=["hermitian", "rational"], default=S)
    p.add_argument("--m", type=int, default=S, help="pole order of the Riemann-Roch space")
    p.add_argument("--n", type=int, default=S, help="players (shamir, additive)")
    p.add_argument("--t", type=int, default=S, help="privacy threshold / degree (shamir)")
    p.add_argument("--u", type=int, default=S, help="small field degree for eagsh")
    p.add_argument("--v", type=int, default=S, help="symbols per share for eagsh")
    p.add_argument("--secret-index", type=int, default=S, dest="secret_index")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leakage-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("analyze", help="bounds (and exact SD) for a scheme against an adversary")
    _common(p)
    _scheme_opts(p)
    p.add_argument("--theta", type=int, default=S, help="fully corrupted players")
    p.add_argument("--Theta", default=S, help="explicit corrupted players, comma separated")
    p.add_argument("--mu", type=int, default=S, help="leaked bits per share")
    p.add_argument("--leakage", default=S, help="tracebit | lowbits:MU | random:SEED:MU (default random)")
    p.add_argument("--secret", type=int, default=S)
    p.add_argument("--dual-form", action="store_true", default=S, dest="dual_form")
    p.add_argument("--no-exact", action="store_true", default=S, dest="no_exact")
    p.add_argument("--g-main", type=float, default=S, dest="g_main", help="genus term for the asymptotic bounds")

    p = sub.add_parser("sd", help="exact and dual-form SD of a code under a leakage family")
    _common(p)
    p.add_argument("--field", default=S)
    p.add_argument("--code", default=S, help="rs:k[:n] | repetition:n | zerosum:n | random:n:k")
    p.add_argument("--generator", default=S, help="generator rows as JSON")
    p.add_argument("--leakage", default=S)
    p.add_argument("--mu", type=int, default=S)

    p = sub.add_parser("attack", help="p-ary trace leakage attack")
    _common(p)
    _scheme_opts(p)
    p.add_argument("--s0", type=int, default=S)
    p.add_argument("--s1", type=int, default=S)
    p.add_argument("--trials", type=int, default=S)

    p = sub.add_parser("compare", help="CSV grid of the four asymptotic epsilons")
    _common(p)
    p.add_argument("--q", type=float, default=S)
    p.add_argument("--mu", default=S, help="value or range a:b[:step]")
    p.add_argument("--N", default=S, help="range a:b[:step] or list")
    p.add_argument("--T", default=S)
    p.add_argument("--theta", default=S)
    p.add_argument("--N0", type=int, default=S)

    p = sub.add_parser("verify-lemma", help="randomised check of one Fourier lemma")
    _common(p)
    p.add_argument("--lemma", choices=LEMMAS, default=S)
    p.add_argument("--field", default=S)
    p.add_argument("--trials", type=int, default=S)
    p.add_argument("--mu", type=int, default=S)

    p = sub.add_parser("share", help="share a secret")
    _common(p)
    _scheme_opts(p)
    p.add_argument("--secret", type=int, default=S)

    p = sub.add_parser("reconstruct", help="reconstruct from a set of shares")
    _common(p)
    _scheme_opts(p)
    p.add_argument("--indices", default=S, help="share indices, comma separated")
    p.add_argument("--shares", default=S, help="share values (encodings), comma separated")
    return parser


def _allowed(parser) -> dict[str, set[str]]:
    out = {}
    for action in parser._subparsers._group_actions:
        for name, sp in action.choices.items():
            out[name] = {a.dest for a in sp._actions if a.dest not in ("help", "config")}
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        explicit = set(vars(args))
        if getattr(args, "config", None):
            cfg = ExperimentConfig.load(args.config, _allowed(parser))
            if args.command is None:
                args.command = cfg.command
            elif cfg.command not in (None, args.command):
                raise ConfigError(f"config is for {cfg.command!r}, not {args.command!r}")
            cfg.merge_into(args, explicit)
        if args.command is None:
            parser.print_help()
            return 2
        for k, v in DEFAULTS.items():
            if not hasattr(args, k):
                setattr(args, k, v)
        if args.trials is not None and int(args.trials) < 1:
            raise ValueError("--trials must be positive")
        return COMMANDS[args.command](args)
    except (ValueError, ConfigError, BudgetExceeded, ZeroDivisionError) as e:
        print(f"leakage-lab: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
