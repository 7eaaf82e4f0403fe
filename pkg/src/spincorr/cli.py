"""Command-line front end: every sweep as a subcommand writing CSV + JSON.

Without ``--out`` the CSV goes to stdout followed by the JSON summary on a
single line.  With ``--out PATH`` the files ``PATH.csv`` and ``PATH.json`` are
written instead.

Exit status: 0 on success (negative verdicts included), 2 on configuration
errors, 3 when a family has a vanishing characteristic number.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import correspondence_catalog as cat
from . import ground_space as gs
from . import localization_lab as loc
from . import quantization as qz
from . import symbol_calculus as sym
from .errors import ConfigError, DomainError, ResourceError, SingularityError
from .exact_spin_algebra import EXACT_THRESHOLD
from .series import harmonic

SCHEMA_VERSION = 1


def parse_ngrid(text: str) -> list[int]:
    """``"a,b,c"`` or ``"start:stop:x2"`` (geometric, ``stop`` appended if missed)."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = text.split(":")
            start, stop = int(start), int(stop)
            if not step.startswith("x"):
                raise ValueError
            ratio = float(step[1:])
            if ratio <= 1 or start < 1 or stop < start:
                raise ValueError
            grid = []
            x = float(start)
            while round(x) <= stop:
                if not grid or round(x) > grid[-1]:
                    grid.append(int(round(x)))
                x *= ratio
            if grid[-1] != stop:
                grid.append(stop)
        else:
            grid = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"bad n-grid {text!r}; use 'a,b,c' or 'start:stop:x2'") from None
    if not grid or grid[0] < 1 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError(f"n-grid must be positive and strictly ascending: {grid}")
    return grid


def _ints(text: str, count: int, what: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"{what} must be {count} comma-separated integers") from None
    if len(vals) != count:
        raise ConfigError(f"{what} must be {count} comma-separated integers")
    return vals


def _num(x) -> str:
    if isinstance(x, (int, np.integer, str)):
        return str(x)
    return f"{float(x):.17g}"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_num(v) for v in r])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, cat.Verdict):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def _exact_mode(args, n_max: int) -> bool:
    if args.precision == "auto":
        return n_max <= EXACT_THRESHOLD
    return args.precision == "exact"


def _family(args):
    return cat.family_from_spec(args.family)


def _rule(args):
    return loc.PiRule(args.r, args.rule)


def _verdict_from_errors(errors, tol: float) -> str:
    errors = np.asarray(errors)
    if errors[-1] < errors[0] and errors[-1] < tol:
        return "localizes"
    if errors[-1] >= errors[0]:
        return "does-not-localize"
    return "inconclusive"


# ---------------------------------------------------------------------------
# subcommands; each returns (csv_text, summary_dict)


def cmd_charnums(args):
    fam = _family(args)
    grid = parse_ngrid(args.ngrid)
    rows, zeros = [], {}
    for n in grid:
        vals = fam.exact_values(n) if _exact_mode(args, n) else None
        floats = [float(v) for v in vals] if vals is not None else fam.values(n)
        z = [l for l in range(1, n + 1) if floats[l] == 0]
        if z:
            zeros[n] = z
        rows += [(n, l, floats[l]) for l in range(n + 1)]
    return _csv(["n", "l", "c_l"], rows), {"family": fam.name, "zeros": zeros}


def cmd_classify(args):
    fam = _family(args)
    grid = parse_ngrid(args.ngrid)
    rep = cat.classify(fam, grid, tol=args.tol, l_max=args.lmax)
    rows = []
    for n in grid:
        ls = list(range(1, min(args.lmax, n) + 1))
        rows += [(n, l, fam.value(n, l)) for l in ls]
    return _csv(["n", "l", "c_l"], rows), rep.to_json()


def cmd_rho(args):
    fam = _family(args)
    k = args.k if args.k is not None else _rule(args).k(args.n)
    mode = "exact" if _exact_mode(args, args.n) else "float"
    m = loc.rho_legendre_moments(args.n, k, fam, mode=mode)
    rows = [(l, v) for l, v in enumerate(m)]
    return _csv(["l", "moment_l"], rows), {"family": fam.name, "n": args.n, "k": k, "mode": mode}


def cmd_moments(args):
    fam = _family(args)
    res = loc.moment_sweep(fam, _rule(args), parse_ngrid(args.ngrid), anti=args.anti, tol=args.tol)
    rows = [(r["n"], r["k"], r["mu"], r["sigma2"]) for r in res["rows"]]
    summary = {k: v for k, v in res.items() if k != "rows"}
    summary["family"] = fam.name
    return _csv(["n", "k_n", "mu", "sigma2"], rows), summary


def cmd_localize(args):
    fam = _family(args)
    sw = loc.localization_sweep(fam, _rule(args), args.f, parse_ngrid(args.ngrid), anti=args.anti)
    rows = [(r["n"], r["k"], r["integral"], r["target"], r["error"]) for r in sw.rows]
    summary = {
        "family": fam.name,
        "label": sw.label,
        "verdict": _verdict_from_errors(sw.errors, args.tol),
        "monotone": sw.monotone,
        "last_error": sw.errors[-1],
    }
    return _csv(["n", "k_n", "integral", "f_z0", "error"], rows), summary


def cmd_edmonds(args):
    mode = args.precision if args.precision != "auto" else "auto"
    sw = loc.edmonds_check(args.l, _rule(args), parse_ngrid(args.ngrid), mode=mode)
    rows = [(r["n"], r["k"], r["lhs"], r["target"], r["error"]) for r in sw.rows]
    summary = {"l": args.l, "r": args.r, "improves": sw.improves, "monotone": sw.monotone, "last_error": sw.errors[-1]}
    return _csv(["n", "k_n", "scaled_cg", "P_l", "error"], rows), summary


def cmd_mu_analytic(args):
    fam = _family(args)
    grid = parse_ngrid(args.ngrid)
    poles = [float(x) for x in args.poles.split(",")] if args.poles else None
    res = loc.mu_analytic_suite(fam, args.mu, _rule(args), grid, poles=poles, anti=args.anti)
    rows = []
    for p in res["poles"]:
        rows += [(p["c"], r["n"], r["k"], r["error"]) for r in p["sweep"].rows]
    summary = {
        "family": res["family"],
        "mu": res["mu"],
        "r": res["r"],
        "poles": [{"c": p["c"], "mu": p["mu"], "decreasing": p["decreasing"]} for p in res["poles"]],
    }
    return _csv(["pole", "n", "k_n", "error"], rows), summary


def cmd_bound_check(args):
    fam = _family(args)
    rep = loc.bound_check(fam, args.d, args.nmax)
    rows = [(n, lk) for n, lk in rep.checkpoints]
    summary = {"family": fam.name, "d": args.d, "holds": rep.holds, "K": rep.K, "log_K": rep.log_K}
    if args.ratio_l:
        summary["toeplitz_ratio"] = loc.toeplitz_diagonal_ratio(args.ratio_l)
    return _csv(["n", "log_K_d"], rows), summary


def cmd_quantize_norms(args):
    fam = _family(args)
    rep = qz.asymptotic_norm_report(fam, args.f, parse_ngrid(args.ngrid), dual=args.dual)
    summary = rep.to_json()
    summary.update(family=fam.name, dual=args.dual)
    return rep.to_csv(), summary


def cmd_expectation(args):
    fam = _family(args)
    rep = qz.classical_expectation(fam, _rule(args), args.f, parse_ngrid(args.ngrid), anti=args.anti, tol=args.tol)
    return rep.to_csv(), {"family": fam.name, "verdict": rep.verdict, "limit": rep.limit, "target": rep.target}


def cmd_twisted(args):
    fam = _family(args)
    l1, m1 = _ints(args.fh, 2, "--fh")
    l2, m2 = _ints(args.gh, 2, "--gh")
    n = args.n
    c = cat.char_numbers(fam, n)
    prod = sym.twisted_product(harmonic(n, l1, m1), harmonic(n, l2, m2), c)
    rows = [(l, m, v.real, v.imag) for (l, m), v in prod.items() if abs(v) > 1e-15]
    summary = {"family": fam.name, "n": n, "f": [l1, m1], "g": [l2, m2], "terms": len(rows)}
    return _csv(["l", "m", "re_coefficient", "im_coefficient"], rows), summary


def cmd_poisson_diagnostic(args):
    fam = _family(args)
    l1, m1, l2, m2 = _ints(args.pair, 4, "--pair")
    rep = sym.poisson_diagnostic(l1, m1, l2, m2, fam, parse_ngrid(args.ngrid), sign=args.sign)
    names = ("residual_i", "residual_ii", "residual_iii")
    summary = {"family": fam.name, "sign": args.sign, "decreasing": {k: rep.decreasing(k) for k in names}}
    return rep.to_csv(), summary


def _ground_state(spec: str):
    if spec == "flat":
        return gs.StateSequence.flat()
    if spec.startswith("basis:"):
        m = int(spec.split(":", 1)[1])
        return gs.StateSequence.constant(gs.FourierState.basis(abs(m), m))
    raise ConfigError(f"unknown state {spec!r}; use 'flat' or 'basis:m'")


def cmd_ground_sim(args):
    fam = _family(args)
    grid = parse_ngrid(args.jgrid)
    f = loc.test_function_from_spec(args.f)
    src = _ground_state(args.state)
    seq = gs.StateSequence(lambda j: gs.operator_action(f.series(2 * j).to_harmonic(2 * j), fam, src.at(j), args.dual))
    diag = gs.convergence_diagnostics(seq, grid)
    rows = []
    for j in grid:
        st = seq.at(j)
        rows += [(j, m, complex(st[m]).real, complex(st[m]).imag) for m in range(-j, j + 1)]
    bounded = gs.upper_bounded_check(fam, f, [2 * j for j in grid], dual=args.dual)
    summary = {
        "family": fam.name,
        "cauchy": diag["cauchy"],
        "norm_discontinuous": diag["norm_discontinuous"],
        "norms": diag["norms"],
        "tannery_gap": diag["tannery_gap"],
        "upper_bounded": bounded,
    }
    return _csv(["j", "m", "re_alpha", "im_alpha"], rows), summary


# ---------------------------------------------------------------------------
# parser


def _add_common(p, family=True, r=False, f=False, ngrid=None):
    if family:
        p.add_argument("--family", default="sw", help="shorthand name or JSON family spec")
    if r:
        p.add_argument("--r", type=float, default=0.5, help="limiting ratio k_n / n")
        p.add_argument("--rule", default="round", choices=["round", "floor", "ceil", "centered"])
        p.add_argument("--anti", action="store_true", help="expect localization at the mirrored point")
    if f:
        p.add_argument("--f", default="exp", help="test function spec, e.g. exp, pole:3, poly:1,0,-1")
    if ngrid is not None:
        p.add_argument("--ngrid", default=ngrid, help="'a,b,c' or 'start:stop:x2'")


def _add_global(p, defaults: bool):
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--out", default=d(None), help="write OUT.csv and OUT.json instead of printing")
    p.add_argument("--precision", choices=["exact", "float", "auto"], default=d("auto"))
    p.add_argument("--seed", type=int, default=d(0))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spincorr", description=__doc__.splitlines()[0])
    _add_global(ap, defaults=True)
    # the same flags are accepted after the subcommand as well
    shared = argparse.ArgumentParser(add_help=False)
    _add_global(shared, defaults=False)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("charnums", parents=[shared], help="characteristic numbers c_l^n")
    _add_common(p, ngrid="4,8,16")
    p.set_defaults(run=cmd_charnums)

    p = sub.add_parser("classify", parents=[shared], help="structural verdicts for a family")
    _add_common(p, ngrid="4,8,16")
    p.add_argument("--tol", type=float, default=1e-2)
    p.add_argument("--lmax", type=int, default=3)
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("rho", parents=[shared], help="Legendre moments of the localizing density")
    _add_common(p, r=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.set_defaults(run=cmd_rho)

    p = sub.add_parser("moments", parents=[shared], help="mean and variance along k_n")
    _add_common(p, r=True, ngrid="20:800:x2")
    p.add_argument("--tol", type=float, default=1e-2)
    p.set_defaults(run=cmd_moments)

    p = sub.add_parser("localize", parents=[shared], help="localization error sweep")
    _add_common(p, r=True, f=True, ngrid="20:800:x2")
    p.add_argument("--tol", type=float, default=1e-2)
    p.set_defaults(run=cmd_localize)

    p = sub.add_parser("edmonds", parents=[shared], help="scaled diagonal CG coefficients vs P_l(1-2r)")
    _add_common(p, family=False, r=True, ngrid="30:3000:x2")
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(run=cmd_edmonds)

    p = sub.add_parser("mu-analytic", parents=[shared], help="localization against poles 1/(c-z)")
    _add_common(p, r=True, ngrid="100:1600:x2")
    p.add_argument("--mu", type=float, default=3 + math.sqrt(8))
    p.add_argument("--poles", help="comma-separated pole positions c > 1")
    p.set_defaults(run=cmd_mu_analytic)

    p = sub.add_parser("bound-check", parents=[shared], help="polynomial bound on the characteristic numbers")
    _add_common(p)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--nmax", type=int, default=200)
    p.add_argument("--ratio-l", type=int, help="also report the scaled Toeplitz diagonal at this l")
    p.set_defaults(run=cmd_bound_check)

    p = sub.add_parser("quantize-norms", parents=[shared], help="norms of quantized J3-invariant functions")
    _add_common(p, f=True, ngrid="125:2000:x2")
    p.add_argument("--dual", action="store_true")
    p.set_defaults(run=cmd_quantize_norms)

    p = sub.add_parser("expectation", parents=[shared], help="classical expectation along k_n")
    _add_common(p, r=True, f=True, ngrid="125:2000:x2")
    p.add_argument("--tol", type=float, default=5e-3)
    p.set_defaults(run=cmd_expectation)

    p = sub.add_parser("twisted", parents=[shared], help="twisted product of two harmonics")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fh", default="1,0", help="l,m of the first harmonic")
    p.add_argument("--gh", default="1,1", help="l,m of the second harmonic")
    p.set_defaults(run=cmd_twisted)

    p = sub.add_parser("poisson-diagnostic", parents=[shared], help="residuals of the Poisson-type conditions")
    _add_common(p, ngrid="20,80")
    p.add_argument("--pair", default="1,0,1,1", help="l1,m1,l2,m2")
    p.add_argument("--sign", type=int, choices=[1, -1], default=1)
    p.set_defaults(run=cmd_poisson_diagnostic)

    p = sub.add_parser("ground-sim", parents=[shared], help="operators acting on Fourier states as j grows")
    _add_common(p, f=True)
    p.add_argument("--jgrid", default="4,8,16,32")
    p.add_argument("--state", default="basis:0", help="'flat' or 'basis:m'")
    p.add_argument("--dual", action="store_true")
    p.set_defaults(run=cmd_ground_sim)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    random.seed(args.seed)
    np.random.seed(args.seed)
    try:
        text, summary = args.run(args)
    except SingularityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, DomainError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    summary = {"schema_version": SCHEMA_VERSION, "command": args.command, **_jsonable(summary)}
    threads = os.environ.get("SPINCORR_THREADS")
    if threads:
        summary["threads"] = threads
    blob = json.dumps(summary, sort_keys=True)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.with_suffix(".csv").write_text(text)
        out.with_suffix(".json").write_text(blob + "\n")
    else:
        sys.stdout.write(text)
        sys.stdout.write(blob + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
