"""Command line front-end.

Every command is deterministic: repeated runs with the same arguments give
byte-identical output.  Plain (dat) output is tab-separated, csv output is
comma-separated with a header, and json output carries a top-level
"schema": "friable-kit/1" marker.  Exit codes: 0 success, 2 usage or domain
problems, 3 cost/range guards, 4 unmet numerical tolerances.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from decimal import Decimal

from . import caching, counting, special, stats
from .xi import xi, xi_integral
from .errors import (
    BoundsError,
    CostError,
    CoverageError,
    DomainError,
    SpecMismatchError,
    ToleranceError,
)
from .primes import sieve_primes

SCHEMA = "friable-kit/1"
EXIT_USAGE = 2
EXIT_GUARD = 3
EXIT_TOLERANCE = 4

__all__ = ["main", "build_parser", "SCHEMA"]


def _fmt(value: float, precision: int | None) -> str:
    if precision:
        return f"{float(value):.{precision}g}"
    return repr(float(value))


def _emit_rows(rows, args, csv_header: str) -> None:
    # rows of (key, already-formatted value) in fixed order
    if args.format == "json":
        payload = {"schema": SCHEMA, "command": args.command}
        payload.update((k, v) for k, v in rows)
        print(json.dumps(payload))
    elif args.format == "csv":
        print(csv_header)
        for k, v in rows:
            print(f"{k},{v}")
    else:
        for k, v in rows:
            print(f"{k}\t{v}")


def _emit_scalar(value: float, args, extra=()) -> None:
    if args.format == "json":
        payload = {"schema": SCHEMA, "command": args.command}
        payload.update(extra)
        payload["value"] = float(value)
        print(json.dumps(payload))
    else:
        print(_fmt(value, args.precision))


def _table(args):
    if args.prime_limit:
        return sieve_primes(args.prime_limit)
    return None


def _decimal_str(d: Decimal) -> str:
    # shortest plain decimal: no exponent, no trailing zeros
    s = format(d.normalize(), "f")
    return s


def cmd_rho_table(args) -> int:
    step = Decimal(args.step)
    if step <= 0:
        raise DomainError(f"step must be positive, got {args.step}")
    max_u = Decimal(args.max_u)
    if float(max_u) > 500.0:
        raise BoundsError(f"max-u {max_u} exceeds the table guard 500")
    ev = special.default_rho()
    rows = []
    i = 0
    while step * i <= max_u:
        u = step * i
        rows.append((_decimal_str(u), f"{ev.rho(float(u)):.6g}"))
        i += 1
    if args.format == "json":
        print(json.dumps({
            "schema": SCHEMA,
            "command": "rho-table",
            "rows": [[float(u), float(v)] for u, v in rows],
        }))
    elif args.format == "csv":
        print("u,rho")
        for u, v in rows:
            print(f"{u},{v}")
    else:
        for u, v in rows:
            print(f"{u}\t{v}")
    return 0


def cmd_psi_report(args) -> int:
    bundle = counting.estimate_bundle(args.x, args.y, _table(args))
    payload = {"schema": SCHEMA, "command": "psi-report",
               "x": bundle.x, "y": bundle.y, "u": bundle.u}
    if bundle.exact is None:
        payload["exact"] = None
        payload["exact_note"] = (
            f"exact count skipped: cost guard at x > {counting.PSI_EXACT_MAX_X:g}")
    else:
        payload["exact"] = bundle.exact
    payload["dickman"] = bundle.dickman
    payload["lambda"] = bundle.lambda_
    if bundle.lambda_ is None:
        payload["lambda_note"] = (
            f"jump sum skipped: cost guard at x > {counting.LAMBDA_MAX_X:g}")
    payload["rankin_upper"] = bundle.rankin_upper
    payload["binomial_lower"] = bundle.binomial_lower
    payload["saddle"] = bundle.saddle
    payload["z_log"] = bundle.z_log
    if bundle.exact:
        ratios = {"dickman": bundle.dickman / bundle.exact}
        if bundle.lambda_ is not None:
            ratios["lambda"] = bundle.lambda_ / bundle.exact
        ratios["rankin_upper"] = bundle.rankin_upper / bundle.exact
        ratios["binomial_lower"] = bundle.binomial_lower / bundle.exact
        ratios["saddle"] = bundle.saddle / bundle.exact
        payload["ratios"] = ratios
    print(json.dumps(payload))
    return 0


def cmd_constants(args) -> int:
    name = args.name
    if name == "golomb-dickman":
        a = stats.golomb_dickman_rho()
        b = stats.golomb_dickman_shepp_lloyd()
        value, methods, delta = a, ["dickman-density-integral",
                                    "shepp-lloyd-integral"], abs(a - b)
    elif name == "e-gamma":
        value = special.EXP_GAMMA
        near = special.rho_laplace_numeric(0.0)
        methods, delta = ["high-precision-literal",
                          "dickman-transform-at-0"], abs(near - value)
    else:  # rho-tau-squared
        value = special.rho_tau_squared()
        tau_sq = ((1.0 + math.sqrt(5.0)) / 2.0) ** 2
        methods = ["dilogarithm-closed-form", "delay-equation-solver"]
        delta = abs(value - special.rho(tau_sq))
    print(json.dumps({"schema": SCHEMA, "command": "constants", "name": name,
                      "value": value, "methods": methods,
                      "cross_check_delta": delta}))
    return 0


def cmd_identity_check(args) -> int:
    if args.which == "buchstab":
        if args.z is None:
            raise DomainError("buchstab check needs --z")
        residual = counting.buchstab_identity_check(args.x, args.y, args.z,
                                                    _table(args))
        _emit_scalar(residual, args,
                     extra=(("x", args.x), ("y", args.y), ("z", args.z)))
        return 0 if residual == 0 else EXIT_TOLERANCE
    residual = counting.hildebrand_identity_check(args.x, args.y, _table(args))
    _emit_scalar(residual, args, extra=(("x", args.x), ("y", args.y)))
    tol = 1e-6 * args.x * math.log(max(args.x, 2.0))
    return 0 if abs(residual) <= tol else EXIT_TOLERANCE


def cmd_stats(args) -> int:
    p = args.precision
    if args.which == "logP":
        exact = stats.sum_log_P(args.x)
        model = stats.sum_log_P_prediction(args.x)
        _emit_rows([("sum", _fmt(exact, p)), ("prediction", _fmt(model, p)),
                    ("ratio", _fmt(exact / model, p))], args, "quantity,value")
    elif args.which == "recipP":
        exact = stats.sum_recip_P(args.x)
        model = stats.sum_recip_P_estimate(args.x)
        _emit_rows([("sum", _fmt(exact, p)), ("estimate", _fmt(model, p)),
                    ("ratio", _fmt(exact / model, p))], args, "quantity,value")
    elif args.which == "mu":
        if args.n is None:
            raise DomainError("stats mu needs --n")
        summ = stats.mu_exact(args.n)
        _emit_rows([("n", str(summ.n)), ("L_n", str(summ.L_n)),
                    ("mu_n", str(summ.mu_n)),
                    ("mu_float", _fmt(float(summ.mu_n), p))],
                   args, "quantity,value")
    else:  # cycle-cdf
        if args.n is None or args.u is None:
            raise DomainError("stats cycle-cdf needs --n and --u")
        frac = stats.longest_cycle_cdf(args.n, args.u)
        _emit_rows([("n", str(args.n)), ("u", _fmt(args.u, p)),
                    ("fraction", str(frac)), ("value", _fmt(float(frac), p))],
                   args, "quantity,value")
    return 0


def cmd_cache(args) -> int:
    if args.which == "info":
        files = caching.cache_files()
        total = sum(f.stat().st_size for f in files)
        _emit_rows([("dir", str(caching.cache_dir())),
                    ("files", str(len(files))), ("bytes", str(total))],
                   args, "quantity,value")
    else:
        removed = caching.clear_cache()
        _emit_rows([("removed", str(removed))], args, "quantity,value")
    return 0


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "rho":
        _emit_scalar(special.rho(args.u), args, extra=(("u", args.u),))
    elif cmd == "rho-table":
        return cmd_rho_table(args)
    elif cmd == "xi":
        v = xi(args.u)
        p = args.precision
        _emit_rows([("xi", _fmt(v.xi, p)), ("xi_prime", _fmt(v.xi_prime, p)),
                    ("xi_integral", _fmt(xi_integral(args.u), p))],
                   args, "quantity,value")
    elif cmd == "omega":
        _emit_scalar(special.omega(args.u), args, extra=(("u", args.u),))
    elif cmd == "sigma":
        _emit_scalar(special.sigma_kappa(args.u, args.kappa), args,
                     extra=(("u", args.u), ("kappa", args.kappa)))
    elif cmd == "tau":
        _emit_scalar(special.tau_delta(args.u, args.delta), args,
                     extra=(("u", args.u), ("delta", args.delta)))
    elif cmd == "psi":
        res = counting.psi_exact(args.x, args.y, _table(args))
        _emit_scalar(res.value, args, extra=(("x", args.x), ("y", args.y)))
    elif cmd == "phi":
        res = counting.phi_exact(args.x, args.y, _table(args))
        _emit_scalar(res.value, args, extra=(("x", args.x), ("y", args.y)))
    elif cmd == "psi-report":
        return cmd_psi_report(args)
    elif cmd == "identity-check":
        return cmd_identity_check(args)
    elif cmd == "constants":
        return cmd_constants(args)
    elif cmd == "stats":
        return cmd_stats(args)
    elif cmd == "cache":
        return cmd_cache(args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("dat", "csv", "json"),
                        default="dat", help="output format")
    common.add_argument("--precision", type=int, default=None,
                        help="significant digits for plain output")
    common.add_argument("--cache-dir", default=None,
                        help="cache directory (overrides FRIABLE_CACHE_DIR)")
    common.add_argument("--prime-limit", type=int, default=None,
                        help="sieve primes up to this limit once, up front")

    parser = argparse.ArgumentParser(
        prog="friable",
        description="Friable integer counts and the Dickman rho family.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, helptext: str, *flags):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        for flag, kw in flags:
            sp.add_argument(flag, **kw)
        return sp

    f_u = ("--u", {"type": float, "required": True, "help": "argument u"})
    f_x = ("--x", {"type": float, "required": True, "help": "count bound x"})
    f_y = ("--y", {"type": float, "required": True, "help": "friability bound y"})

    add("rho", "Dickman rho at u", f_u)
    add("rho-table", "table of rho on a decimal grid",
        ("--max-u", {"default": "4", "help": "last grid point"}),
        ("--step", {"default": "0.1", "help": "grid spacing (decimal)"}))
    add("xi", "saddle function xi(u), its derivative and integral", f_u)
    add("omega", "Buchstab omega at u", f_u)
    add("sigma", "Ankeny-Onishi-Selberg sigma_kappa at u", f_u,
        ("--kappa", {"type": float, "required": True, "help": "sieve density"}))
    add("tau", "thinned-primes tau_delta at u", f_u,
        ("--delta", {"type": float, "required": True, "help": "prime fraction"}))
    add("psi", "exact friable count Psi(x, y)", f_x, f_y)
    add("phi", "exact sieved count Phi(x, y)", f_x, f_y)
    add("psi-report", "every Psi estimator at (x, y), as json", f_x, f_y)
    ic = add("identity-check", "verify a counting identity", f_x, f_y,
             ("--z", {"type": float, "default": None, "help": "upper cut z"}))
    ic.add_argument("which", choices=("buchstab", "hildebrand"))
    co = sub.add_parser("constants", parents=[common],
                        help="package constants with cross-checks")
    co.add_argument("name",
                    choices=("golomb-dickman", "e-gamma", "rho-tau-squared"))
    st = add("stats", "largest-prime-factor and permutation statistics",
             ("--x", {"type": float, "default": None, "help": "sum bound x"}),
             ("--n", {"type": int, "default": None, "help": "permutation size"}),
             ("--u", {"type": float, "default": None, "help": "cycle cutoff n/u"}))
    st.add_argument("which", choices=("logP", "recipP", "mu", "cycle-cdf"))
    ca = sub.add_parser("cache", parents=[common], help="cache bookkeeping")
    ca.add_argument("which", choices=("info", "clear"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits on usage errors and --help
        return int(exc.code or 0)
    if args.cache_dir:
        os.environ["FRIABLE_CACHE_DIR"] = args.cache_dir
    try:
        return _dispatch(args)
    except (DomainError, SpecMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BoundsError, CoverageError, CostError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ToleranceError as exc:
        print(f"tolerance not met: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
