"""Command-line front end.

Every subcommand reads boxes from JSON files and writes JSON (or CSV) to
stdout.  Decision subcommands exit 0 when the relation holds, 1 when it does
not, and 2 on input or solver errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import asymptotics, hypotest, monotones, submaj
from .boxes import Box, box_from_json, box_mul, box_pow, box_to_json, power_universal, unit_box
from .errors import DomainError, SolverError

EXIT_HOLDS, EXIT_FAILS, EXIT_ERROR = 0, 1, 2


def _clean(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _clean(obj.item())
    return obj


def _emit(obj, out):
    json.dump(_clean(obj), out, indent=2, sort_keys=True)
    out.write("\n")


def load_box(path: str) -> Box:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise DomainError(f"{path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return box_from_json(obj, path=path)


def _alpha(text: str) -> float:
    if text.lower() in ("inf", "infinity", "oo"):
        return math.inf
    try:
        a = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid alpha {text!r}") from None
    if not a >= 1:
        raise argparse.ArgumentTypeError("alpha must be >= 1 or 'inf'")
    return a


def _boxes(args, *names):
    out = [load_box(getattr(args, n)) for n in names]
    if args.n != 1:
        out = [box_pow(b, args.n) for b in out]
    return out if len(out) > 1 else out[0]


def cmd_divergence(args, out) -> int:
    B = _boxes(args, "box")
    indices = args.i or list(range(1, B.m + 1))
    alphas = args.alpha or list(monotones.default_alpha_grid())
    rows = []
    for i in indices:
        for a in alphas:
            idx = monotones.MonotoneIndex(i, a)
            f = monotones.sandwiched_f(B, idx).value
            try:
                D = monotones.sandwiched_divergence(B, idx)
            except DomainError:
                D = None
            rows.append({"i": i, "alpha": "inf" if idx.tropical else a, "f": f, "D": D})
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["i", "alpha", "f", "D"])
        for r in rows:
            w.writerow([r["i"], r["alpha"], repr(r["f"]), "" if r["D"] is None else repr(r["D"])])
        out.write(buf.getvalue())
    else:
        _emit(rows[0] if len(rows) == 1 else rows, out)
    return EXIT_HOLDS


def cmd_check(args, out) -> int:
    A, B = _boxes(args, "box_a", "box_b")
    res = submaj.check_submajorization(A, B, tol=args.tol)
    _emit(res.to_json(), out)
    return EXIT_HOLDS if res.feasible else EXIT_FAILS


def cmd_check_asymptotic(args, out) -> int:
    A, B = _boxes(args, "box_a", "box_b")
    dec = asymptotics.asymptotic_geq(A, B, decision_tol=args.tol, grid=args.grid)
    if args.format == "csv":
        out.write(dec.to_csv())
    else:
        _emit(dec.to_json(), out)
    return EXIT_HOLDS if dec.holds else EXIT_FAILS


def cmd_strict_cert(args, out) -> int:
    A, B = _boxes(args, "box_a", "box_b")
    cert = asymptotics.strict_certificate(A, B, strict_tol=args.tol, grid=args.grid)
    _emit(cert.to_json(), out)
    return EXIT_HOLDS if cert.all_strict else EXIT_FAILS


def cmd_exponent(args, out) -> int:
    B = _boxes(args, "box")
    results = [{"r": r, **asymptotics.strong_converse_exponent(B, r, grid=args.grid).to_json()} for r in args.r]
    _emit(results[0] if len(results) == 1 else results, out)
    return EXIT_HOLDS


def cmd_region(args, out) -> int:
    B = _boxes(args, "box")
    res = asymptotics.exponent_region_check(B, args.R, args.r, tol=args.tol, grid=args.grid)
    _emit(res.to_json(), out)
    return EXIT_HOLDS if res.achievable else EXIT_FAILS


def cmd_tradeoff(args, out) -> int:
    B = _boxes(args, "box")
    budgets = args.alpha or [k / (args.grid - 1) for k in range(args.grid)]
    curve = hypotest.tradeoff_curve(B, budgets)
    if args.format == "json":
        _emit({"curve": [{"alpha": a, "beta": b} for a, b in curve]}, out)
    else:
        out.write(hypotest.curve_csv(curve))
    return EXIT_HOLDS


def cmd_discriminate(args, out) -> int:
    B = _boxes(args, "box")
    spec = hypotest.DiscriminationSpec(args.a, args.b)
    res = hypotest.discrimination_feasible(B, spec, tol=args.tol, cross_check=args.cross_check)
    payload = res.to_json()
    if res.feasible:
        payload["povm"] = payload.pop("witness")
    _emit(payload, out)
    return EXIT_HOLDS if res.feasible else EXIT_FAILS


def cmd_power_universal(args, out) -> int:
    if args.box is None:
        if args.m is None:
            raise DomainError("give a box file or --m")
        _emit({"u": box_to_json(power_universal(args.m))}, out)
        return EXIT_HOLDS
    B = _boxes(args, "box")
    k, k1, k2 = asymptotics.power_universal_exponent(B)
    payload = {"k": k, "k1": k1, "k2": k2, "u": box_to_json(power_universal(B.m))}
    code = EXIT_HOLDS
    if args.verify:
        uk = box_pow(power_universal(B.m), k)
        upper = submaj.check_submajorization(uk, B, tol=args.tol)
        lower = submaj.check_submajorization(box_mul(uk, B), unit_box(B.m), tol=args.tol)
        payload["verified"] = {
            "u^k >= box": {"feasible": upper.feasible, "slack": upper.slack},
            "u^k box >= 1": {"feasible": lower.feasible, "slack": lower.slack},
        }
        code = EXIT_HOLDS if upper.feasible and lower.feasible else EXIT_FAILS
    _emit(payload, out)
    return code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="decision / solver tolerance")
    common.add_argument("--grid", type=int, default=None, help="number of s-grid points (or curve points)")
    common.add_argument("--n", type=int, default=1, help="replace every input box by its n-th tensor power")
    common.add_argument("--format", choices=("json", "csv"), default=None)

    p = argparse.ArgumentParser(prog="submajor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("divergence", parents=[common], help="monotone values and sandwiched Renyi divergences")
    s.add_argument("box")
    s.add_argument("--i", type=int, action="append")
    s.add_argument("--alpha", type=_alpha, action="append")
    s.set_defaults(func=cmd_divergence)

    for name, func, doc in (
        ("check", cmd_check, "single-shot relative submajorization (SDP)"),
        ("check-asymptotic", cmd_check_asymptotic, "asymptotic relative submajorization"),
        ("strict-cert", cmd_strict_cert, "strict monotone inequalities (many-copy / catalytic)"),
    ):
        s = sub.add_parser(name, parents=[common], help=doc)
        s.add_argument("box_a")
        s.add_argument("box_b")
        s.set_defaults(func=func)

    s = sub.add_parser("exponent", parents=[common], help="strong converse exponent R*(r)")
    s.add_argument("box")
    s.add_argument("--r", type=float, action="append", required=True)
    s.set_defaults(func=cmd_exponent)

    s = sub.add_parser("region", parents=[common], help="achievability of exponent pairs (R_i, r_i)")
    s.add_argument("box")
    s.add_argument("--R", type=float, action="append", required=True)
    s.add_argument("--r", type=float, action="append", required=True)
    s.set_defaults(func=cmd_region)

    s = sub.add_parser("tradeoff", parents=[common], help="optimal type-II error versus significance level")
    s.add_argument("box")
    s.add_argument("--alpha", type=float, action="append")
    s.set_defaults(func=cmd_tradeoff)

    s = sub.add_parser("discriminate", parents=[common], help="POVM feasibility for multiple hypotheses")
    s.add_argument("box")
    s.add_argument("--a", type=float, action="append", required=True)
    s.add_argument("--b", type=float, action="append", required=True)
    s.add_argument("--cross-check", action="store_true")
    s.set_defaults(func=cmd_discriminate)

    s = sub.add_parser("power-universal", parents=[common], help="power universal element and exponent k")
    s.add_argument("box", nargs="?")
    s.add_argument("--m", type=int)
    s.add_argument("--verify", action="store_true", help="confirm u^k >= box and u^k box >= 1 by SDP")
    s.set_defaults(func=cmd_power_universal)
    return p


_DEFAULTS = {
    "tol": {
        "check": submaj.DEFAULT_TOL,
        "discriminate": submaj.DEFAULT_TOL,
        "power-universal": submaj.DEFAULT_TOL,
        "strict-cert": asymptotics.STRICT_TOL,
    },
    "grid": {"tradeoff": 11},
    "format": {"tradeoff": "csv"},
}


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_HOLDS
    if args.tol is None:
        args.tol = _DEFAULTS["tol"].get(args.command, asymptotics.DECISION_TOL)
    if args.grid is None:
        args.grid = _DEFAULTS["grid"].get(args.command, asymptotics.DEFAULT_GRID)
    if args.format is None:
        args.format = _DEFAULTS["format"].get(args.command, "json")
    if args.n < 0:
        err.write("error: --n must be nonnegative\n")
        return EXIT_ERROR
    try:
        return args.func(args, out)
    except DomainError as exc:
        err.write(f"error: {exc}\n")
    except SolverError as exc:
        err.write(f"solver error: {exc}\n")
        json.dump(_clean(exc.stats), err, indent=2, sort_keys=True)
        err.write("\n")
    return EXIT_ERROR


def main():
    sys.exit(run())
