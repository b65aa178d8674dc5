"""Command-line entry point.

Every subcommand prints a JSON report (or CSV for tables) to standard output
or to ``--out``. Exit status: 0 on success, 1 on a failed verdict or a
counterexample, 2 on usage errors and malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys

from . import geometry
from .errors import HoneycombError, InvalidArgument
from .functionals import FunctionalKind, gamma_curve
from .geometry import ConvexPolygon, HexStructure
from .hypothesis import (
    Exponent,
    InductionConfig,
    chain_check,
    curve_check,
    digamma_sandwich_scan,
    h3prime_jensen_check,
    induction_bruteforce,
)
from .partition_lab import (
    ConvexCluster,
    audit_sides,
    convergence_run,
    hex_pack_bound,
    optimize,
)

KINDS = [k.tag for k in FunctionalKind]
_NUMBER_PI = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*\*?\s*pi\s*$", re.IGNORECASE)


class UsageError(Exception):
    pass


def parse_number(text: str) -> float:
    """A float, optionally followed by ``pi`` (``6.022pi`` is ``6.022 * pi``)."""
    m = _NUMBER_PI.match(text)
    if m:
        return (float(m.group(1)) if m.group(1) else 1.0) * math.pi
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _load_polygon(path: str | None, tol: float) -> ConvexPolygon:
    if path is None:
        return ConvexPolygon(geometry.unit_square().vertices, tol)
    data = _load_json(path)
    try:
        return ConvexPolygon.from_json(data, tol)
    except (HoneycombError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: invalid polygon: {exc}") from None


def _load_container(data, tol):
    if isinstance(data, dict) and "vertices" in data:
        return ConvexPolygon.from_json(data, tol)
    return HexStructure.from_json(data)


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([repr(row[c]) if isinstance(row[c], float) else row[c] for c in columns])
    return buf.getvalue()


# --------------------------------------------------------------------------
# subcommands

def cmd_gamma_table(args) -> int:
    points = gamma_curve(FunctionalKind.parse(args.kind), args.n_max)
    rows = [{"n": p.n, "gamma": p.gamma, "exactness": p.exactness.value} for p in points]
    _emit(args, _csv(rows, ["n", "gamma", "exactness"]))
    return 0


def cmd_check_h3(args) -> int:
    report = curve_check(FunctionalKind.parse(args.kind), args.beta, args.t_max, args.step)
    payload = report.to_json()
    ok = report.passed
    if ok and args.jensen_samples:
        jensen = h3prime_jensen_check(report.kind, args.beta, args.jensen_samples, args.seed)
        payload["jensen"] = {"samples": args.jensen_samples, "pass": jensen}
        ok = jensen
    _emit(args, payload)
    return 0 if ok else 1


def cmd_verify_appendix(args) -> int:
    curves = {
        "cheeger_beta_2/3": curve_check(FunctionalKind.CHEEGER, 2 / 3, args.t_max, args.step),
        "cheeger_beta_2": curve_check(FunctionalKind.CHEEGER, 2.0, args.t_max, args.step),
        "logcap_beta_-2": curve_check(FunctionalKind.LOGCAP, -2.0, args.t_max, args.step),
        "perimeter_beta_-2": curve_check(FunctionalKind.PERIMETER, -2.0, args.t_max, args.step),
    }
    sandwich = digamma_sandwich_scan(args.grid_step, terms=args.terms)
    verdicts = {
        "cheeger_beta_2/3": curves["cheeger_beta_2/3"].verdict.value,
        "cheeger_beta_2": curves["cheeger_beta_2"].verdict.value,
        "logcap_beta_-2": "pass" if curves["logcap_beta_-2"].passed and sandwich.passed else "fail",
    }
    payload = {"verdicts": verdicts, "curves": {k: v.to_json() for k, v in curves.items()},
               "digamma": sandwich.to_json()}
    _emit(args, payload)
    ok = all(v == "pass" for v in verdicts.values()) and curves["perimeter_beta_-2"].passed
    return 0 if ok else 1


def cmd_induction(args) -> int:
    exps = [Exponent.HALF, Exponent.ONE] if args.exponent == "both" else [Exponent.parse(args.exponent)]
    runs = []
    ok = True
    for e in exps:
        rep = induction_bruteforce(InductionConfig(args.a, args.b, args.kmax, args.nmax, e))
        runs.append(rep.to_json())
        ok = ok and rep.passed
    chain = chain_check(args.a, args.b)
    _emit(args, {"pass": ok, "runs": runs, "chain": chain.to_json()})
    return 0 if ok else 1


def cmd_hex_pack(args) -> int:
    omega = _load_polygon(args.omega, args.tolerance)
    cert = hex_pack_bound(omega, args.k, FunctionalKind.parse(args.kind), args.objective)
    _emit(args, cert.to_json())
    return 0


def cmd_optimize(args) -> int:
    omega = _load_polygon(args.omega, args.tolerance)
    res = optimize(omega, args.k, FunctionalKind.parse(args.kind), args.objective, args.seed, args.iters)
    _emit(args, res.to_json())
    return 0


def cmd_euler_audit(args) -> int:
    data = _load_json(args.partition)
    try:
        container = _load_container(data["container"], args.tolerance)
        cells = [ConvexPolygon.from_json(c, args.tolerance) for c in data["cells"]]
        cluster = ConvexCluster(tuple(cells), container)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{args.partition}: partition JSON needs 'container' and 'cells' ({exc})") from None
    except HoneycombError as exc:
        raise UsageError(f"{args.partition}: {exc}") from None
    audit = audit_sides(cluster)
    payload = audit.to_json()
    payload["k"] = cluster.k
    payload["sides"] = [c.n_sides for c in cells]
    _emit(args, payload)
    return 0 if audit.passed else 1


def cmd_convergence(args) -> int:
    omega = _load_polygon(args.omega, args.tolerance)
    rows = convergence_run(omega, FunctionalKind.parse(args.kind), args.objective, args.ks)
    _emit(args, _csv(rows, ["k", "upper", "scaled_upper", "lower", "scaled_lower", "reference"]))
    return 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="honeycomb", description="Honeycomb partition bounds and checks.")
    p.add_argument("--tolerance", type=float, default=geometry.DEFAULT_TOLERANCE,
                   help="geometric tolerance for polygons read from input")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gamma-table", help="gamma(n) for 3 <= n <= n-max as CSV")
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--n-max", type=int, default=12)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gamma_table)

    s = sub.add_parser("check-h3", help="monotonicity/convexity of F(P_t)**beta")
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--beta", type=parse_number, required=True)
    s.add_argument("--t-max", type=float, default=60.0)
    s.add_argument("--step", type=float, default=0.01)
    s.add_argument("--jensen-samples", type=int, default=0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_check_h3)

    s = sub.add_parser("verify-appendix", help="curve shape checks and digamma bounds")
    s.add_argument("--t-max", type=float, default=60.0)
    s.add_argument("--step", type=float, default=0.01)
    s.add_argument("--grid-step", type=float, default=1e-3)
    s.add_argument("--terms", type=int, default=10 ** 5)
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify_appendix)

    s = sub.add_parser("induction", help="brute-force the averaging inequality")
    s.add_argument("--a", type=parse_number, default=6.022 * math.pi)
    s.add_argument("--b", type=parse_number, default=5.82 * math.pi)
    s.add_argument("--kmax", type=int, default=8)
    s.add_argument("--nmax", type=int, default=12)
    s.add_argument("--exponent", choices=["half", "one", "both"], default="both")
    s.add_argument("--out")
    s.set_defaults(func=cmd_induction)

    s = sub.add_parser("hex-pack", help="hexagonal packing bounds")
    s.add_argument("--omega", help="polygon JSON (default: unit square)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--objective", choices=["sum", "max"], default="max")
    s.add_argument("--out")
    s.set_defaults(func=cmd_hex_pack)

    s = sub.add_parser("optimize", help="heuristic convex partition")
    s.add_argument("--omega", help="polygon JSON (default: unit square)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--objective", choices=["sum", "max"], default="max")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--iters", type=int, default=100)
    s.add_argument("--out")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("euler-audit", help="side-count audit of a partition file")
    s.add_argument("--partition", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_euler_audit)

    s = sub.add_parser("convergence", help="scaled packing bounds along k")
    s.add_argument("--omega", help="polygon JSON (default: unit square)")
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--objective", choices=["sum", "max"], default="max")
    s.add_argument("--ks", type=_int_list, default=[100, 1000, 10000])
    s.add_argument("--out")
    s.set_defaults(func=cmd_convergence)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"honeycomb {args.command}: {exc}", file=sys.stderr)
        return 2
    except InvalidArgument as exc:
        print(f"honeycomb {args.command}: {exc}", file=sys.stderr)
        return 2
    except HoneycombError as exc:
        print(f"honeycomb {args.command}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
