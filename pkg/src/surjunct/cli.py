"""Command line interface.

Exit codes: 0 verdict produced (including Unknown), 2 input error,
3 internal inconsistency, 4 budget exceeded or, with --strict, an
undecided property.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .classifier import SCHEMA_VERSION, AnalyzeConfig, PropertyReport, Truth, analyze
from .errors import (
    BudgetExceededError,
    ConvergenceError,
    InconsistentReportError,
    ParseError,
    SurjunctError,
    ZeroPolynomialError,
)
from .parser import format_poly, parse, read_batch
from .shiftlab import (
    PeriodicLattice,
    periodic_points_count,
    sigma_checks,
    write_periodic_csv,
)
from .torus import mahler_multi, write_grid_csv

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_BUDGET = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, msg, code):
        super().__init__(msg)
        self.code = code


def _dump(obj, compact=False) -> str:
    if compact:
        return json.dumps(obj, separators=(",", ":"))
    return json.dumps(obj, indent=2)


def _parse_poly(text: str, dim: int | None):
    try:
        f = parse(text, dim)
    except ParseError as e:
        raise CliError(f"parse error: {e}", EXIT_INPUT) from e
    if not f:
        raise CliError("zero polynomial", EXIT_INPUT)
    return f


def _config(args) -> AnalyzeConfig:
    try:
        return AnalyzeConfig(
            grid=args.grid,
            entropy_grid=args.entropy_grid,
            tol=args.tol,
            max_rou_order=args.max_rou_order,
        )
    except ValueError as e:
        raise CliError(str(e), EXIT_INPUT) from e


def _run_analyze(f, cfg) -> PropertyReport:
    try:
        return analyze(f, cfg)
    except InconsistentReportError as e:
        raise CliError(f"internal inconsistency: {e}", EXIT_INTERNAL) from e
    except (BudgetExceededError, ConvergenceError) as e:
        raise CliError(f"budget exceeded: {e}", EXIT_BUDGET) from e


def _undecided(report: PropertyReport) -> bool:
    return any(
        p.value is Truth.UNKNOWN for p in (report.connected, report.mixing, report.expansive)
    )


def render_text(report: PropertyReport) -> str:
    lines = [f"f = {format_poly(report.poly)}   (d = {report.poly.dim})"]
    for name in ("connected", "mixing", "expansive", "adcc"):
        pv = getattr(report, name)
        lines.append(f"  {name:<10} {pv.value.value:<8} [{pv.certainty.value}]")
    e = report.entropy
    lines.append(
        f"  entropy    h_top = {e.h_top:.10f} +- {e.error_estimate:.2e}  ({e.method.value})"
    )
    lines.append(f"  generalized cyclotomic: {report.is_generalized_cyclotomic}")
    v = report.verdict
    head = f"verdict: {v.status.value}"
    if v.theorem:
        head += f" by {v.theorem.value}"
    lines.append(head)
    for prop, val, anchor in v.reasoning:
        lines.append(f"  - {prop} = {val}: {anchor}")
    for b in v.blocking:
        lines.append(f"  ! {b}")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    f = _parse_poly(args.poly, args.dim)
    report = _run_analyze(f, _config(args))
    if args.json:
        print(_dump(report.as_dict()))
    else:
        print(render_text(report))
    if args.strict and _undecided(report):
        return EXIT_BUDGET
    return EXIT_OK


def cmd_mahler(args) -> int:
    f = _parse_poly(args.poly, args.dim)
    try:
        res = mahler_multi(f, outer_grid=args.entropy_grid, tol=args.tol)
    except (BudgetExceededError, ConvergenceError) as e:
        raise CliError(f"budget exceeded: {e}", EXIT_BUDGET) from e
    out = {"schema": SCHEMA_VERSION, "poly": format_poly(f), **res.as_dict()}
    if args.json:
        print(_dump(out))
    else:
        print(f"log_mahler = {res.log_mahler:.10f}")
        print(f"h_top      = {res.h_top:.10f}")
        print(f"error      = {res.error_estimate:.3e}")
        print(f"method     = {res.method.value}")
    if args.csv:
        write_grid_csv(f, args.grid, args.csv)
    return EXIT_OK


def _lattice(text: str) -> tuple[int, ...]:
    try:
        periods = tuple(int(x) for x in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad lattice {text!r}") from e
    if not periods or any(n < 1 for n in periods):
        raise argparse.ArgumentTypeError("lattice periods must be positive")
    return periods


def cmd_periodic(args) -> int:
    f = _parse_poly(args.poly, args.dim)
    lattices = args.lattice or [(1,) * f.dim]
    rows = []
    for periods in lattices:
        try:
            lat = PeriodicLattice(periods)
            rows.append(periodic_points_count(f, args.mod, lat))
        except BudgetExceededError as e:
            raise CliError(str(e), EXIT_BUDGET) from e
        except ValueError as e:
            raise CliError(str(e), EXIT_INPUT) from e
    for r in rows:
        if args.json:
            print(_dump({"periods": list(r.periods), "kernel_dim": r.kernel_dim, "count": r.count}, True))
        else:
            lat = ",".join(map(str, r.periods))
            print(f"lattice {lat}: kernel_dim {r.kernel_dim}, count {r.count}")
    if args.csv:
        write_periodic_csv(rows, args.csv)
    return EXIT_OK


def cmd_sigma_demo(args) -> int:
    checks = {c.name: c for c in sigma_checks()}
    for c in checks.values():
        print(f"  {c.name}: {'PASS' if c.passed else 'FAIL'}" + (f" ({c.detail})" if c.detail else ""))
    surj = checks["surjective"]
    ok = (
        checks["equivariant"].passed
        and checks["injective"].passed
        and checks["preimage_inverse"].passed
        and not surj.passed
        and surj.detail.startswith("witness: single-1 block")
    )
    print(
        f"injective: {'PASS' if checks['injective'].passed else 'FAIL'}, "
        f"surjective: {'PASS' if surj.passed else 'FAIL (witness: single-1 block)'}"
    )
    return EXIT_OK if ok else EXIT_INTERNAL


def _batch_line(item):
    lineno, text, cfg, dim = item
    rec = {"line": lineno, "input": text}
    try:
        f = parse(text, dim)
        if not f:
            raise ZeroPolynomialError()
        rec["report"] = analyze(f, cfg).as_dict()
    except ParseError as e:
        rec["error"] = {"kind": "parse", "message": e.msg, "position": e.pos}
    except ZeroPolynomialError as e:
        rec["error"] = {"kind": "input", "message": str(e)}
    except SurjunctError as e:
        rec["error"] = {"kind": type(e).__name__, "message": str(e)}
    return rec


def cmd_batch(args) -> int:
    cfg = _config(args)
    try:
        with open(args.file, encoding="utf-8") as fh:
            items = [(no, text, cfg, args.dim) for no, text in read_batch(fh)]
    except OSError as e:
        raise CliError(str(e), EXIT_INPUT) from e
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            records = list(ex.map(_batch_line, items))
    else:
        records = [_batch_line(it) for it in items]
    code = EXIT_OK
    for rec in records:
        print(_dump(rec, compact=True))
        if "error" in rec and rec["error"]["kind"] == "InconsistentReportError":
            code = EXIT_INTERNAL
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="surjunct",
        description="Classify algebraic Z^d-actions X_f and decide surjunctivity.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=64, help="torus certification grid")
    common.add_argument("--entropy-grid", type=int, default=256, help="initial quadrature grid")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--max-rou-order", type=int, default=12)
    common.add_argument("--json", action="store_true")
    common.add_argument("--strict", action="store_true", help="exit 4 on undecided properties")
    common.add_argument("--dim", type=int, default=None, help="declared dimension")

    a = sub.add_parser("analyze", parents=[common], help="full property report and verdict")
    a.add_argument("poly")
    a.set_defaults(func=cmd_analyze)

    m = sub.add_parser("mahler", parents=[common], help="log Mahler measure / entropy")
    m.add_argument("poly")
    m.add_argument("--csv", help="write |f| on the --grid torus grid to this file")
    m.set_defaults(func=cmd_mahler)

    per = sub.add_parser("periodic", parents=[common], help="mod-p periodic point counts")
    per.add_argument("poly")
    per.add_argument("--mod", type=int, required=True)
    per.add_argument("--lattice", type=_lattice, action="append")
    per.add_argument("--csv")
    per.set_defaults(func=cmd_periodic)

    s = sub.add_parser("sigma-demo", help="verify the injective, non-surjective map on Sigma")
    s.set_defaults(func=cmd_sigma_demo)

    b = sub.add_parser("batch", parents=[common], help="analyze one polynomial per line")
    b.add_argument("file")
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_batch)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
