"""Batch command-line front end.

Subcommands: ``spectrum``, ``cycle-asymptotics``, ``surgery
{attach,contract,cut,converge,reduce}``, ``maximize``.  Exit codes: 0 on
success, 1 on domain errors (including failed slope assertions and invalid
cuts), 2 on usage or parse errors.  All randomness is seeded explicitly, so
identical inputs and flags produce byte-identical outputs.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from ._kernels import JacobiConvergenceError
from .cycles import default_t_grid, sweep_asymptotics
from .fileio import (
    InputFormatError,
    convergence_dict,
    convergence_rows,
    csv_lines,
    graph_document,
    load_graph_file,
    optimization_dict,
    optimization_rows,
    spectrum_dict,
    spectrum_rows,
    sweep_dict,
    sweep_rows,
    trace_dict,
    trace_rows,
)
from .graphs import GraphError
from .optimize import OptimizerConfig, maximize_lambda1
from .spectral import lambda1_info
from .surgery import (
    attach_pendant,
    contract_pendant,
    cut_monotonicity_check,
    eigen_convergence_check,
    reduce_to_cycle,
)

__all__ = ["main", "RunConfig"]


@dataclass(frozen=True)
class RunConfig:
    """Validated per-command run parameters (seeds explicit, budgets
    positive, output format one of ``csv``/``json``)."""

    fmt: str = "csv"
    out: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.fmt not in ("csv", "json"):
            raise InputFormatError(f"unknown output format {self.fmt!r}")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(fmt: str, out: str | None, as_dict, as_rows) -> None:
    if fmt == "json":
        _emit(json.dumps(as_dict(), indent=2) + "\n", out)
    else:
        header, rows = as_rows()
        _emit(csv_lines(header, rows), out)


def _parse_window(spec: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in spec.split(":"))
    except ValueError:
        raise InputFormatError(f"window must look like 'lo:hi', got {spec!r}") from None
    if lo > hi:
        lo, hi = hi, lo
    return lo, hi


def cmd_spectrum(args) -> int:
    cfg = RunConfig(fmt=args.format, out=args.out)
    g, l = load_graph_file(args.input)
    info = lambda1_info(g, l)
    res = info.spectrum
    lam_norm = info.value * (2.0 * l.total()) ** 2
    _emit_report(
        cfg.fmt,
        cfg.out,
        lambda: spectrum_dict(g, l, res, info.value, lam_norm, info.multiplicity),
        lambda: spectrum_rows(res),
    )
    return 0


def cmd_cycle_asymptotics(args) -> int:
    cfg = RunConfig(fmt=args.format, out=args.out)
    hi, lo = (args.t_decades.split(":") + [None])[:2]
    if lo is None:
        raise InputFormatError(f"--t-decades must look like '1e-2:1e-6', got {args.t_decades!r}")
    grid = default_t_grid(float(hi), float(lo), args.points_per_decade)
    report = sweep_asymptotics(args.n, grid, dropped_head=args.drop_head)
    _emit_report(cfg.fmt, cfg.out, lambda: sweep_dict(report), lambda: sweep_rows(report))
    w1 = _parse_window(args.slope1_window)
    w2 = _parse_window(args.slope2_window)
    ok = (
        w1[0] <= report.fit_lam1.slope <= w1[1]
        and w2[0] <= report.fit_lam2.slope <= w2[1]
    )
    if not ok:
        print(
            f"slope assertion failed: lambda1 {report.fit_lam1.slope:.4f} "
            f"(window {w1}), lambda2 {report.fit_lam2.slope:.4f} (window {w2})",
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_surgery_attach(args) -> int:
    g, l = load_graph_file(args.input)
    g2, l2 = attach_pendant(g, l, args.at, args.t)
    _emit(json.dumps(graph_document(g2, l2), indent=2) + "\n", args.out)
    return 0


def cmd_surgery_contract(args) -> int:
    g, l = load_graph_file(args.input)
    g2, l2, relabel = contract_pendant(g, l, args.vertex)
    doc = graph_document(g2, l2)
    doc["relabel"] = {str(k): v for k, v in sorted(relabel.items())}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_surgery_cut(args) -> int:
    g, l = load_graph_file(args.input)
    check = cut_monotonicity_check(g, l, args.at, tuple(args.keep))
    doc = graph_document(check.cut.graph, check.cut.transport_lengths(l))
    doc["lambda1_before"] = check.before
    doc["lambda1_after"] = check.after
    doc["monotone"] = check.holds
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_surgery_converge(args) -> int:
    cfg = RunConfig(fmt=args.format, out=args.out)
    g, l = load_graph_file(args.input)
    grid = [float(x) for x in args.t_grid.split(",")]
    report = eigen_convergence_check(g, l, args.at, grid)
    _emit_report(
        cfg.fmt, cfg.out, lambda: convergence_dict(report), lambda: convergence_rows(report)
    )
    return 0


def cmd_surgery_reduce(args) -> int:
    cfg = RunConfig(fmt=args.format, out=args.out, seed=args.seed)
    g, _ = load_graph_file(args.input)
    trace = reduce_to_cycle(g, seed=cfg.seed)
    _emit_report(cfg.fmt, cfg.out, lambda: trace_dict(trace), lambda: trace_rows(trace))
    return 0


def cmd_maximize(args) -> int:
    cfg = RunConfig(fmt=args.format, out=args.out, seed=args.seed)
    if args.budget < 0:
        raise InputFormatError(f"--budget must be >= 0, got {args.budget}")
    if not args.cap > 0:
        raise InputFormatError(f"--cap must be positive, got {args.cap}")
    g, _ = load_graph_file(args.input)
    report = maximize_lambda1(
        g,
        OptimizerConfig(budget=args.budget, cap=args.cap, starts=args.starts, seed=cfg.seed),
    )
    _emit_report(
        cfg.fmt, cfg.out, lambda: optimization_dict(report), lambda: optimization_rows(report)
    )
    return 0


def _cycle_size(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 3:
        raise argparse.ArgumentTypeError(f"cycle size must be >= 3, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specmax",
        description="Spectra of length-weighted graph Laplacians and "
        "first-eigenvalue experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p, default_fmt="csv"):
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument(
            "--format",
            choices=("csv", "json"),
            default=default_fmt,
            help="tabular text (csv) or structured document (json)",
        )

    p = sub.add_parser("spectrum", help="full spectrum and lambda1 of a graph file")
    p.add_argument("input")
    add_output(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser(
        "cycle-asymptotics", help="divergence-rate sweep of the cycle length family"
    )
    p.add_argument("--n", type=_cycle_size, required=True, help="cycle size (>= 3)")
    p.add_argument(
        "--t-decades",
        default="1e-1:1e-6",
        help="grid range 'hi:lo', e.g. 1e-2:1e-6",
    )
    p.add_argument("--points-per-decade", type=int, default=10)
    p.add_argument(
        "--drop-head",
        type=int,
        default=2,
        help="largest-t points excluded from slope fits",
    )
    p.add_argument("--slope1-window", default="-1.05:-0.95")
    p.add_argument("--slope2-window", default="-2.1:-1.9")
    add_output(p)
    p.set_defaults(func=cmd_cycle_asymptotics)

    p = sub.add_parser("surgery", help="pendant/cut operations and the reduction pipeline")
    ssub = p.add_subparsers(dest="surgery_command", required=True)

    sp = ssub.add_parser("attach", help="attach a pendant vertex")
    sp.add_argument("input")
    sp.add_argument("--at", type=int, required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_surgery_attach)

    sp = ssub.add_parser("contract", help="contract a degree-one vertex")
    sp.add_argument("input")
    sp.add_argument("--vertex", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_surgery_contract)

    sp = ssub.add_parser("cut", help="clone a vertex, keeping one edge")
    sp.add_argument("input")
    sp.add_argument("--at", type=int, required=True)
    sp.add_argument(
        "--keep", type=int, nargs=2, required=True, metavar=("U", "V"), help="kept edge"
    )
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_surgery_cut)

    sp = ssub.add_parser("converge", help="pendant spectrum convergence table")
    sp.add_argument("input")
    sp.add_argument("--at", type=int, required=True)
    sp.add_argument(
        "--t-grid",
        default="1.6e-2,4e-3,1e-3,2.5e-4",
        help="comma-separated descending pendant lengths",
    )
    add_output(sp)
    sp.set_defaults(func=cmd_surgery_converge)

    sp = ssub.add_parser("reduce", help="collapse a cyclic graph onto a shortest cycle")
    sp.add_argument("input")
    sp.add_argument("--seed", type=int, default=0)
    add_output(sp, default_fmt="json")
    sp.set_defaults(func=cmd_surgery_reduce)

    p = sub.add_parser("maximize", help="ascend the scale-invariant lambda1 objective")
    p.add_argument("input")
    p.add_argument("--budget", type=int, default=200, help="iterations per start")
    p.add_argument("--cap", type=float, default=1e8)
    p.add_argument("--starts", type=int, default=8)
    p.add_argument("--seed", type=int, default=20260801)
    add_output(p)
    p.set_defaults(func=cmd_maximize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except InputFormatError as exc:
        print(f"specmax: input error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"specmax: {exc}", file=sys.stderr)
        return 2
    except (GraphError, JacobiConvergenceError, ValueError) as exc:
        print(f"specmax: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
