"""Graph document parsing and report serialization.

Input format (either of):

* JSON document ``{"n": 4, "edges": [[1, 2, 0.5], [2, 3], ...]}`` with
  1-indexed vertices; the third entry of a triple is the edge length and
  defaults to 1.0.
* Plain edge list, one ``u v [length]`` per line (``#`` comments and blank
  lines allowed); ``n`` is inferred as the largest label.

Tabular output is comma-separated with a header row and floats at 17
significant digits, so reports are diffable and re-analyzable.
"""
from __future__ import annotations

import json
from typing import Iterable, Sequence

from dataclasses import asdict

from .cycles import SweepReport
from .graphs import Graph, GraphError, LengthFunction, build_graph, length_function
from .optimize import OptimizationReport
from .surgery import ConvergenceReport, CutEvidence, ContractEvidence, ReductionTrace

__all__ = [
    "InputFormatError",
    "load_graph_document",
    "load_graph_file",
    "graph_document",
    "fmt_float",
    "csv_lines",
    "spectrum_dict",
    "spectrum_rows",
    "sweep_dict",
    "sweep_rows",
    "convergence_dict",
    "convergence_rows",
    "trace_dict",
    "trace_rows",
    "optimization_dict",
    "optimization_rows",
]


class InputFormatError(ValueError):
    """Malformed graph document; the message names the offending entry."""


def fmt_float(x: float) -> str:
    return f"{x:.17g}"


def _edge_triple(entry, where: str) -> tuple[int, int, float]:
    if not isinstance(entry, (list, tuple)) or len(entry) not in (2, 3):
        raise InputFormatError(f"{where}: expected [u, v] or [u, v, length], got {entry!r}")
    u, v = entry[0], entry[1]
    if not (isinstance(u, int) and isinstance(v, int)):
        raise InputFormatError(f"{where}: vertex labels must be integers, got {entry!r}")
    length = 1.0
    if len(entry) == 3:
        if not isinstance(entry[2], (int, float)) or isinstance(entry[2], bool):
            raise InputFormatError(f"{where}: length must be a number, got {entry[2]!r}")
        length = float(entry[2])
    if not length > 0.0:
        raise InputFormatError(f"{where}: length must be positive, got {length}")
    return u, v, length


def _parse_json_document(text: str) -> tuple[Graph, LengthFunction]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise InputFormatError("JSON document needs fields 'n' and 'edges'")
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise InputFormatError(f"field 'n' must be a positive integer, got {n!r}")
    edges = []
    lengths = {}
    for k, entry in enumerate(doc["edges"]):
        u, v, length = _edge_triple(entry, f"edges[{k}]")
        edges.append((u, v))
        lengths[(min(u, v), max(u, v))] = length
    try:
        g = build_graph(n, edges)
        return g, length_function(g, lengths)
    except GraphError as exc:
        raise InputFormatError(str(exc)) from None


def _parse_edge_list(text: str) -> tuple[Graph, LengthFunction]:
    edges = []
    lengths = {}
    max_label = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise InputFormatError(
                f"line {lineno}: expected 'u v [length]', got {raw.strip()!r}"
            )
        try:
            u, v = int(parts[0]), int(parts[1])
            length = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise InputFormatError(
                f"line {lineno}: cannot parse {raw.strip()!r}"
            ) from None
        if not length > 0.0:
            raise InputFormatError(f"line {lineno}: length must be positive, got {length}")
        edges.append((u, v))
        lengths[(min(u, v), max(u, v))] = length
        max_label = max(max_label, u, v)
    if not edges:
        raise InputFormatError("no edges found in input")
    try:
        g = build_graph(max_label, edges)
        return g, length_function(g, lengths)
    except GraphError as exc:
        raise InputFormatError(str(exc)) from None


def load_graph_document(text: str) -> tuple[Graph, LengthFunction]:
    """Parse a graph-with-lengths document (JSON or plain edge list)."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json_document(text)
    return _parse_edge_list(text)


def load_graph_file(path) -> tuple[Graph, LengthFunction]:
    with open(path, "r", encoding="utf-8") as fh:
        return load_graph_document(fh.read())


def graph_document(g: Graph, l: LengthFunction) -> dict:
    return {
        "n": g.n,
        "edges": [[u, v, l.of(u, v)] for u, v in g.edges],
    }


def csv_lines(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(fmt_float(x) if isinstance(x, float) else str(x) for x in row))
    return "\n".join(out) + "\n"


def spectrum_dict(g, l, result, lam1, lam1_norm, multiplicity) -> dict:
    return {
        "n": g.n,
        "edges": [[u, v, l.of(u, v)] for u, v in g.edges],
        "eigenvalues": [float(w) for w in result.eigenvalues],
        "residual": result.residual,
        "lambda1": lam1,
        "lambda1_normalized": lam1_norm,
        "lambda1_multiplicity": multiplicity,
    }


def spectrum_rows(result):
    header = ["index", "eigenvalue"]
    rows = [(k, float(w)) for k, w in enumerate(result.eigenvalues)]
    return header, rows


def sweep_dict(report: SweepReport) -> dict:
    return {
        "n": report.n,
        "dropped_head": report.dropped_head,
        "limit_constant": report.limit_constant,
        "fit_lam1": dict(report.fit_lam1._asdict()),
        "fit_lam2": dict(report.fit_lam2._asdict()),
        "records": [asdict(r) for r in report.records],
        "skipped": [list(s) for s in report.skipped],
    }


def sweep_rows(report: SweepReport):
    header = ["t", "lam1", "lam2", "lam_max", "lam1_t", "total_m0"]
    rows = [(r.t, r.lam1, r.lam2, r.lam_max, r.lam1_t, r.total_m0) for r in report.records]
    return header, rows


def convergence_dict(report: ConvergenceReport) -> dict:
    return {
        "at": report.at,
        "base_eigenvalues": list(report.base_eigenvalues),
        "sqrt_bound_constant": report.sqrt_bound_constant,
        "largest_fit": dict(report.largest_fit._asdict()) if report.largest_fit else None,
        "max_dev_ratios": list(report.max_dev_ratios),
        "rows": [asdict(r) for r in report.rows],
        "skipped": [list(s) for s in report.skipped],
    }


def convergence_rows(report: ConvergenceReport):
    header = ["t", "max_norm_dev", "largest"] + [
        f"dev_{k}" for k in range(len(report.base_eigenvalues))
    ]
    rows = [(r.t, r.max_norm_dev, r.largest, *r.deviations) for r in report.rows]
    return header, rows


def _step_dict(step) -> dict:
    out = {"kind": step.kind, "vertex": step.vertex}
    if step.kept_edge is not None:
        out["kept_edge"] = list(step.kept_edge)
    ev = step.evidence
    if isinstance(ev, CutEvidence):
        out["evidence"] = {
            "type": "cut_monotonicity",
            "lambda_before": ev.lambda_before,
            "lambda_after": ev.lambda_after,
            "ok": ev.ok,
        }
    elif isinstance(ev, ContractEvidence):
        out["evidence"] = {
            "type": "pendant_convergence",
            "t_points": list(ev.t_points),
            "max_norm_devs": list(ev.max_norm_devs),
            "decreasing": ev.decreasing,
            "ok": ev.ok,
        }
    return out


def trace_dict(trace: ReductionTrace) -> dict:
    return {
        "initial": {"n": trace.initial.n, "edges": [list(e) for e in trace.initial.edges]},
        "cycle": list(trace.cycle),
        "seed": trace.seed,
        "steps": [_step_dict(s) for s in trace.steps],
        "final": {"n": trace.final.n, "edges": [list(e) for e in trace.final.edges]},
    }


def trace_rows(trace: ReductionTrace):
    header = ["step", "kind", "vertex", "kept_edge", "ok"]
    rows = []
    for k, s in enumerate(trace.steps):
        kept = f"{s.kept_edge[0]}-{s.kept_edge[1]}" if s.kept_edge else ""
        ok = s.evidence.ok if s.evidence is not None else ""
        rows.append((k, s.kind, s.vertex, kept, ok))
    return header, rows


def optimization_dict(report: OptimizationReport) -> dict:
    return {
        "verdict": report.verdict,
        "best_value": report.best_value,
        "best_lengths": [[u, v, val] for (u, v), val in report.best.items()],
        "start_index": report.start_index,
        "start_values": list(report.start_values),
        "iterations": [
            {
                "objective": r.objective,
                "step_size": r.step_size,
                "grad_norm": r.grad_norm,
                "simplex_diameter": r.simplex_diameter,
                "degenerate": r.degenerate,
            }
            for r in report.iterations
        ],
    }


def optimization_rows(report: OptimizationReport):
    header = ["iteration", "objective", "step_size", "grad_norm", "simplex_diameter", "degenerate"]
    rows = []
    for k, r in enumerate(report.iterations):
        rows.append(
            (
                k,
                r.objective,
                r.step_size,
                "" if r.grad_norm is None else fmt_float(r.grad_norm),
                "" if r.simplex_diameter is None else fmt_float(r.simplex_diameter),
                r.degenerate,
            )
        )
    return header, rows
