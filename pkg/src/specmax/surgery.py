"""Graph surgery: pendant attachment/contraction and vertex cutting.

Attaching a pendant vertex by a short edge of length ``t`` perturbs the
Laplacian in a rigid pattern (one ``1/t^2`` corner, one ``t^{-3/2}``
coupling); as ``t`` shrinks, one eigenvalue escapes to infinity and the rest
converge to the spectrum of the base graph.  Cutting a vertex (cloning it
and re-routing all but one incident edge) never increases the first nonzero
eigenvalue at fixed lengths.  :func:`reduce_to_cycle` chains these moves to
collapse any connected cyclic graph onto a shortest cycle, recording
eigenvalue evidence per step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ._kernels import JacobiConvergenceError
from .graphs import (
    Edge,
    Graph,
    GraphError,
    LengthFunction,
    canonical_edge,
    distance_to_cycle,
    find_cycle,
    normalize_lengths,
    uniform_lengths,
)
from .randgen import random_lengths
from .spectral import SymMatrix, assemble_laplacian, lambda1, symmetric_eigen
from .cycles import LoglogFit, fit_loglog_slope

__all__ = [
    "attach_pendant",
    "PerturbationReport",
    "verify_perturbed_structure",
    "SBlock",
    "s_block",
    "ConvergenceRow",
    "ConvergenceReport",
    "eigen_convergence_check",
    "contract_pendant",
    "CutResult",
    "cut_at_vertex",
    "CutCheck",
    "cut_monotonicity_check",
    "CutEvidence",
    "ContractEvidence",
    "SurgeryStep",
    "ReductionTrace",
    "reduce_to_cycle",
    "replay_trace",
]


def attach_pendant(
    g: Graph, l: LengthFunction, at: int, t: float
) -> tuple[Graph, LengthFunction]:
    """Join a new vertex ``n+1`` to ``at`` by an edge of length ``t``."""
    if not (1 <= at <= g.n):
        raise GraphError(f"vertex {at} out of range 1..{g.n}")
    if not t > 0.0:
        raise GraphError(f"pendant length must be positive, got {t}")
    new_edge = canonical_edge(at, g.n + 1)
    g2 = Graph(g.n + 1, tuple(sorted(g.edges + (new_edge,))))
    lengths = dict(l.lengths)
    lengths[new_edge] = float(t)
    return g2, LengthFunction(lengths)


def _relabel_to_last(g: Graph, l: LengthFunction, at: int) -> tuple[Graph, LengthFunction]:
    """Swap vertex labels ``at`` and ``n`` so the attach vertex sits last."""
    if at == g.n:
        return g, l
    swap = {at: g.n, g.n: at}
    edges = [canonical_edge(swap.get(u, u), swap.get(v, v)) for u, v in g.edges]
    lengths = {
        canonical_edge(swap.get(u, u), swap.get(v, v)): val
        for (u, v), val in l.items()
    }
    return Graph(g.n, tuple(sorted(edges))), LengthFunction(lengths)


@dataclass(frozen=True)
class PerturbationReport:
    """Deviations of pendant-perturbed Laplacian entries from their
    truncated expansions, with halving ratios.

    With the attach vertex relabeled to ``n`` (weight ``alpha``) and the
    pendant at ``n+1``:

    * ``pendant_diag_dev``: the ``(n+1, n+1)`` entry minus ``1/t^2``
      (exactly zero).
    * ``coupling_dev``: the ``(n, n+1)`` entry against
      ``-(1/sqrt(alpha)) t^{-3/2} (1 - t/(2 alpha))``, rescaled by
      ``t^{3/2} sqrt(alpha)`` so the remainder shrinks like ``t^2``;
      ``coupling_dev_raw`` is the unscaled difference (order ``t^{1/2}``).
    * ``attach_diag_dev``: the ``(n, n)`` entry against
      ``base + (1/alpha)(1/t)(1 - t/alpha)``, rescaled by ``alpha t``
      (shrinks like ``t^2``).
    * ``neighbor_dev``: worst change among entries ``(i, n)`` (order ``t``).
    * ``pendant_col_zero``/``base_block_dev``: entries that must not move
      at all.

    Ratios compare the deviation at ``t`` against ``t/2`` (expected near 4
    for the rescaled classes, near 2 for the neighbor class); ``None`` when
    the deviation at ``t/2`` vanishes exactly.
    """

    t: float
    alpha: float
    pendant_diag_dev: float
    coupling_dev: float
    coupling_dev_raw: float
    attach_diag_dev: float
    neighbor_dev: float
    pendant_col_zero: float
    base_block_dev: float
    coupling_ratio: float | None
    attach_diag_ratio: float | None
    neighbor_ratio: float | None


def _perturbation_deviations(g: Graph, l: LengthFunction, t: float):
    n = g.n
    base = assemble_laplacian(g, l).entries
    alpha = sum(l.of(n, v) for v in g.neighbors(n))
    g2, l2 = attach_pendant(g, l, n, t)
    pert = assemble_laplacian(g2, l2).entries
    a = n - 1  # attach vertex index
    p = n  # pendant index
    pendant_diag = abs(pert[p, p] - 1.0 / t**2)
    coupling_trunc = -(1.0 / math.sqrt(alpha)) * t**-1.5 * (1.0 - t / (2.0 * alpha))
    coupling_raw = abs(pert[a, p] - coupling_trunc)
    coupling = coupling_raw * t**1.5 * math.sqrt(alpha)
    diag_trunc = base[a, a] + (1.0 / alpha) * (1.0 / t) * (1.0 - t / alpha)
    attach_diag = abs(pert[a, a] - diag_trunc) * alpha * t
    neighbor = max(abs(pert[i, a] - base[i, a]) for i in range(n - 1)) if n > 1 else 0.0
    pendant_col = max(abs(pert[i, p]) for i in range(n - 1)) if n > 1 else 0.0
    block = float(np.max(np.abs(pert[: n - 1, : n - 1] - base[: n - 1, : n - 1]))) if n > 1 else 0.0
    return alpha, pendant_diag, coupling, coupling_raw, attach_diag, neighbor, pendant_col, block


def verify_perturbed_structure(
    g: Graph, l: LengthFunction, at: int, t: float
) -> PerturbationReport:
    """Measure how pendant attachment at ``at`` perturbs the Laplacian.

    The attach vertex is relabeled to the last index first.  ``t`` should be
    small (at most 0.1) for the expansions to be meaningful.
    """
    if not (0.0 < t <= 0.1):
        raise GraphError(f"perturbation parameter t must lie in (0, 0.1], got {t}")
    gr, lr = _relabel_to_last(g, l, at)
    alpha, pd, cp, cp_raw, ad, nb, pc, blk = _perturbation_deviations(gr, lr, t)
    _, _, cp2, _, ad2, nb2, _, _ = _perturbation_deviations(gr, lr, t / 2.0)

    def ratio(num, den):
        return num / den if den > 1e-300 else None

    return PerturbationReport(
        t=t,
        alpha=alpha,
        pendant_diag_dev=pd,
        coupling_dev=cp,
        coupling_dev_raw=cp_raw,
        attach_diag_dev=ad,
        neighbor_dev=nb,
        pendant_col_zero=pc,
        base_block_dev=blk,
        coupling_ratio=ratio(cp, cp2),
        attach_diag_ratio=ratio(ad, ad2),
        neighbor_ratio=ratio(nb, nb2),
    )


@dataclass(frozen=True)
class SBlock:
    """Dominant 2x2 corner of a pendant-perturbed matrix with its exact
    eigenpairs ``{0, (alpha+t)/(alpha t^2)}``."""

    matrix: SymMatrix
    eigenvalues: tuple[float, float]
    eigenvectors: np.ndarray  # unit columns aligned with eigenvalues


def s_block(alpha: float, t: float) -> SBlock:
    """Closed-form corner block ``[[1/(alpha t), -t^{-3/2}/sqrt(alpha)],
    [-t^{-3/2}/sqrt(alpha), 1/t^2]]``."""
    if not (alpha > 0.0 and t > 0.0):
        raise GraphError(f"s_block needs positive alpha and t, got ({alpha}, {t})")
    off = -(t**-1.5) / math.sqrt(alpha)
    mat = SymMatrix(np.array([[1.0 / (alpha * t), off], [off, 1.0 / t**2]]))
    lam = (alpha + t) / (alpha * t**2)
    r = math.sqrt(t / alpha)
    scale = 1.0 / math.sqrt(1.0 + r * r)
    vecs = np.array([[1.0, -r], [r, 1.0]]) * scale
    return SBlock(mat, (0.0, lam), vecs)


@dataclass(frozen=True)
class ConvergenceRow:
    """Deviation data for one pendant length ``t``."""

    t: float
    deviations: tuple[float, ...]  # |perturbed_k - base_k| for finite k
    max_norm_dev: float  # max_k deviation / (1 + |base_k|)
    largest: float  # the escaping top eigenvalue


@dataclass(frozen=True)
class ConvergenceReport:
    """Spectrum convergence under pendant attachment as ``t`` shrinks.

    ``sqrt_bound_constant`` is the fitted ``C`` in
    ``max_k dev <= C sqrt(t)`` over the grid.  ``max_dev_ratios`` compares
    consecutive grid points: ``max_norm_dev(t_j) / max_norm_dev(t_{j-1})``
    (bounded decay when below 4).  ``largest_fit`` is the log-log fit of the
    escaping eigenvalue (slope near -2).
    """

    at: int
    base_eigenvalues: tuple[float, ...]
    rows: tuple[ConvergenceRow, ...]
    skipped: tuple[tuple[float, str], ...]
    sqrt_bound_constant: float
    largest_fit: LoglogFit | None
    max_dev_ratios: tuple[float, ...]


def eigen_convergence_check(
    g: Graph, l: LengthFunction, at: int, t_grid: Sequence[float]
) -> ConvergenceReport:
    """Track eigenvalues of ``(g, l)`` with a pendant at ``at`` over a grid.

    The base length function is normalized first; the pendant length is not
    renormalized.  Eigensolver failures at extreme ``t`` are recorded
    per-point and skipped.
    """
    grid = [float(t) for t in t_grid]
    if any(not t > 0.0 for t in grid):
        raise GraphError("pendant grid must be positive")
    if any(later >= earlier for earlier, later in zip(grid, grid[1:])):
        raise GraphError("pendant grid must be strictly decreasing")
    ln = normalize_lengths(l)
    base = symmetric_eigen(assemble_laplacian(g, ln)).eigenvalues
    rows = []
    skipped = []
    for t in grid:
        g2, l2 = attach_pendant(g, ln, at, t)
        try:
            w = symmetric_eigen(assemble_laplacian(g2, l2)).eigenvalues
        except JacobiConvergenceError as exc:
            skipped.append((t, str(exc)))
            continue
        devs = tuple(float(abs(w[k] - base[k])) for k in range(g.n))
        norm_dev = max(d / (1.0 + abs(float(b))) for d, b in zip(devs, base))
        rows.append(ConvergenceRow(t, devs, norm_dev, float(w[-1])))
    constant = max((max(r.deviations) / math.sqrt(r.t) for r in rows), default=0.0)
    fit = None
    if len(rows) >= 3:
        fit = fit_loglog_slope([(r.t, r.largest) for r in rows])
    ratios = tuple(
        b.max_norm_dev / a.max_norm_dev if a.max_norm_dev > 1e-300 else 0.0
        for a, b in zip(rows, rows[1:])
    )
    return ConvergenceReport(
        at=at,
        base_eigenvalues=tuple(float(b) for b in base),
        rows=tuple(rows),
        skipped=tuple(skipped),
        sqrt_bound_constant=constant,
        largest_fit=fit,
        max_dev_ratios=ratios,
    )


def contract_pendant(
    g: Graph, l: LengthFunction, pendant: int
) -> tuple[Graph, LengthFunction, dict[int, int]]:
    """Remove a degree-one vertex and its edge; relabel to keep ``1..n-1``.

    Returns the contracted graph, the carried-over lengths, and the vertex
    relabeling map (old label to new label) for the surviving vertices.
    """
    if not (1 <= pendant <= g.n):
        raise GraphError(f"vertex {pendant} out of range 1..{g.n}")
    if g.degree(pendant) != 1:
        raise GraphError(
            f"vertex {pendant} has degree {g.degree(pendant)}, contraction needs degree 1"
        )
    relabel = {
        v: (v if v < pendant else v - 1) for v in range(1, g.n + 1) if v != pendant
    }
    edges = []
    lengths = {}
    for u, v in g.edges:
        if pendant in (u, v):
            continue
        e = canonical_edge(relabel[u], relabel[v])
        edges.append(e)
        lengths[e] = l.of(u, v)
    return Graph(g.n - 1, tuple(sorted(edges))), LengthFunction(lengths), relabel


@dataclass(frozen=True)
class CutResult:
    """Vertex cut: the kept edge stays on the cut vertex, every other
    incident edge re-joins a clone (the new last vertex).  ``edge_map`` is
    the bijection from old edges to new edges."""

    graph: Graph
    clone: int
    edge_map: Mapping[Edge, Edge]

    def transport_lengths(self, l: LengthFunction) -> LengthFunction:
        return LengthFunction({self.edge_map[e]: val for e, val in l.items()})


def cut_at_vertex(g: Graph, at: int, keep_edge: tuple[int, int]) -> CutResult:
    """Clone ``at`` into a new vertex carrying all incident edges except
    ``keep_edge``.

    The result must stay connected; otherwise the cut is invalid and a
    :class:`GraphError` is raised (callers pick a different vertex/edge).
    """
    keep = canonical_edge(*keep_edge)
    if not (1 <= at <= g.n):
        raise GraphError(f"vertex {at} out of range 1..{g.n}")
    if g.degree(at) < 2:
        raise GraphError(f"cut vertex must have degree >= 2, got degree {g.degree(at)}")
    if keep not in set(g.edges):
        raise GraphError(f"kept edge {keep} is not an edge of the graph")
    if at not in keep:
        raise GraphError(f"kept edge {keep} is not incident to vertex {at}")
    clone = g.n + 1
    edge_map: dict[Edge, Edge] = {}
    for e in g.edges:
        if e == keep or at not in e:
            edge_map[e] = e
        else:
            other = e[0] if e[1] == at else e[1]
            edge_map[e] = canonical_edge(other, clone)
    g2 = Graph(g.n + 1, tuple(sorted(edge_map.values())))
    if not g2.is_connected():
        raise GraphError(
            f"invalid cut: splitting vertex {at} keeping edge {keep} disconnects the graph"
        )
    return CutResult(g2, clone, edge_map)


@dataclass(frozen=True)
class CutCheck:
    """First nonzero eigenvalue before and after a vertex cut at fixed
    lengths; ``after`` never exceeds ``before`` beyond rounding."""

    before: float
    after: float
    cut: CutResult

    @property
    def holds(self) -> bool:
        return self.after <= self.before * (1.0 + 1e-10)


def cut_monotonicity_check(
    g: Graph, l: LengthFunction, at: int, keep_edge: tuple[int, int]
) -> CutCheck:
    """Compare ``lambda1`` across a vertex cut with lengths carried over."""
    cut = cut_at_vertex(g, at, keep_edge)
    before = lambda1(g, l)
    after = lambda1(cut.graph, cut.transport_lengths(l))
    return CutCheck(before, after, cut)


@dataclass(frozen=True)
class CutEvidence:
    lambda_before: float
    lambda_after: float
    ok: bool


@dataclass(frozen=True)
class ContractEvidence:
    t_points: tuple[float, ...]
    max_norm_devs: tuple[float, ...]
    decreasing: bool
    ok: bool


@dataclass(frozen=True)
class SurgeryStep:
    """One reduction move: ``cut`` keeps ``kept_edge`` on ``vertex`` and
    re-routes the rest to a clone; ``contract`` removes the degree-one
    ``vertex``.  Labels refer to the graph state at the time of the step."""

    kind: str  # "cut" | "contract"
    vertex: int
    kept_edge: Edge | None
    evidence: CutEvidence | ContractEvidence | None


@dataclass(frozen=True)
class ReductionTrace:
    """Ordered record of cut/contract steps from a graph to its surviving
    cycle, with per-step eigenvalue evidence.

    ``cycle`` is the shortest cycle chosen at the start (in the initial
    labeling); ``final`` is that cycle as a standalone graph.  Replaying
    ``steps`` from ``initial`` reproduces ``final``.
    """

    initial: Graph
    steps: tuple[SurgeryStep, ...]
    final: Graph
    cycle: tuple[int, ...]
    seed: int


def replay_trace(trace: ReductionTrace) -> Graph:
    """Re-apply the recorded steps structurally; returns the end graph."""
    g = trace.initial
    l = uniform_lengths(g)
    for step in trace.steps:
        if step.kind == "cut":
            cut = cut_at_vertex(g, step.vertex, step.kept_edge)
            l = cut.transport_lengths(l)
            g = cut.graph
        elif step.kind == "contract":
            g, l, _ = contract_pendant(g, l, step.vertex)
        else:
            raise ValueError(f"unknown step kind {step.kind!r}")
    return g


def reduce_to_cycle(
    g: Graph,
    seed: int = 0,
    evidence_t_points: Sequence[float] = (1e-2, 1e-3, 1e-4),
) -> ReductionTrace:
    """Collapse a connected cyclic graph onto a shortest cycle.

    Repeatedly picks a vertex of maximum distance from the chosen cycle
    (lowest label on ties).  Degree-one vertices are contracted; higher
    degree vertices are first cut (keeping the lowest-labeled edge toward
    the cycle that preserves connectivity) and then contracted.  Cut steps
    carry a monotonicity check under seeded random lengths; contract steps
    carry a pendant-convergence check at ``evidence_t_points``.
    """
    if not g.is_connected():
        raise GraphError("reduction requires a connected graph")
    cycle = find_cycle(g)
    if cycle is None:
        raise GraphError("graph is a tree: nothing to reduce to")
    rng = np.random.default_rng(seed)
    cycle_set = set(cycle)
    current = g
    steps: list[SurgeryStep] = []
    guard = 2 * g.edge_count + g.n + 5

    def contract_with_evidence(graph: Graph, pendant: int) -> Graph:
        nonlocal cycle_set
        attach_at = graph.neighbors(pendant)[0]
        l_ev = random_lengths(rng, graph)
        g2, _, relabel = contract_pendant(graph, l_ev, pendant)
        l2_ev = random_lengths(rng, g2)
        report = eigen_convergence_check(
            g2, l2_ev, relabel[attach_at], evidence_t_points
        )
        devs = tuple(r.max_norm_dev for r in report.rows)
        decreasing = all(b <= 4.0 * a for a, b in zip(devs, devs[1:]))
        steps.append(
            SurgeryStep(
                kind="contract",
                vertex=pendant,
                kept_edge=None,
                evidence=ContractEvidence(
                    t_points=tuple(r.t for r in report.rows),
                    max_norm_devs=devs,
                    decreasing=decreasing,
                    ok=decreasing and not report.skipped,
                ),
            )
        )
        cycle_set = {relabel[c] for c in cycle_set}
        return g2

    while not current.is_cycle():
        if len(steps) > guard:
            raise RuntimeError("reduction failed to terminate within its step bound")
        dist = distance_to_cycle(current, sorted(cycle_set))
        maxd = max(dist.values())
        assert maxd >= 1, "non-cycle graph with every vertex on the chosen cycle"
        u = min(v for v, d in dist.items() if d == maxd)
        if current.degree(u) == 1:
            current = contract_with_evidence(current, u)
            continue
        toward = sorted(
            canonical_edge(u, v) for v in current.neighbors(u) if dist[v] == dist[u] - 1
        )
        cut_check = None
        kept = None
        for e1 in toward:
            try:
                l_ev = random_lengths(rng, current)
                cut_check = cut_monotonicity_check(current, l_ev, u, e1)
                kept = e1
                break
            except GraphError:
                continue
        if cut_check is None:
            raise GraphError(
                f"no valid cut at vertex {u}: every candidate edge disconnects the graph"
            )
        steps.append(
            SurgeryStep(
                kind="cut",
                vertex=u,
                kept_edge=kept,
                evidence=CutEvidence(cut_check.before, cut_check.after, cut_check.holds),
            )
        )
        current = cut_check.cut.graph
        current = contract_with_evidence(current, u)

    assert current.n == len(cycle)
    return ReductionTrace(
        initial=g,
        steps=tuple(steps),
        final=current,
        cycle=cycle,
        seed=seed,
    )
