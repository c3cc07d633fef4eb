"""Ascent on the scale-invariant first-eigenvalue objective.

The objective is ``F(l) = lambda1(g, l) * (total m0)^2``, optimized over
per-edge log-lengths so positivity is automatic and the scale normalization
needs no constraint handling.  On graphs containing a cycle the supremum is
infinite; the optimizer detects the runaway (objective cap or collapsing
length ratio) and reports ``divergence_suspected``.  A ``converged`` verdict
only means the ascent stalled; it is not a claim that a maximizer exists.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph, GraphError, LengthFunction, fujiwara_weights, normalize_lengths
from .spectral import (
    MULTIPLICITY_GAP_TOL,
    Lambda1Info,
    lambda1_info,
)

__all__ = [
    "lambda1_gradient",
    "OptimizerConfig",
    "IterationRecord",
    "OptimizationReport",
    "maximize_lambda1",
]


def _gradient_from_info(g: Graph, l: LengthFunction, info: Lambda1Info) -> np.ndarray:
    """Per-edge derivative of lambda1 at a simple eigenvalue.

    With the eigenfunction ``phi`` normalized to ``sum m0 phi^2 = 1``:
    ``d lambda1 / d l_e = -(phi_u - phi_v)^2 / l_e^2
    - lambda1 (phi_u^2 + phi_v^2)``.
    """
    w = fujiwara_weights(g, l)
    x = info.spectrum.eigenvectors[:, 1]
    phi = x / np.sqrt(np.asarray(w.m0))
    lam = info.value
    grad = np.empty(g.edge_count)
    for k, (u, v) in enumerate(g.edges):
        le = l.of(u, v)
        diff = phi[u - 1] - phi[v - 1]
        grad[k] = -(diff * diff) / (le * le) - lam * (
            phi[u - 1] ** 2 + phi[v - 1] ** 2
        )
    return grad


def lambda1_gradient(
    g: Graph, l: LengthFunction, gap_tol: float = MULTIPLICITY_GAP_TOL
) -> np.ndarray | None:
    """Gradient of lambda1 with respect to edge lengths (order of
    ``g.edges``), or ``None`` when lambda1 is degenerate.

    Degeneracy means the relative gap to the next eigenvalue is below
    ``gap_tol``; callers switch to derivative-free stepping.
    """
    info = lambda1_info(g, l)
    gap = info.spectrum.eigenvalues[2] - info.value if g.n > 2 else np.inf
    if gap <= gap_tol * abs(info.value):
        return None
    return _gradient_from_info(g, l, info)


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for :func:`maximize_lambda1`.

    ``budget`` counts iterations per start (gradient steps and simplex
    iterations alike).  ``cap`` and ``ratio_floor`` are the divergence
    detectors: objective above ``cap``, or min/max edge length below
    ``ratio_floor`` while the objective still climbs.
    """

    budget: int = 200
    cap: float = 1e8
    starts: int = 8
    seed: int = 20260801
    ratio_floor: float = 1e-10
    gap_tol: float = MULTIPLICITY_GAP_TOL
    grad_tol: float = 1e-9
    initial_step: float = 0.5
    step_growth: float = 2.0
    step_shrink: float = 0.5
    max_step: float = 64.0
    max_backtracks: int = 40
    simplex_iters: int = 20


@dataclass(frozen=True)
class IterationRecord:
    """One accepted iterate: the lengths, the objective, and how the step
    was taken (gradient norm, or simplex diameter in degenerate stretches)."""

    lengths: LengthFunction
    objective: float
    step_size: float
    grad_norm: float | None
    simplex_diameter: float | None
    degenerate: bool


@dataclass(frozen=True)
class OptimizationReport:
    """Trace of the best start: accepted iterates are non-decreasing in the
    objective; ``best`` is normalized for output."""

    iterations: tuple[IterationRecord, ...]
    verdict: str  # converged | divergence_suspected | budget_exhausted
    best: LengthFunction
    best_value: float
    start_index: int
    start_values: tuple[float, ...]


class _Run:
    """Single-start ascent state over log-lengths."""

    def __init__(self, g: Graph, config: OptimizerConfig, s0: np.ndarray):
        self.g = g
        self.cfg = config
        self.s = np.array(s0, dtype=float)
        self.records: list[IterationRecord] = []
        self.obj, self.info = self._evaluate(self.s)
        self.step = config.initial_step
        self.verdict: str | None = None
        self._record(grad_norm=None, simplex_diameter=None, step_size=0.0)

    def _evaluate(self, s: np.ndarray) -> tuple[float, Lambda1Info]:
        l = self._lengths(s)
        info = lambda1_info(self.g, l)
        total = fujiwara_weights(self.g, l).total_m0
        return info.value * total * total, info

    def _lengths(self, s: np.ndarray) -> LengthFunction:
        return LengthFunction({e: float(v) for e, v in zip(self.g.edges, np.exp(s))})

    def _degenerate(self) -> bool:
        w = self.info.spectrum.eigenvalues
        if self.g.n <= 2:
            return False
        return bool(w[2] - w[1] <= self.cfg.gap_tol * abs(w[1]))

    def _record(self, grad_norm, simplex_diameter, step_size):
        self.records.append(
            IterationRecord(
                lengths=self._lengths(self.s),
                objective=self.obj,
                step_size=step_size,
                grad_norm=grad_norm,
                simplex_diameter=simplex_diameter,
                degenerate=self._degenerate(),
            )
        )

    def _divergence_hit(self) -> bool:
        if self.obj > self.cfg.cap:
            return True
        l = np.exp(self.s)
        return float(l.min() / l.max()) < self.cfg.ratio_floor

    def _objective_gradient(self) -> np.ndarray | None:
        """Gradient of the scale-invariant objective in log-lengths."""
        l = self._lengths(self.s)
        if self._degenerate():
            return None
        grad_l = _gradient_from_info(self.g, l, self.info)
        total = fujiwara_weights(self.g, l).total_m0
        lam = self.info.value
        return np.exp(self.s) * (total * total * grad_l + 4.0 * total * lam)

    def _gradient_iteration(self, grad_s: np.ndarray) -> bool:
        """One backtracking ascent step; returns False when the run is done."""
        gnorm = float(np.linalg.norm(grad_s))
        if gnorm <= self.cfg.grad_tol * max(self.obj, 1.0):
            self.verdict = "converged"
            return False
        direction = grad_s / gnorm
        trial = self.step
        for _ in range(self.cfg.max_backtracks):
            s_try = self.s + trial * direction
            obj_try, info_try = self._evaluate(s_try)
            if obj_try > self.obj:
                self.s = s_try
                self.obj, self.info = obj_try, info_try
                self.step = min(trial * self.cfg.step_growth, self.cfg.max_step)
                self._record(grad_norm=gnorm, simplex_diameter=None, step_size=trial)
                if self._divergence_hit():
                    self.verdict = "divergence_suspected"
                    return False
                return True
            trial *= self.cfg.step_shrink
        self.verdict = "converged"  # no improvement along the gradient
        return False

    def _simplex_phase(self, budget_left: int) -> int:
        """Nelder-Mead over log-lengths while lambda1 is degenerate.

        Returns the number of iterations consumed (at most
        ``cfg.simplex_iters`` and ``budget_left``).
        """
        m = len(self.s)
        delta = max(self.step, 0.05)
        pts = [self.s.copy()] + [self.s + delta * np.eye(m)[i] for i in range(m)]
        vals = [self._evaluate(p)[0] for p in pts]
        used = 0
        limit = min(self.cfg.simplex_iters, budget_left)
        while used < limit:
            used += 1
            order = np.argsort(vals)[::-1]  # descending: maximize
            pts = [pts[i] for i in order]
            vals = [vals[i] for i in order]
            centroid = np.mean(pts[:-1], axis=0)
            worst = pts[-1]
            refl = centroid + (centroid - worst)
            f_refl = self._evaluate(refl)[0]
            if f_refl > vals[0]:
                expd = centroid + 2.0 * (centroid - worst)
                f_expd = self._evaluate(expd)[0]
                if f_expd > f_refl:
                    pts[-1], vals[-1] = expd, f_expd
                else:
                    pts[-1], vals[-1] = refl, f_refl
            elif f_refl > vals[-2]:
                pts[-1], vals[-1] = refl, f_refl
            else:
                contr = centroid + 0.5 * (worst - centroid)
                f_contr = self._evaluate(contr)[0]
                if f_contr > vals[-1]:
                    pts[-1], vals[-1] = contr, f_contr
                else:
                    pts = [pts[0]] + [pts[0] + 0.5 * (p - pts[0]) for p in pts[1:]]
                    vals = [vals[0]] + [self._evaluate(p)[0] for p in pts[1:]]
        best = int(np.argmax(vals))
        if vals[best] > self.obj:
            diam = max(
                float(np.linalg.norm(p - q)) for p in pts for q in pts if p is not q
            )
            self.s = pts[best].copy()
            self.obj, self.info = self._evaluate(self.s)
            self._record(grad_norm=None, simplex_diameter=diam, step_size=delta)
            if self._divergence_hit():
                self.verdict = "divergence_suspected"
        return max(used, 1)

    def run(self) -> None:
        it = 0
        while it < self.cfg.budget and self.verdict is None:
            grad_s = self._objective_gradient()
            if grad_s is None:
                it += self._simplex_phase(self.cfg.budget - it)
                continue
            it += 1
            if not self._gradient_iteration(grad_s):
                break
        if self.verdict is None:
            self.verdict = "budget_exhausted"


def maximize_lambda1(g: Graph, config: OptimizerConfig | None = None) -> OptimizationReport:
    """Multi-start ascent on the scale-invariant objective.

    Starts are drawn log-uniformly in ``[0.1, 10]`` per edge from the
    configured seed; the best run (largest final objective) is reported with
    its iterate trail and verdict.  The reported best length function is
    normalized so total ``m0`` equals 1.
    """
    if not g.is_connected():
        raise GraphError("optimization requires a connected graph")
    if g.n < 2:
        raise GraphError("optimization needs at least 2 vertices")
    cfg = config or OptimizerConfig()
    rng = np.random.default_rng(cfg.seed)
    runs: list[_Run] = []
    for _ in range(max(cfg.starts, 1)):
        s0 = rng.uniform(np.log(0.1), np.log(10.0), size=g.edge_count)
        run = _Run(g, cfg, s0)
        run.run()
        runs.append(run)
    best_idx = max(range(len(runs)), key=lambda i: runs[i].obj)
    best = runs[best_idx]
    return OptimizationReport(
        iterations=tuple(best.records),
        verdict=best.verdict or "budget_exhausted",
        best=normalize_lengths(best.records[-1].lengths),
        best_value=best.obj,
        start_index=best_idx,
        start_values=tuple(r.obj for r in runs),
    )
