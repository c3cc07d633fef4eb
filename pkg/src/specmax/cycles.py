"""Divergence experiments on cycle graphs.

Centerpiece is the one-parameter length family on the cycle ``1..n`` that
keeps edge ``(n-1, n)`` at length 1 and shrinks every other edge to ``t``.
As ``t`` decreases the first nonzero eigenvalue grows like ``2/((n-1) t)``
while the rest of the spectrum grows like ``1/t^2``; :func:`sweep_asymptotics`
measures both rates.  The reflection symmetry of the family splits the
Laplacian into two blocks (:func:`symmetry_split`), for which closed-form
matrices and test vectors are available at even ``n``
(:func:`explicit_pm_blocks`, :func:`proof_vectors`,
:func:`coefficient_matrices`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from ._kernels import JacobiConvergenceError
from .graphs import (
    Graph,
    GraphError,
    LengthFunction,
    canonical_edge,
    cycle_graph,
    fujiwara_weights,
)
from .spectral import SymMatrix, assemble_laplacian, symmetric_eigen

__all__ = [
    "cycle_lt",
    "involution",
    "SymmetrySplit",
    "symmetry_split",
    "involution_matrix",
    "explicit_pm_blocks",
    "proof_vectors",
    "coefficient_matrices",
    "SweepRecord",
    "SweepReport",
    "sweep_asymptotics",
    "LoglogFit",
    "fit_loglog_slope",
    "default_t_grid",
]


def cycle_lt(n: int, t: float) -> LengthFunction:
    """Length family on ``cycle_graph(n)``: every edge ``t`` except
    ``(n-1, n)`` which stays at length 1."""
    if not t > 0.0:
        raise GraphError(f"family parameter t must be positive, got {t}")
    g = cycle_graph(n)
    special = (n - 1, n)
    return LengthFunction({e: (1.0 if e == special else float(t)) for e in g.edges})


def involution(n: int) -> tuple[int, ...]:
    """Reflection of the cycle ``1..n`` fixing the long edge.

    Maps ``i -> n-1-i`` for ``i <= n-2`` and swaps ``n-1 <-> n``.  Returned
    as a tuple ``perm`` with ``perm[i-1]`` the image of ``i``.
    """
    if n < 3:
        raise GraphError(f"cycle involution needs n >= 3, got {n}")
    perm = [0] * n
    for i in range(1, n - 1):
        perm[i - 1] = n - 1 - i
    perm[n - 2] = n
    perm[n - 1] = n - 1
    return tuple(perm)


@dataclass(frozen=True)
class SymmetrySplit:
    """Block decomposition of a Laplacian under a length-preserving
    involutive automorphism.

    ``basis_plus``/``basis_minus`` hold orthonormal columns (in the
    ``sqrt(m0)``-scaled coordinates) spanning the symmetric and
    antisymmetric subspaces; the blocks are the Laplacian restricted to
    each.  The union of the block spectra is the full spectrum.
    """

    involution: tuple[int, ...]
    plus_block: SymMatrix
    minus_block: SymMatrix
    basis_plus: np.ndarray
    basis_minus: np.ndarray


def _check_involution(g: Graph, l: LengthFunction, perm: Sequence[int]) -> None:
    n = g.n
    if len(perm) != n or sorted(perm) != list(range(1, n + 1)):
        raise GraphError("involution must be a permutation of 1..n")
    for i in range(1, n + 1):
        if perm[perm[i - 1] - 1] != i:
            raise GraphError("permutation is not an involution")
    for (u, v) in g.edges:
        img = canonical_edge(perm[u - 1], perm[v - 1])
        if img not in set(g.edges):
            raise GraphError(f"permutation is not a graph automorphism: edge {(u, v)} maps off the graph")
        lu, li = l.of(u, v), l.of(*img)
        if abs(lu - li) > 1e-12 * max(abs(lu), abs(li)):
            raise GraphError(f"permutation does not preserve lengths on edge {(u, v)}")


def symmetry_split(g: Graph, l: LengthFunction, perm: Sequence[int]) -> SymmetrySplit:
    """Split the Laplacian of ``(g, l)`` along an involutive automorphism.

    Orbit pairs ``{i, perm(i)}`` (ordered by smaller element) contribute
    ``(e_i +- e_{perm(i)})/sqrt(2)``; fixed points contribute to the plus
    side only.  The involution is verified and rejected if it fails to be a
    length-preserving automorphism.
    """
    _check_involution(g, l, perm)
    n = g.n
    seen: set[int] = set()
    orbits: list[tuple[int, ...]] = []
    for i in range(1, n + 1):
        if i in seen:
            continue
        j = perm[i - 1]
        seen.update((i, j))
        orbits.append((i,) if i == j else (i, j))
    orbits.sort(key=lambda o: o[0])
    cols_p, cols_m = [], []
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for o in orbits:
        vec = np.zeros(n)
        if len(o) == 1:
            vec[o[0] - 1] = 1.0
            cols_p.append(vec)
        else:
            i, j = o
            vp = np.zeros(n)
            vp[i - 1] = inv_sqrt2
            vp[j - 1] = inv_sqrt2
            vm = np.zeros(n)
            vm[i - 1] = inv_sqrt2
            vm[j - 1] = -inv_sqrt2
            cols_p.append(vp)
            cols_m.append(vm)
    basis_p = np.column_stack(cols_p)
    basis_m = np.column_stack(cols_m) if cols_m else np.zeros((n, 0))
    lap = assemble_laplacian(g, l).entries
    bp = basis_p.T @ lap @ basis_p
    bm = basis_m.T @ lap @ basis_m
    return SymmetrySplit(
        involution=tuple(perm),
        plus_block=SymMatrix((bp + bp.T) / 2.0),
        minus_block=SymMatrix((bm + bm.T) / 2.0),
        basis_plus=basis_p,
        basis_minus=basis_m,
    )


def involution_matrix(g: Graph, l: LengthFunction, perm: Sequence[int]) -> np.ndarray:
    """Matrix of the pullback ``phi -> phi o perm`` in the ``sqrt(m0)``-scaled
    coordinates; commutes with the Laplacian when ``perm`` preserves ``(g, l)``."""
    m0 = np.asarray(fujiwara_weights(g, l).m0)
    n = g.n
    p = np.zeros((n, n))
    for u in range(1, n + 1):
        p[u - 1, perm[u - 1] - 1] = 1.0
    d = np.sqrt(m0)
    return d[:, None] * p / d[None, :]


def explicit_pm_blocks(n: int, t: float) -> tuple[SymMatrix, SymMatrix]:
    """Closed-form symmetric/antisymmetric blocks of the cycle family at
    even ``n``: tridiagonal ``1/t^2`` core with ``-1/(2 t^2)`` couplings, a
    modified entry ``1/t^2 -+ 1/(2 t^2)``, corner coupling
    ``-+ 1/(t sqrt(2t) sqrt(1+t))`` and last diagonal ``1/t -+ 1/(1+t)``."""
    if n < 4 or n % 2:
        raise GraphError(f"explicit blocks exist only for even n >= 4, got {n}")
    if not t > 0.0:
        raise GraphError(f"family parameter t must be positive, got {t}")
    m = n // 2
    corner = 1.0 / (t * math.sqrt(2.0 * t) * math.sqrt(1.0 + t))
    blocks = []
    for sign in (-1.0, +1.0):
        mat = np.zeros((m, m))
        for i in range(m - 1):
            mat[i, i] = 1.0 / t**2
        mat[m - 2, m - 2] = 1.0 / t**2 + sign * 1.0 / (2.0 * t**2)
        mat[m - 1, m - 1] = 1.0 / t + sign * 1.0 / (1.0 + t)
        for i in range(m - 2):
            mat[i, i + 1] = mat[i + 1, i] = -1.0 / (2.0 * t**2)
        mat[0, m - 1] = mat[m - 1, 0] = sign * corner
        blocks.append(SymMatrix(mat))
    return blocks[0], blocks[1]


def proof_vectors(n: int, t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Test vectors for the even-``n`` blocks, each of length ``n/2``.

    ``v1`` approximates the lowest eigenvector of the antisymmetric block to
    ``O(t^{3/2})``; ``v0`` spans the kernel of the symmetric block; ``w`` is
    orthogonal to ``v0`` exactly.
    """
    if n < 4 or n % 2:
        raise GraphError(f"proof vectors exist only for even n >= 4, got {n}")
    if not t > 0.0:
        raise GraphError(f"family parameter t must be positive, got {t}")
    m = n // 2
    s2t = math.sqrt(2.0 * t)
    s1t = math.sqrt(1.0 + t)
    v1 = np.array([(n - 1 - 2 * k) * s2t / (n - 1) for k in range(1, m)] + [-1.0])
    v0 = np.array([s2t] * (m - 1) + [s1t])
    w = np.array([2.0 * s1t] * (m - 1) + [-(n - 2) * s2t])
    return v1, v0, w


def coefficient_matrices(n: int) -> tuple[SymMatrix, SymMatrix]:
    """Leading ``1/t^2`` quadratic forms of the two blocks at even ``n``.

    ``a`` (order ``n/2 - 1``) is positive definite; ``b`` (order ``n/2``) is
    positive semidefinite with one-dimensional kernel spanned by
    ``(-1/2, 1, ..., 1)``.
    """
    if n < 4 or n % 2:
        raise GraphError(f"coefficient matrices exist only for even n >= 4, got {n}")
    m = n // 2
    k = m - 1
    a = np.zeros((k, k))
    for i in range(k):
        a[i, i] = 1.0
    a[k - 1, k - 1] = 1.5
    for i in range(k - 1):
        a[i, i + 1] = a[i + 1, i] = -0.5
    b = np.zeros((m, m))
    b[0, 0] = 2.0
    b[0, 1] = b[1, 0] = 1.0
    for i in range(1, m - 1):
        b[i, i] = 1.0
    b[m - 1, m - 1] = 0.5
    for i in range(1, m - 1):
        b[i, i + 1] = b[i + 1, i] = -0.5
    return SymMatrix(a), SymMatrix(b)


class LoglogFit(NamedTuple):
    slope: float
    intercept: float
    max_residual: float


def fit_loglog_slope(points: Iterable[tuple[float, float]]) -> LoglogFit:
    """Least-squares line through ``(log t, log value)``.

    Needs at least 3 points; all coordinates must be positive.
    """
    pts = list(points)
    if len(pts) < 3:
        raise ValueError(f"need at least 3 points for a slope fit, got {len(pts)}")
    for t, val in pts:
        if not (t > 0.0 and val > 0.0):
            raise ValueError(f"log-log fit requires positive data, got ({t}, {val})")
    x = np.log([t for t, _ in pts])
    y = np.log([v for _, v in pts])
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = np.abs(design @ np.array([slope, intercept]) - y)
    return LoglogFit(float(slope), float(intercept), float(resid.max()))


def default_t_grid(hi: float = 1e-1, lo: float = 1e-6, per_decade: int = 10) -> tuple[float, ...]:
    """Descending geometric grid with ``per_decade`` points per decade.

    Double precision stops being trustworthy below ``t ~ 1e-7`` (matrix
    entries grow like ``1/t^2``), hence the default floor of ``1e-6``.
    """
    if not (0.0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got lo={lo} hi={hi}")
    count = int(round(math.log10(hi / lo) * per_decade)) + 1
    return tuple(np.geomspace(hi, lo, count).tolist())


@dataclass(frozen=True)
class SweepRecord:
    """Eigenvalue data of the cycle family at one grid point."""

    t: float
    lam1: float
    lam2: float
    lam_max: float
    lam1_t: float
    total_m0: float


@dataclass(frozen=True)
class SweepReport:
    """Per-``t`` spectra of the cycle family plus fitted divergence rates.

    ``fit_lam1``/``fit_lam2`` are log-log fits after dropping the
    ``dropped_head`` largest ``t`` values (pre-asymptotic regime);
    ``limit_constant`` estimates ``lim lambda1 * t`` from the smallest
    successful ``t``; ``skipped`` lists grid points whose eigensolve failed.
    """

    n: int
    t_grid: tuple[float, ...]
    records: tuple[SweepRecord, ...]
    fit_lam1: LoglogFit
    fit_lam2: LoglogFit
    limit_constant: float
    dropped_head: int
    skipped: tuple[tuple[float, str], ...]


def sweep_asymptotics(n: int, t_grid: Sequence[float] | None = None, dropped_head: int = 2) -> SweepReport:
    """Sweep the cycle family over a descending ``t`` grid.

    For each ``t`` the full spectrum of the Laplacian is computed; grid
    points where the eigensolver fails are recorded in ``skipped`` rather
    than aborting the sweep.
    """
    if n < 3:
        raise GraphError(f"cycle sweeps need n >= 3, got {n}")
    grid = tuple(float(t) for t in (t_grid if t_grid is not None else default_t_grid()))
    if any(not (0.0 < t <= 0.1) for t in grid):
        raise ValueError("t grid must lie in (0, 0.1]")
    if any(later >= earlier for earlier, later in zip(grid, grid[1:])):
        raise ValueError("t grid must be strictly decreasing")
    g = cycle_graph(n)
    records = []
    skipped = []
    for t in grid:
        l = cycle_lt(n, t)
        try:
            res = symmetric_eigen(assemble_laplacian(g, l))
        except JacobiConvergenceError as exc:
            skipped.append((t, str(exc)))
            continue
        w = res.eigenvalues
        records.append(
            SweepRecord(
                t=t,
                lam1=float(w[1]),
                lam2=float(w[2]),
                lam_max=float(w[-1]),
                lam1_t=float(w[1] * t),
                total_m0=fujiwara_weights(g, l).total_m0,
            )
        )
    kept = records[dropped_head:]
    if len(kept) < 3:
        raise ValueError("not enough successful grid points for slope fits")
    fit1 = fit_loglog_slope([(r.t, r.lam1) for r in kept])
    fit2 = fit_loglog_slope([(r.t, r.lam2) for r in kept])
    return SweepReport(
        n=n,
        t_grid=grid,
        records=tuple(records),
        fit_lam1=fit1,
        fit_lam2=fit2,
        limit_constant=records[-1].lam1_t,
        dropped_head=dropped_head,
        skipped=tuple(skipped),
    )
