"""Laplacian assembly and symmetric spectra for length-weighted graphs.

Two equivalent pictures are provided: the operator acting on vertex
functions (:func:`apply_laplacian`) and the symmetric matrix obtained in the
orthonormal basis scaled by ``1/sqrt(m0)`` (:func:`assemble_laplacian`).
Coordinates transform by ``x = sqrt(m0) * phi``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._kernels import JacobiConvergenceError, cyclic_jacobi
from .graphs import Graph, GraphError, LengthFunction, fujiwara_weights

__all__ = [
    "SymMatrix",
    "SpectralResult",
    "Lambda1Info",
    "JacobiConvergenceError",
    "assemble_laplacian",
    "apply_laplacian",
    "symmetric_eigen",
    "lambda1",
    "lambda1_info",
    "lambda1_eigenfunction",
    "rayleigh_quotient",
    "lambda1_normalized",
    "m0_inner",
    "MULTIPLICITY_GAP_TOL",
]

# relative spectral gap below which lambda1 is flagged as degenerate
MULTIPLICITY_GAP_TOL = 1e-8


@dataclass(frozen=True)
class SymMatrix:
    """Dense symmetric real matrix; symmetry is exact by construction."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if not np.array_equal(arr, arr.T):
            raise ValueError("matrix entries are not exactly symmetric")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def norm(self) -> float:
        """Frobenius norm."""
        return float(np.linalg.norm(self.entries))


@dataclass(frozen=True)
class SpectralResult:
    """Ascending eigenvalues with orthonormal eigenvector columns.

    ``residual`` is ``max_k ||M v_k - w_k v_k||_2``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float

    def __post_init__(self):
        for name in ("eigenvalues", "eigenvectors"):
            arr = np.asarray(getattr(self, name), dtype=np.float64).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def assemble_laplacian(g: Graph, l: LengthFunction) -> SymMatrix:
    """The Laplacian matrix ``D^{-1/2} L0 D^{-1/2}`` of ``(g, l)``.

    ``L0`` carries ``sum of m1`` on the diagonal and ``-m1`` on edges;
    ``D = diag(m0)``.  The vector ``sqrt(m0)`` spans the kernel for
    connected graphs.  Raises :class:`GraphError` on disconnected input.
    """
    if not g.is_connected():
        raise GraphError("spectral operations require a connected graph")
    w = fujiwara_weights(g, l)
    mat = np.zeros((g.n, g.n))
    for (u, v), m1 in w.m1.items():
        val = -m1 / np.sqrt(w.m0[u - 1] * w.m0[v - 1])
        mat[u - 1, v - 1] = val
        mat[v - 1, u - 1] = val
        mat[u - 1, u - 1] += m1
        mat[v - 1, v - 1] += m1
    for i in range(g.n):
        mat[i, i] /= w.m0[i]
    return SymMatrix(mat)


def apply_laplacian(g: Graph, l: LengthFunction, phi) -> np.ndarray:
    """Apply the Laplacian to a vertex function.

    ``(out)(u) = sum over neighbors v of (m1(uv)/m0(u)) (phi(u) - phi(v))``.
    """
    phi = np.asarray(phi, dtype=np.float64)
    if phi.shape != (g.n,):
        raise GraphError(f"expected a vertex function of length {g.n}, got shape {phi.shape}")
    w = fujiwara_weights(g, l)
    out = np.zeros(g.n)
    for (u, v), m1 in w.m1.items():
        diff = phi[u - 1] - phi[v - 1]
        out[u - 1] += m1 * diff
        out[v - 1] -= m1 * diff
    return out / np.asarray(w.m0)


def symmetric_eigen(m, tol: float = 1e-12, max_sweeps: int = 100) -> SpectralResult:
    """Full spectrum of a symmetric matrix via cyclic Jacobi rotations.

    Accepts a :class:`SymMatrix` or a plain symmetric ndarray.  Raises
    :class:`JacobiConvergenceError` when the sweep cap is exceeded; callers
    may retry with a larger ``tol``.
    """
    arr = m.entries if isinstance(m, SymMatrix) else np.asarray(m, dtype=np.float64)
    w, v, _off, _sweeps = cyclic_jacobi(arr, tol=tol, max_sweeps=max_sweeps)
    if arr.size:
        resid = float(np.max(np.linalg.norm(arr @ v - v * w[None, :], axis=0)))
    else:
        resid = 0.0
    return SpectralResult(w, v, resid)


def lambda1(g: Graph, l: LengthFunction, tol: float = 1e-12) -> float:
    """First nonzero eigenvalue: second-smallest of the Laplacian spectrum."""
    return lambda1_info(g, l, tol=tol).value


@dataclass(frozen=True)
class Lambda1Info:
    """First nonzero eigenvalue with its degeneracy flag.

    ``multiplicity`` counts eigenvalues within a relative gap of
    ``MULTIPLICITY_GAP_TOL`` above the first nonzero one (so 1 means simple).
    """

    value: float
    multiplicity: int
    spectrum: SpectralResult

    @property
    def is_simple(self) -> bool:
        return self.multiplicity == 1


def lambda1_info(g: Graph, l: LengthFunction, tol: float = 1e-12) -> Lambda1Info:
    if g.n < 2:
        raise GraphError("lambda1 needs at least 2 vertices")
    res = symmetric_eigen(assemble_laplacian(g, l), tol=tol)
    w = res.eigenvalues
    value = float(w[1])
    mult = 1
    for k in range(2, len(w)):
        if w[k] - value <= MULTIPLICITY_GAP_TOL * abs(value):
            mult += 1
        else:
            break
    return Lambda1Info(value, mult, res)


def lambda1_eigenfunction(g: Graph, l: LengthFunction, tol: float = 1e-12) -> np.ndarray:
    """An eigenfunction of the first nonzero eigenvalue, in the vertex
    picture, normalized so that ``sum m0 phi^2 = 1``."""
    info = lambda1_info(g, l, tol=tol)
    x = info.spectrum.eigenvectors[:, 1]
    m0 = np.asarray(fujiwara_weights(g, l).m0)
    return x / np.sqrt(m0)


def rayleigh_quotient(g: Graph, l: LengthFunction, phi) -> float:
    """``sum m1 (phi(u)-phi(v))^2 / sum m0 phi^2`` over edges/vertices."""
    phi = np.asarray(phi, dtype=np.float64)
    if phi.shape != (g.n,):
        raise GraphError(f"expected a vertex function of length {g.n}, got shape {phi.shape}")
    if not np.any(phi):
        raise GraphError("Rayleigh quotient of the zero function is undefined")
    w = fujiwara_weights(g, l)
    num = sum(m1 * (phi[u - 1] - phi[v - 1]) ** 2 for (u, v), m1 in w.m1.items())
    den = float(np.asarray(w.m0) @ (phi * phi))
    return num / den


def m0_inner(g: Graph, l: LengthFunction, phi1, phi2) -> float:
    """Weighted inner product ``sum m0 phi1 phi2`` on vertex functions."""
    m0 = np.asarray(fujiwara_weights(g, l).m0)
    return float(np.sum(m0 * np.asarray(phi1) * np.asarray(phi2)))


def lambda1_normalized(g: Graph, l: LengthFunction, tol: float = 1e-12) -> float:
    """Scale-invariant objective ``lambda1 * (total m0)^2``.

    Equals ``lambda1(g, normalize_lengths(l))`` up to rounding.
    """
    total = fujiwara_weights(g, l).total_m0
    return lambda1(g, l, tol=tol) * total * total
