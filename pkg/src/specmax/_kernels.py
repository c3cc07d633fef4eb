"""Eigensolver kernel selection.

The compiled extension ``specmax._jacobi`` is preferred; when it is missing
(source tree without a build) the pure-Python twin takes over transparently.
Set ``SPECMAX_PURE_PYTHON=1`` to force the fallback, e.g. for benchmarking.
"""
import os

import numpy as np

__all__ = ["BACKEND", "JacobiConvergenceError", "cyclic_jacobi"]


class JacobiConvergenceError(RuntimeError):
    """Off-diagonal norm failed to reach its target within the sweep cap."""


if os.environ.get("SPECMAX_PURE_PYTHON"):
    from . import _jacobi_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _jacobi as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on build environment
        from . import _jacobi_py as _impl  # type: ignore[no-redef]

        BACKEND = "python"


def cyclic_jacobi(matrix, tol=1e-12, max_sweeps=100, kernel=None):
    """Full symmetric eigendecomposition by cyclic Jacobi rotations.

    Parameters
    ----------
    matrix : (n, n) array_like
        Symmetric real matrix.
    tol : float
        Convergence when the off-diagonal Frobenius norm drops below
        ``tol * ||matrix||_F``.
    max_sweeps : int
        Cap on full (p, q) sweeps; exceeding it raises
        ``JacobiConvergenceError``.
    kernel : callable, optional
        Override the backend kernel (used by tests and benchmarks).

    Returns
    -------
    eigenvalues : (n,) ndarray, ascending
    eigenvectors : (n, n) ndarray, orthonormal columns aligned with
        ``eigenvalues``
    off : float
        Off-diagonal Frobenius norm at exit.
    sweeps : int
        Number of sweeps performed.
    """
    a = np.array(matrix, dtype=np.float64, copy=True, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    v = np.eye(n)
    target = tol * float(np.linalg.norm(a))
    run = kernel if kernel is not None else _impl.jacobi_kernel
    converged, sweeps, off = run(a, v, target, int(max_sweeps))
    if not converged:
        raise JacobiConvergenceError(
            f"off-diagonal norm {off:.3e} above target {target:.3e} "
            f"after {sweeps} sweeps"
        )
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order], off, sweeps
