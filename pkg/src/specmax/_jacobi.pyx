# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled cyclic-Jacobi rotation kernel.

Twin of ``specmax._jacobi_py``; one of the two is picked at import time by
``specmax._kernels``.  Both expose ``jacobi_kernel`` with identical
per-element arithmetic so results agree to rounding error.
"""
from libc.math cimport fabs, sqrt


def jacobi_kernel(double[:, ::1] a, double[:, ::1] v, double off_target, int max_sweeps):
    """Diagonalize the symmetric matrix ``a`` in place by cyclic Jacobi sweeps.

    Rotations accumulate into ``v`` (caller passes the identity), so that on
    exit ``v.T @ a_in @ v`` is diagonal up to ``off_target``.  Returns
    ``(converged, sweeps, off)`` with ``off`` the off-diagonal Frobenius norm
    at exit.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, i
    cdef int sweeps = 0
    cdef double off, apq, app, aqq, theta, tval, c, s, aip, aiq, vip, viq

    while True:
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += 2.0 * a[p, q] * a[p, q]
        off = sqrt(off)
        if off <= off_target:
            return 1, sweeps, off
        if sweeps >= max_sweeps:
            return 0, sweeps, off
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = 0.5 * (aqq - app) / apq
                # huge |theta| would overflow theta*theta; the rotation is tiny
                if fabs(theta) > 1.0e150:
                    tval = 0.5 / theta
                elif theta >= 0.0:
                    tval = 1.0 / (theta + sqrt(1.0 + theta * theta))
                else:
                    tval = -1.0 / (sqrt(1.0 + theta * theta) - theta)
                c = 1.0 / sqrt(1.0 + tval * tval)
                s = tval * c
                a[p, p] = app - tval * apq
                a[q, q] = aqq + tval * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(n):
                    if i == p or i == q:
                        continue
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - s * aiq
                    a[p, i] = a[i, p]
                    a[i, q] = s * aip + c * aiq
                    a[q, i] = a[i, q]
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * viq
                    v[i, q] = s * vip + c * viq
