"""Pure-Python cyclic-Jacobi rotation kernel.

Fallback twin of the compiled ``specmax._jacobi`` extension; see
``specmax._kernels`` for the import-time selection.  Row/column updates are
vectorized with numpy but follow the same per-element arithmetic as the
compiled kernel.
"""
import math

import numpy as np


def jacobi_kernel(a, v, off_target, max_sweeps):
    """Diagonalize the symmetric matrix ``a`` in place by cyclic Jacobi sweeps.

    Same contract as the compiled twin: rotations accumulate into ``v`` and
    the return value is ``(converged, sweeps, off)``.
    """
    n = a.shape[0]
    idx = np.arange(n)
    iu = np.triu_indices(n, 1)
    sweeps = 0
    while True:
        off = math.sqrt(2.0) * float(np.linalg.norm(a[iu])) if n > 1 else 0.0
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
                if abs(theta) > 1.0e150:
                    tval = 0.5 / theta
                elif theta >= 0.0:
                    tval = 1.0 / (theta + math.sqrt(1.0 + theta * theta))
                else:
                    tval = -1.0 / (math.sqrt(1.0 + theta * theta) - theta)
                c = 1.0 / math.sqrt(1.0 + tval * tval)
                s = tval * c
                mask = (idx != p) & (idx != q)
                aip = a[mask, p]
                aiq = a[mask, q]
                new_p = c * aip - s * aiq
                new_q = s * aip + c * aiq
                a[mask, p] = new_p
                a[p, mask] = new_p
                a[mask, q] = new_q
                a[q, mask] = new_q
                a[p, p] = app - tval * apq
                a[q, q] = aqq + tval * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vip = v[:, p].copy()
                viq = v[:, q].copy()
                v[:, p] = c * vip - s * viq
                v[:, q] = s * vip + c * viq
