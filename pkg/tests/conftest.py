import numpy as np
import pytest

from specmax import _jacobi_py
from specmax._kernels import _impl


def available_kernels():
    kernels = {"python": _jacobi_py.jacobi_kernel}
    if _impl is not _jacobi_py:
        kernels["compiled"] = _impl.jacobi_kernel
    return kernels


@pytest.fixture(params=sorted(available_kernels()))
def jacobi_kernel(request):
    return available_kernels()[request.param]


def random_symmetric(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    m = rng.normal(size=(n, n)) * scale
    return (m + m.T) / 2.0
