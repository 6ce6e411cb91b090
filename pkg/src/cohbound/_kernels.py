"""Backend selection for the hot kernels.

The compiled core is used when importable; set ``COHBOUND_PURE_PYTHON=1`` to
force the pure-Python fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("COHBOUND_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

xoshiro_u64 = _impl.xoshiro_u64
complex_gaussians = _impl.complex_gaussians
jacobi_eigenvalues = _impl.jacobi_eigenvalues

# both modules, for cross-checks and benchmarks
BACKENDS = {"python": _pykernels}
try:
    from . import _ckernels

    BACKENDS["cython"] = _ckernels
except ImportError:
    pass
