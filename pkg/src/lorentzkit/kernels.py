"""Hot kernels, compiled when the Cython extension is built.

Set ``LORENTZKIT_PURE_PYTHON=1`` to force the numpy fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("LORENTZKIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

jacobi_residual = _impl.jacobi_residual
nearest_points = _impl.nearest_points

__all__ = ["BACKEND", "jacobi_residual", "nearest_points"]
