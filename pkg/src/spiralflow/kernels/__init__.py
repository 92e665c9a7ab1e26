"""Hot-loop kernels with backend selection at import.

The compiled Cython extension is preferred; the pure-NumPy fallback is used
when the extension is missing or when ``SPIRALFLOW_KERNELS=numpy`` is set.
Both expose the same three entry points with identical semantics:

    grid_spread(pos, values, grid, table, width, table_scale)
    grid_interp(pos, grid, table, width, table_scale)
    tv1d_prox_batch(y, lam)
"""

import os

from . import _gridding_np

_requested = os.environ.get("SPIRALFLOW_KERNELS", "").strip().lower()
if _requested not in ("", "auto", "cython", "numpy"):
    raise ImportError(f"SPIRALFLOW_KERNELS must be 'cython' or 'numpy', got {_requested!r}")

if _requested == "numpy":
    _impl = _gridding_np
else:
    try:
        from . import _gridding_cy as _impl
    except ImportError:
        if _requested == "cython":
            raise
        _impl = _gridding_np

BACKEND = _impl.BACKEND_NAME
grid_spread = _impl.grid_spread
grid_interp = _impl.grid_interp
tv1d_prox_batch = _impl.tv1d_prox_batch

MAX_KERNEL_WIDTH = 16  # fixed tap-buffer size in the compiled kernels

__all__ = ["BACKEND", "MAX_KERNEL_WIDTH", "grid_spread", "grid_interp", "tv1d_prox_batch"]
