"""Kernel selection: compiled extension if available, pure Python otherwise.

Set ``COXTODA_PURE=1`` to force the pure backend (used by the benchmark and
by CI environments without a compiler).
"""

import os

if os.environ.get("COXTODA_PURE") == "1":
    from . import pure as kernels
else:
    try:
        from . import _fast as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import pure as kernels

BACKEND = kernels.BACKEND
mat_mul = kernels.mat_mul
mat_det = kernels.mat_det
mat_inv = kernels.mat_inv

__all__ = ["BACKEND", "mat_mul", "mat_det", "mat_inv", "kernels"]
