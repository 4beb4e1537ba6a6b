"""Backend selection for the mod-p matrix kernels.

The compiled extension is preferred when it imported cleanly; setting
the environment variable QUIVERTILT_PURE to a nonempty value forces the
pure Python fallback (useful for benchmarking and debugging).
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("QUIVERTILT_PURE"):
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "speedups"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

mat_mul = _impl.mat_mul
rref = _impl.rref

__all__ = ["BACKEND", "mat_mul", "rref", "_pure"]
