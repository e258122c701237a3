"""Kernel backend selection.

The compiled Cython module is preferred when it imported cleanly; the numpy
fallback is bit-compatible.  Set UNICURVE_PURE_KERNELS=1 to force the fallback
(used by the parity tests and the benchmark).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("UNICURVE_PURE_KERNELS"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

IMPLEMENTATION: str = _impl.IMPLEMENTATION
polyval = _impl.polyval
rational_block_sum = _impl.rational_block_sum

__all__ = ["IMPLEMENTATION", "polyval", "rational_block_sum", "pure", "compiled_or_none"]


def pure():
    """The numpy backend (always available)."""
    return _kernels_py


def compiled_or_none():
    try:
        from . import _kernels

        return _kernels
    except ImportError:
        return None
