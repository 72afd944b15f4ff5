"""Batch numeric core with a compiled extension and a pure-numpy fallback.

The Cython extension is preferred when importable; set HSGROWTH_PURE=1 to
force the fallback.  `BACKEND` reports which one is active.
"""

import os

from . import _pure

if os.environ.get("HSGROWTH_PURE") == "1":
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]

        BACKEND = "native"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

green_potential_batch = _impl.green_potential_batch
maximal_batch = _impl.maximal_batch

__all__ = ["BACKEND", "green_potential_batch", "maximal_batch", "_pure"]
