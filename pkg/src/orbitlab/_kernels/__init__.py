"""Kernel backend selection.

The compiled module is preferred when it imported cleanly; setting
``ORBITLAB_PURE_PYTHON=1`` forces the numpy fallback, which implements the
same contracts (shapes, early-exit semantics, non-finite handling).
"""

import os

from . import _fallback

if os.environ.get("ORBITLAB_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _fallback

BACKEND = _impl.BACKEND
orbit_norms = _impl.orbit_norms
orbit_points = _impl.orbit_points
uncovered_count = _impl.uncovered_count

__all__ = ["BACKEND", "orbit_norms", "orbit_points", "uncovered_count"]
