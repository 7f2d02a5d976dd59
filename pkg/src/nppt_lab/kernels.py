"""Kernel backend selection.

The compiled core is used when it imports; ``NPPT_LAB_PURE_PYTHON=1`` forces
the NumPy fallback.  ``BACKEND`` names the active implementation.
"""

import os

from . import _kernels_py

if os.environ.get("NPPT_LAB_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels_c as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"

pinch = _impl.pinch
pinch_mask = _impl.pinch_mask
off_pattern_max = _impl.off_pattern_max
type2_extremes = _impl.type2_extremes
