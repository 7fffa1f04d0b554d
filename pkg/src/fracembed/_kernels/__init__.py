"""Hot-loop kernels: compiled extension when available, numpy fallback otherwise.

Set FRACEMBED_PURE_PYTHON=1 to force the fallback (used by the backend
benchmark and the cross-backend tests).
"""

import os

from . import _fallback

if os.environ.get("FRACEMBED_PURE_PYTHON"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _native as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

powered_row_sums = _impl.powered_row_sums
prepare_neighbor_lists = _impl.prepare_neighbor_lists
predict_with_folds = _impl.predict_with_folds
