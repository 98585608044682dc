"""Assembly kernels.

The compiled extension ``_ckernels`` is used when it was built; otherwise
the numpy implementation in ``_pykernels`` is selected.  Setting the
environment variable ``DESCM_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _pykernels

if os.environ.get("DESCM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"
assemble = _impl.assemble

__all__ = ["assemble", "BACKEND"]
