"""Chooses the compiled kernels when they are built, else the Python ones.

Set ``DGDEFORM_PURE=1`` to force the Python versions.
"""
import os

from . import _kernels_py

BACKEND = "python"
if os.environ.get("DGDEFORM_PURE") != "1":
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

rref_modp = _impl.rref_modp
mc_scan = _impl.mc_scan
