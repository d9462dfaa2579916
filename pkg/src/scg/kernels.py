"""Backend selection for the string kernels.

The compiled extension is used when it imports; setting ``SCG_PURE_PYTHON=1``
forces the pure-Python fallback (the test-suite checks both agree).
"""
import os

from scg import _pykernels

if os.environ.get("SCG_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from scg import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

suffix_array = _impl.suffix_array
lcp_array = _impl.lcp_array
z_array = _impl.z_array
period_runs = _impl.period_runs
window_hashes = _impl.window_hashes

__all__ = ["BACKEND", "suffix_array", "lcp_array", "z_array", "period_runs", "window_hashes"]
