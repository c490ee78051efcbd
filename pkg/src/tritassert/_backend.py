"""Select the kernel implementation at import time.

The compiled extension is preferred; ``TRITASSERT_BACKEND=python`` forces the
numpy fallback (useful for benchmarking and for cross-checking the two).
"""
import os

from . import _fallback

if os.environ.get("TRITASSERT_BACKEND", "").lower() == "python":
    kernels = _fallback
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _fallback

BACKEND = "compiled" if kernels is not _fallback else "python"
