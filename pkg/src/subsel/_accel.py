"""Optional numba acceleration.

Kernels are written once as plain Python loops and compiled with ``njit``
when numba is importable and ``SUBSEL_NUMBA`` is not set to ``0``.  Every
kernel module also keeps a vectorised numpy twin; the dispatch table picks
one of the two at import time.
"""

import os

_FLAG = os.environ.get("SUBSEL_NUMBA", "1").strip().lower()

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    _numba = None

NUMBA_AVAILABLE = _numba is not None
USE_NUMBA = NUMBA_AVAILABLE and _FLAG not in ("0", "false", "no", "off")

JIT_OPTIONS = dict(cache=True, nogil=True, fastmath=False, error_model="numpy")


def njit(func):
    """Compile ``func`` with numba if available, else return it untouched."""
    if not NUMBA_AVAILABLE:
        return func
    return _numba.njit(**JIT_OPTIONS)(func)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
