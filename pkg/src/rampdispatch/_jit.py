"""Optional numba acceleration.

Set ``RAMPDISPATCH_NO_JIT=1`` to run every kernel as plain Python/numpy.
The flag is read once at import time.
"""

import os

_FLAG = os.environ.get("RAMPDISPATCH_NO_JIT", "").strip().lower()
JIT_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if JIT_DISABLED:
        raise ImportError
    import numba
    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False

JIT_ENABLED = HAVE_NUMBA and not JIT_DISABLED


def jit(func):
    """``numba.njit(cache=True)`` when acceleration is on, identity otherwise."""
    if JIT_ENABLED:
        return numba.njit(cache=True)(func)
    return func


def pick(jitted, fallback):
    """Choose the loop kernel when compiled, the vectorised one when not."""
    return jitted if JIT_ENABLED else fallback
