"""JIT switch.

Set ``SUMSETLAB_DISABLE_JIT=1`` to run every kernel through its pure-numpy
path instead of numba. The flag is read once, at import time.
"""

import os

JIT_ENABLED = os.environ.get("SUMSETLAB_DISABLE_JIT", "0").strip().lower() not in (
    "1",
    "true",
    "yes",
    "on",
)

try:
    from numba import njit as _numba_njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False
    JIT_ENABLED = False


def njit(func=None, **kwargs):
    """``numba.njit`` with nogil/cache defaults; identity when numba is missing."""
    if not HAS_NUMBA:
        if func is not None:
            return func
        return lambda f: f
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    if func is not None:
        return _numba_njit(**kwargs)(func)
    return _numba_njit(**kwargs)
