"""Backend selection for the hot kernels.

Set ``POINTSSIM_DISABLE_NUMBA=1`` to force the pure-numpy kernels. The flag is
read once at import time. When numba cannot be imported the numpy kernels are
used regardless of the flag.
"""
import os

_FALSE = {"", "0", "false", "no", "off"}

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

DISABLED_BY_ENV = os.environ.get("POINTSSIM_DISABLE_NUMBA", "").strip().lower() not in _FALSE
USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, otherwise a no-op decorator."""
    if HAVE_NUMBA:
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
