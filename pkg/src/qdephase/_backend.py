"""Kernel backend selection.

Hot loops are written twice: a numba ``@njit`` version and a vectorized
numpy version. Set ``QDEPHASE_NO_NUMBA=1`` to force the numpy path; it is
also used automatically when numba cannot be imported.
"""
import os

_FLAG = "QDEPHASE_NO_NUMBA"


def _env_disabled():
    return os.environ.get(_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


USE_NUMBA = HAVE_NUMBA and not _env_disabled()
BACKEND = "numba" if USE_NUMBA else "numpy"
