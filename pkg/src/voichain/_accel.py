"""Optional numba acceleration.

Set ``VOICHAIN_DISABLE_NUMBA=1`` in the environment (before import) to run the
pure-numpy kernels instead of the compiled ones.
"""
import os

try:
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

_FLAG = os.environ.get("VOICHAIN_DISABLE_NUMBA", "").strip().lower()
USE_NUMBA = HAVE_NUMBA and _FLAG not in ("1", "true", "yes", "on")


def optional_njit(*args, **kwargs):
    """``numba.njit`` when available, identity otherwise."""

    def decorator(func):
        if HAVE_NUMBA:
            return _njit(*args, **kwargs)(func)
        return func

    return decorator


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
