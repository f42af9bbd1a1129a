"""Optional numba acceleration.

Set ``CHGDET_NUMBA=0`` to force the pure-numpy code paths, e.g. when numba
is unavailable or to cross-check results between backends.
"""

import os

try:
    import numba
except ModuleNotFoundError:  # pragma: no cover - numba is a declared dependency
    numba = None

__all__ = ["USE_NUMBA", "numba_jit"]

USE_NUMBA = numba is not None and os.environ.get("CHGDET_NUMBA", "1") not in ("0", "false", "no")


def numba_jit(f=None, **setting):
    """``numba.njit`` when acceleration is enabled, identity otherwise."""
    setting.setdefault("cache", True)
    if not USE_NUMBA:
        return f if f is not None else (lambda g: g)
    if f is None:
        return lambda g: numba.njit(g, **setting)
    return numba.njit(f, **setting)


def force_njit(f, **setting):
    """Compile ``f`` regardless of the env flag (benchmarks only)."""
    if numba is None:
        raise RuntimeError("numba is not installed")
    setting.setdefault("cache", True)
    return numba.njit(f, **setting)
