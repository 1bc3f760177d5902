"""Backend switch for the hot kernels.

Set ``SCHWARZKIT_DISABLE_NUMBA=1`` to force the pure-numpy path.  The
flag is read once, at import time.
"""

from __future__ import annotations

import os

_FALSY = {"", "0", "false", "no", "off"}

DISABLED_BY_ENV = os.environ.get("SCHWARZKIT_DISABLE_NUMBA", "").strip().lower() not in _FALSY

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

NUMBA_AVAILABLE = _numba is not None
NUMBA_ENABLED = NUMBA_AVAILABLE and not DISABLED_BY_ENV


def njit(func):
    """Compile ``func`` with numba when available, regardless of the env flag.

    Used for the compiled variants that the benchmark times against the
    numpy fallback.
    """
    if not NUMBA_AVAILABLE:
        return func
    return _numba.njit(cache=True)(func)


def jit(func):
    """Compile ``func`` only when the numba backend is enabled."""
    if NUMBA_ENABLED:
        return _numba.njit(cache=True)(func)
    return func


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"
