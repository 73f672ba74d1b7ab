"""Numba switch.

Set ``QUADREP_DISABLE_JIT=1`` to force the pure-numpy kernels, e.g. when
debugging under the interpreter or on platforms without numba wheels.
"""

import os

JIT_REQUESTED = os.environ.get("QUADREP_DISABLE_JIT", "").strip().lower() not in (
    "1",
    "true",
    "yes",
)

try:
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

JIT_ENABLED = JIT_REQUESTED and HAVE_NUMBA

if HAVE_NUMBA:
    njit = _numba_njit
else:  # pragma: no cover

    def njit(func=None, **kwargs):
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper
