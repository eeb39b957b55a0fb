"""Numba switch for the hot kernels.

Set ``NILGEO_DISABLE_NUMBA=1`` to force the pure-numpy path, e.g. for
debugging or on platforms without numba. When numba is unavailable the
fallback is selected automatically.
"""

import logging
import os

logger = logging.getLogger(__name__)

_FLAG = "NILGEO_DISABLE_NUMBA"
DISABLED = os.environ.get(_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if DISABLED:
        raise ImportError(f"{_FLAG} is set")
    import numba

    njit = numba.njit
    HAVE_NUMBA = True
except ImportError as exc:
    logger.debug("numba kernels disabled: %s", exc)
    HAVE_NUMBA = False

    def njit(pyfunc=None, **kwargs):
        """Identity decorator standing in for numba.njit."""
        def wrap(func):
            return func
        return wrap if pyfunc is None else wrap(pyfunc)


BACKENDS = ("numba", "numpy")


def resolve_backend(backend=None):
    """Return the kernel backend to use ("numba" or "numpy")."""
    if backend is None:
        return "numba" if HAVE_NUMBA else "numpy"
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is disabled or missing")
    return backend
