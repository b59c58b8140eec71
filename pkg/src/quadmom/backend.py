"""Kernel backend selection.

Two interchangeable kernel implementations exist: jit-compiled
(``_kernels_numba``) and pure numpy (``_kernels_numpy``). The compiled pair
is preferred when numba imports cleanly; setting the environment variable
``QUADMOM_DISABLE_NUMBA=1`` before import forces the numpy pair. Individual
calls can also override the choice with ``use_numba=True/False``, which the
benchmark script and the backend-agreement tests rely on.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_numpy
from ._kernels_numpy import CHEBYSHEV, NESTEROV, POWER, SOR

__all__ = [
    "POWER",
    "CHEBYSHEV",
    "SOR",
    "NESTEROV",
    "HAVE_NUMBA",
    "active_backend",
    "closed_table",
    "recurrence_table",
]

_kernels_numba = None
if os.environ.get("QUADMOM_DISABLE_NUMBA", "").strip() not in ("1", "true", "yes"):
    try:
        from . import _kernels_numba  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - exercised only without numba
        _kernels_numba = None

HAVE_NUMBA = _kernels_numba is not None


def active_backend() -> str:
    """Name of the kernel pair used by default: ``"numba"`` or ``"numpy"``."""
    return "numba" if HAVE_NUMBA else "numpy"


def _pick(use_numba):
    if use_numba is None:
        return _kernels_numba if HAVE_NUMBA else _kernels_numpy
    if use_numba:
        if _kernels_numba is None:
            raise RuntimeError(
                "numba backend requested but unavailable "
                "(not installed or QUADMOM_DISABLE_NUMBA is set)"
            )
        return _kernels_numba
    return _kernels_numpy


def closed_table(mus, ks, rho, method, use_numba=None):
    """Closed-form table P_k(mu); see ``_kernels_numpy.closed_table``."""
    mus = np.ascontiguousarray(mus, dtype=np.float64)
    ks = np.ascontiguousarray(ks, dtype=np.int64)
    return _pick(use_numba).closed_table(mus, ks, float(rho), int(method))


def recurrence_table(mus, coef, kmax, method, use_numba=None):
    """Recurrence table P_0..P_kmax; see ``_kernels_numpy.recurrence_table``."""
    mus = np.ascontiguousarray(mus, dtype=np.float64)
    coef = np.ascontiguousarray(coef, dtype=np.float64)
    return _pick(use_numba).recurrence_table(mus, coef, int(kmax), int(method))
