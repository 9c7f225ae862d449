"""Backend dispatch for the numerical hot loops.

Three kernels back the mixture fit and k-means init: squared Mahalanobis
distances against a Cholesky factor, the weighted scatter matrix of the
M-step, and pairwise squared distances. Each exists twice: a numba-compiled
version and a pure NumPy/SciPy version with identical semantics.

Selection, checked once at import:

* ``CREDITMIX_BACKEND=numba``  require numba, fail loudly if missing
* ``CREDITMIX_BACKEND=numpy``  force the pure NumPy path
* unset or ``auto``            numba when importable, else NumPy

Per-backend output is bit-deterministic; across backends agreement is
~1e-10 relative (different summation order). `use_backend` rebinds at
runtime for tests and benchmarks.
"""

import os

from . import _kernels_numpy

try:
    from . import _kernels_numba
    HAS_NUMBA = True
except ImportError:
    _kernels_numba = None
    HAS_NUMBA = False

BACKENDS = ("numba", "numpy")


def _resolve(choice):
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not HAS_NUMBA:
            raise ImportError(
                "CREDITMIX_BACKEND=numba but numba is not importable")
        return "numba"
    if choice in ("", "auto"):
        return "numba" if HAS_NUMBA else "numpy"
    raise ValueError(
        f"unknown backend {choice!r}, expected one of auto, numba, numpy")


def _module(name):
    return _kernels_numba if name == "numba" else _kernels_numpy


active_backend = _resolve(os.environ.get("CREDITMIX_BACKEND", "auto"))

maha_sq = _module(active_backend).maha_sq
weighted_scatter = _module(active_backend).weighted_scatter
pairwise_sq_dists = _module(active_backend).pairwise_sq_dists


def use_backend(name):
    """Switch the active kernel backend; returns the previous name."""
    global active_backend, maha_sq, weighted_scatter, pairwise_sq_dists
    resolved = _resolve(name)
    previous = active_backend
    mod = _module(resolved)
    active_backend = resolved
    maha_sq = mod.maha_sq
    weighted_scatter = mod.weighted_scatter
    pairwise_sq_dists = mod.pairwise_sq_dists
    return previous
