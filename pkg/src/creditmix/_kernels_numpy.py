"""Pure NumPy/SciPy reference implementations of the hot numerical loops.

These are the fallback path when numba is unavailable or disabled via
CREDITMIX_BACKEND=numpy. Semantics match _kernels_numba; summation order
may differ, so cross-backend agreement is only guaranteed to ~1e-10
relative (per-backend results are bit-deterministic).
"""

import numpy as np
from scipy.linalg import solve_triangular


def maha_sq(X, mu, L):
    """Squared Mahalanobis distances ||L^{-1}(x_i - mu)||^2 for every row.

    L is the lower Cholesky factor of the covariance.
    """
    Z = solve_triangular(L, (X - mu).T, lower=True, check_finite=False)
    return np.einsum("dn,dn->n", Z, Z)


def weighted_scatter(X, w, mu):
    """Sum_i w_i (x_i - mu)(x_i - mu)^T, the M-step covariance numerator."""
    Z = X - mu
    return (Z.T * w) @ Z


def pairwise_sq_dists(X, C):
    """Squared Euclidean distances between rows of X (n,D) and C (k,D).

    Uses the expanded dot-product form to avoid an (n,k,D) temporary;
    clamped at zero against cancellation.
    """
    x2 = np.einsum("nd,nd->n", X, X)
    c2 = np.einsum("kd,kd->k", C, C)
    d2 = x2[:, None] + c2[None, :] - 2.0 * (X @ C.T)
    return np.maximum(d2, 0.0)
