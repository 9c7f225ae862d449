"""Numba-compiled implementations of the hot numerical loops.

Explicit loops, no fastmath, no parallelism: results are bit-deterministic
for a given input on a given machine. cache=True persists the compiled
artifacts next to this file so repeat runs skip compilation.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def maha_sq(X, mu, L):
    n, d = X.shape
    out = np.empty(n)
    z = np.empty(d)
    for i in range(n):
        # forward substitution of L z = (x - mu)
        for j in range(d):
            acc = X[i, j] - mu[j]
            for t in range(j):
                acc -= L[j, t] * z[t]
            z[j] = acc / L[j, j]
        s = 0.0
        for j in range(d):
            s += z[j] * z[j]
        out[i] = s
    return out


@njit(cache=True, nogil=True)
def weighted_scatter(X, w, mu):
    n, d = X.shape
    out = np.zeros((d, d))
    z = np.empty(d)
    for i in range(n):
        wi = w[i]
        for j in range(d):
            z[j] = X[i, j] - mu[j]
        for j in range(d):
            zj = wi * z[j]
            for t in range(j + 1):
                out[j, t] += zj * z[t]
    for j in range(d):
        for t in range(j):
            out[t, j] = out[j, t]
    return out


@njit(cache=True, nogil=True)
def pairwise_sq_dists(X, C):
    n, d = X.shape
    k = C.shape[0]
    out = np.empty((n, k))
    for i in range(n):
        for c in range(k):
            s = 0.0
            for j in range(d):
                diff = X[i, j] - C[c, j]
                s += diff * diff
            out[i, c] = s
    return out
