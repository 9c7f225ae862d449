"""Backend kernels: oracle values, cross-backend agreement, determinism."""

import numpy as np
import pytest
from scipy.linalg import solve_triangular

from creditmix import _kernels_numpy, kernels

HAVE_NUMBA = kernels.HAS_NUMBA
BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA else [])


def _naive_maha(X, mu, L):
    out = np.empty(X.shape[0])
    for i, x in enumerate(X):
        z = solve_triangular(L, x - mu, lower=True)
        out[i] = z @ z
    return out


def _case(seed=0, n=40, d=5):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    mu = rng.normal(size=d)
    A = rng.normal(size=(d, d))
    L = np.linalg.cholesky(A @ A.T + d * np.eye(d))
    w = rng.random(n)
    C = rng.normal(size=(3, d))
    return X, mu, L, w, C


@pytest.mark.parametrize("backend", BACKENDS)
def test_maha_sq_matches_naive_solve(backend):
    X, mu, L, _, _ = _case()
    prev = kernels.use_backend(backend)
    try:
        got = kernels.maha_sq(X, mu, L)
    finally:
        kernels.use_backend(prev)
    np.testing.assert_allclose(got, _naive_maha(X, mu, L), rtol=1e-10)


@pytest.mark.parametrize("backend", BACKENDS)
def test_weighted_scatter_matches_naive_loop(backend):
    X, mu, _, w, _ = _case()
    expected = np.zeros((X.shape[1], X.shape[1]))
    for i in range(X.shape[0]):
        z = X[i] - mu
        expected += w[i] * np.outer(z, z)
    prev = kernels.use_backend(backend)
    try:
        got = kernels.weighted_scatter(X, w, mu)
    finally:
        kernels.use_backend(prev)
    np.testing.assert_allclose(got, expected, rtol=1e-9, atol=1e-12)


@pytest.mark.parametrize("backend", BACKENDS)
def test_pairwise_sq_dists_matches_naive(backend):
    X, _, _, _, C = _case()
    expected = ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)
    prev = kernels.use_backend(backend)
    try:
        got = kernels.pairwise_sq_dists(X, C)
    finally:
        kernels.use_backend(prev)
    np.testing.assert_allclose(got, expected, rtol=1e-8, atol=1e-10)
    assert (got >= 0).all()


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")
def test_cross_backend_agreement_1e10():
    X, mu, L, w, C = _case(seed=7, n=200, d=8)
    a = _kernels_numpy
    from creditmix import _kernels_numba as b
    np.testing.assert_allclose(a.maha_sq(X, mu, L), b.maha_sq(X, mu, L), rtol=1e-10)
    np.testing.assert_allclose(
        a.weighted_scatter(X, w, mu), b.weighted_scatter(X, w, mu),
        rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(
        a.pairwise_sq_dists(X, C), b.pairwise_sq_dists(X, C),
        rtol=1e-10, atol=1e-9)


@pytest.mark.parametrize("backend", BACKENDS)
def test_per_backend_bit_determinism(backend):
    X, mu, L, w, C = _case(seed=3)
    prev = kernels.use_backend(backend)
    try:
        first = (kernels.maha_sq(X, mu, L), kernels.weighted_scatter(X, w, mu),
                 kernels.pairwise_sq_dists(X, C))
        second = (kernels.maha_sq(X, mu, L), kernels.weighted_scatter(X, w, mu),
                  kernels.pairwise_sq_dists(X, C))
    finally:
        kernels.use_backend(prev)
    for a, b in zip(first, second):
        assert np.array_equal(a, b)


def test_use_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.use_backend("gpu")


def test_use_backend_returns_previous():
    prev = kernels.use_backend("numpy")
    try:
        assert kernels.active_backend == "numpy"
    finally:
        kernels.use_backend(prev)
    assert kernels.active_backend == prev
