"""Gaussian mixture core: density evaluation, k-means init, EM, posteriors.

All density work happens in log-space through Cholesky factors; explicit
covariance inverses are never formed. Probabilities are exponentiated only
at the final max-shifted normalization, so responsibilities survive the
extreme dynamic range of high-dimensional one-hot data.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .errors import NumericalError

LOG_2PI = math.log(2.0 * math.pi)

# reinit a component when its effective mass drops below this
DEGENERATE_MASS = 1e-8

_KMEANS_MAX_ITER = 100
_KMEANS_TOL = 1e-6


@dataclass(frozen=True)
class GmmParams:
    """Mixture parameters: weights (k,), means (k,D), covariances (k,D,D)."""

    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray

    def __post_init__(self):
        w, mu, cov = self.weights, self.means, self.covariances
        if w.ndim != 1 or mu.ndim != 2 or cov.ndim != 3:
            raise ValueError("weights, means, covariances must be 1-D, 2-D, 3-D")
        k, d = mu.shape
        if w.shape != (k,) or cov.shape != (k, d, d):
            raise ValueError(
                f"inconsistent shapes: weights {w.shape}, means {mu.shape}, "
                f"covariances {cov.shape}")
        if abs(float(w.sum()) - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        if np.any(w <= 0.0):
            raise ValueError("every component weight must be positive")
        asym = np.max(np.abs(cov - np.transpose(cov, (0, 2, 1))))
        if asym > 1e-10:
            raise ValueError(f"covariance asymmetry {asym:.3e} exceeds 1e-10")

    @property
    def n_components(self):
        return self.weights.shape[0]

    @property
    def dim(self):
        return self.means.shape[1]


@dataclass(frozen=True)
class FitConfig:
    max_iter: int = 500
    tol: float = 1e-6
    reg: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if self.reg < 0.0:
            raise ValueError("reg must be non-negative")


@dataclass(frozen=True)
class FittedGmm:
    params: GmmParams
    log_likelihood: float
    n_iter: int
    converged: bool
    trace: np.ndarray


def _cholesky(sigma, what):
    try:
        return np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        smallest = float(np.linalg.eigvalsh(sigma)[0])
        raise NumericalError(
            f"Cholesky failed for {what} after regularization; "
            f"smallest eigenvalue ~ {smallest:.6e}") from None


def gaussian_logpdf(x, mu, sigma):
    """Log of the multivariate normal density at one point.

    Evaluated through the Cholesky factor of sigma: the quadratic form is a
    triangular solve and the log-determinant is twice the sum of the
    log-diagonal.
    """
    x = np.asarray(x, dtype=np.float64)
    mu = np.asarray(mu, dtype=np.float64)
    sigma = np.asarray(sigma, dtype=np.float64)
    d = mu.shape[0]
    if x.shape != (d,) or sigma.shape != (d, d):
        raise ValueError(
            f"shape mismatch: x {x.shape}, mu {mu.shape}, sigma {sigma.shape}")
    L = _cholesky(sigma, "gaussian_logpdf covariance")
    logdet = 2.0 * float(np.sum(np.log(np.diag(L))))
    quad = float(kernels.maha_sq(x[None, :], mu, L)[0])
    return -0.5 * (d * LOG_2PI + logdet + quad)


def _values(X):
    values = getattr(X, "values", X)
    return np.ascontiguousarray(np.asarray(values, dtype=np.float64))


def _log_weighted_densities(X, params):
    """(n, k) matrix of log(omega_j) + log phi(x_i | mu_j, Sigma_j)."""
    n, d = X.shape
    k = params.n_components
    out = np.empty((n, k))
    logw = np.log(params.weights)
    for j in range(k):
        L = _cholesky(params.covariances[j], f"component {j}")
        logdet = 2.0 * float(np.sum(np.log(np.diag(L))))
        quad = kernels.maha_sq(X, params.means[j], L)
        out[:, j] = logw[j] - 0.5 * (d * LOG_2PI + logdet + quad)
    return out


def _logsumexp_rows(A):
    m = A.max(axis=1)
    return m + np.log(np.exp(A - m[:, None]).sum(axis=1))


def _responsibilities(X, params):
    """Responsibilities and total log-likelihood in one pass."""
    logd = _log_weighted_densities(X, params)
    lse = _logsumexp_rows(logd)
    r = np.exp(logd - lse[:, None])
    return r, float(lse.sum())


def e_step(X, params):
    """Posterior responsibility of every component for every row."""
    r, _ = _responsibilities(_values(X), params)
    return r


def cluster_posterior(x, params):
    """Membership posterior for a single point; sums to 1."""
    x = np.asarray(x, dtype=np.float64)
    r, _ = _responsibilities(x[None, :], params)
    return r[0]


def log_likelihood(X, params):
    """Sum over rows of the log mixture density, log-sum-exp stabilized."""
    X = _values(X)
    return float(_logsumexp_rows(_log_weighted_densities(X, params)).sum())


def m_step(X, r, reg=1e-6):
    """Maximization update: weights, means, biased covariances + reg * I."""
    X = _values(X)
    r = np.asarray(r, dtype=np.float64)
    n, d = X.shape
    if r.shape[0] != n:
        raise ValueError(f"responsibilities have {r.shape[0]} rows, X has {n}")
    nk = r.sum(axis=0)
    if np.any(nk <= 0.0):
        raise NumericalError(f"degenerate component mass in m_step: {nk.min()!r}")
    k = r.shape[1]
    weights = nk / n
    means = (r.T @ X) / nk[:, None]
    covs = np.empty((k, d, d))
    eye = reg * np.eye(d)
    for j in range(k):
        covs[j] = kernels.weighted_scatter(X, np.ascontiguousarray(r[:, j]), means[j]) / nk[j]
        covs[j] = 0.5 * (covs[j] + covs[j].T) + eye
    return GmmParams(weights, means, covs)


def kmeans_init(X, k, seed, reg=1e-6):
    """Initial GmmParams from hard k-means clusters.

    k-means++ seeding with greedy local trials, then Lloyd iterations to a
    center-shift tolerance of 1e-6 or 100 rounds. Empty clusters are
    re-seeded at the point farthest from every current center. Component
    weights are cluster fractions, means the cluster means, covariances the
    within-cluster biased covariance plus reg * I.
    """
    X = _values(X)
    n, d = X.shape
    if k < 1:
        raise ValueError("k must be at least 1")
    if n < k:
        raise ValueError(f"need at least k={k} rows, got {n}")
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp(X, k, rng)

    assign = None
    for _ in range(_KMEANS_MAX_ITER):
        d2 = kernels.pairwise_sq_dists(X, centers)
        assign = d2.argmin(axis=1)
        new_centers = centers.copy()
        for j in range(k):
            mask = assign == j
            if mask.any():
                new_centers[j] = X[mask].mean(axis=0)
            else:
                far = kernels.pairwise_sq_dists(X, new_centers).min(axis=1).argmax()
                new_centers[j] = X[far]
        shift = float(np.sqrt(((new_centers - centers) ** 2).sum(axis=1).max()))
        centers = new_centers
        if shift < _KMEANS_TOL:
            break

    assign = kernels.pairwise_sq_dists(X, centers).argmin(axis=1)
    for j in range(k):
        if not np.any(assign == j):
            # force-claim the worst-covered point so every cluster is
            # non-empty, stealing only from clusters that keep a member
            counts = np.bincount(assign, minlength=k)
            d2min = kernels.pairwise_sq_dists(X, centers).min(axis=1)
            eligible = np.flatnonzero(counts[assign] > 1)
            far = int(eligible[d2min[eligible].argmax()])
            assign[far] = j

    weights = np.empty(k)
    means = np.empty((k, d))
    covs = np.empty((k, d, d))
    eye = reg * np.eye(d)
    for j in range(k):
        rows = X[assign == j]
        weights[j] = rows.shape[0] / n
        means[j] = rows.mean(axis=0)
        centered = rows - means[j]
        covs[j] = (centered.T @ centered) / rows.shape[0] + eye
    weights /= weights.sum()
    return GmmParams(weights, means, covs)


def _kmeans_pp(X, k, rng):
    """k-means++ seeding with greedy local trials per added center."""
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[int(rng.integers(n))]
    if k == 1:
        return centers
    closest = kernels.pairwise_sq_dists(X, centers[:1]).ravel()
    n_trials = 2 + int(math.log(k))
    for j in range(1, k):
        total = float(closest.sum())
        if total <= 0.0:
            # all remaining potential is zero (duplicate-heavy data);
            # any point works, duplicates are fixed after Lloyd
            centers[j:] = X[int(rng.integers(n))]
            break
        probs = closest / total
        cand = rng.choice(n, size=n_trials, p=probs)
        best_pot, best_idx, best_d2 = np.inf, None, None
        for c in cand:
            d2 = np.minimum(closest, kernels.pairwise_sq_dists(X, X[int(c)][None, :]).ravel())
            pot = float(d2.sum())
            if pot < best_pot:
                best_pot, best_idx, best_d2 = pot, int(c), d2
        centers[j] = X[best_idx]
        closest = best_d2
    return centers


def fit(X, k, config):
    """EM from a k-means start.

    Stops when the relative log-likelihood improvement drops below
    config.tol or at config.max_iter maximization steps. A component whose
    mass falls under 1e-8 is re-seeded at the sample the current mixture
    explains worst (unit diagonal covariance); a second consecutive
    collapse aborts.
    """
    X = _values(X)
    n = X.shape[0]
    if n < k:
        raise ValueError(f"need at least k={k} rows, got {n}")
    params = kmeans_init(X, k, config.seed, reg=config.reg)

    trace = []
    prev_ll = None
    collapsed_last_iter = False
    n_iter = 0
    converged = False
    for it in range(config.max_iter):
        r, ll = _responsibilities(X, params)
        trace.append(ll)
        if prev_ll is not None and (ll - prev_ll) < config.tol * abs(prev_ll):
            converged = True
            break
        prev_ll = ll

        nk = r.sum(axis=0)
        dead = np.flatnonzero(nk < DEGENERATE_MASS)
        if dead.size:
            if collapsed_last_iter:
                raise NumericalError(
                    f"component collapse on two consecutive iterations "
                    f"(iteration {it}, components {dead.tolist()})")
            collapsed_last_iter = True
            params = _reseed_components(X, params, dead)
            # a reseed may lower the log-likelihood; restart the
            # convergence comparison from the reseeded state
            prev_ll = None
            n_iter += 1
            continue
        collapsed_last_iter = False
        params = m_step(X, r, reg=config.reg)
        n_iter += 1
    else:
        ll = log_likelihood(X, params)
        trace.append(ll)

    return FittedGmm(params, trace[-1], n_iter, converged, np.asarray(trace))


def _reseed_components(X, params, dead):
    """Move collapsed components to the worst-explained samples."""
    logdens = _logsumexp_rows(_log_weighted_densities(X, params))
    order = np.argsort(logdens)
    weights = params.weights.copy()
    means = params.means.copy()
    covs = params.covariances.copy()
    n, d = X.shape
    for rank, j in enumerate(dead):
        means[j] = X[order[rank % n]]
        covs[j] = np.eye(d)
        weights[j] = 1.0 / n
    weights /= weights.sum()
    return GmmParams(weights, means, covs)


def fit_restarts(X, k, config, seeds):
    """Best-of-n fit: one EM run per seed, keep the highest log-likelihood.

    Restarts that die numerically are skipped unless every one fails.
    """
    best = None
    first_err = None
    for s in seeds:
        try:
            candidate = fit(X, k, replace(config, seed=int(s)))
        except NumericalError as exc:
            if first_err is None:
                first_err = exc
            continue
        if best is None or candidate.log_likelihood > best.log_likelihood:
            best = candidate
    if best is None:
        raise NumericalError(f"every restart failed for k={k}: {first_err}")
    return best
