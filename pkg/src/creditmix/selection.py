"""Component-count selection by AIC/BIC sweeps over candidate k."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .gmm import fit_restarts
from .seeds import derive_seed


def param_count(n_components, dim):
    """Free parameters of a full-covariance mixture.

    (N_c - 1) free weights, N_c * D means, N_c * D(D+1)/2 covariance terms.
    """
    if n_components < 1 or dim < 1:
        raise ValueError("n_components and dim must be at least 1")
    return (n_components - 1) + n_components * dim + n_components * dim * (dim + 1) // 2


def aic(loglik, k):
    return 2.0 * k - 2.0 * loglik


def bic(loglik, k, n):
    if n < 1:
        raise ValueError("n must be at least 1")
    return math.log(n) * k - 2.0 * loglik


@dataclass(frozen=True)
class SelectionRecord:
    k: int
    loglik: float = None
    param_count: int = None
    aic: float = None
    bic: float = None
    n_iter: int = None
    converged: bool = None
    error: str = None      # failed candidates become gaps, not aborts


@dataclass(frozen=True)
class SelectionCurve:
    records: tuple
    criterion: str
    chosen_aic: int
    chosen_bic: int

    @property
    def chosen_k(self):
        return self.chosen_aic if self.criterion == "aic" else self.chosen_bic

    def rows(self):
        """CSV-ready rows: k, loglik, params, aic, bic, n_iter, converged, error."""
        out = []
        for r in self.records:
            out.append((r.k, r.loglik, r.param_count, r.aic, r.bic,
                        r.n_iter, r.converged, r.error or ""))
        return out


def select_k(X, k_candidates, config, criterion="bic", n_restarts=3):
    """Fit every candidate k and pick the criterion argmin.

    Each candidate gets n_restarts independent EM runs from seeds derived
    off config.seed, keeping the best log-likelihood. Candidates whose
    every restart fails numerically are recorded as gaps. Ties in the
    argmin break toward smaller k.
    """
    criterion = criterion.lower()
    if criterion not in ("aic", "bic"):
        raise ValueError(f"criterion must be aic or bic, got {criterion!r}")
    k_candidates = [int(k) for k in k_candidates]
    if not k_candidates:
        raise ValueError("k_candidates is empty")
    values = getattr(X, "values", X)
    n, d = np.asarray(values).shape
    if max(k_candidates) > n:
        raise ValueError(f"candidate k={max(k_candidates)} exceeds n={n}")

    records = []
    for k in k_candidates:
        seeds = [derive_seed(config.seed, f"kmeans:k{k}:r{r}") for r in range(n_restarts)]
        try:
            fitted = fit_restarts(values, k, config, seeds)
        except NumericalError as exc:
            records.append(SelectionRecord(k=k, error=str(exc)))
            continue
        p = param_count(k, d)
        records.append(SelectionRecord(
            k=k,
            loglik=fitted.log_likelihood,
            param_count=p,
            aic=aic(fitted.log_likelihood, p),
            bic=bic(fitted.log_likelihood, p, n),
            n_iter=fitted.n_iter,
            converged=fitted.converged,
        ))

    usable = [r for r in records if r.error is None]
    if not usable:
        raise NumericalError("every candidate k failed to fit")
    chosen_aic = min(usable, key=lambda r: (r.aic, r.k)).k
    chosen_bic = min(usable, key=lambda r: (r.bic, r.k)).k
    return SelectionCurve(tuple(records), criterion, chosen_aic, chosen_bic)
