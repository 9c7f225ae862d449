"""Cluster-level default probabilities and per-applicant scoring.

Each mixture component gets a pay-back probability: the responsibility-
weighted mean of the training labels. A new applicant's pay-back
probability is then the posterior-weighted average of those cluster
probabilities; its complement is the probability of default. A threshold
D binarizes (approve iff pay-back >= D).
"""

from dataclasses import dataclass

import numpy as np

from .dataio import FeatureMatrix
from .gmm import FittedGmm, cluster_posterior, e_step

# below this responsibility mass a cluster's label ratio is meaningless
LOW_MASS = 1e-10


@dataclass(frozen=True)
class ClusterPdTable:
    """Per-cluster pay-back/default probabilities with diagnostics.

    good_mass/bad_mass are the responsibility mass each cluster receives
    from good and bad training rows. Clusters with essentially no mass get
    the global pay-back rate and a flag. crisp_good/crisp_bad count
    argmax-assigned members; crisp_ratio is their count ratio, a
    diagnostic only (the probabilities come from the soft masses).
    """

    payback: np.ndarray
    default: np.ndarray
    good_mass: np.ndarray
    bad_mass: np.ndarray
    low_mass: np.ndarray     # bool flags
    crisp_good: np.ndarray
    crisp_bad: np.ndarray

    @property
    def n_clusters(self):
        return self.payback.shape[0]

    @property
    def crisp_ratio(self):
        counts = self.crisp_good + self.crisp_bad
        return np.where(counts > 0, self.crisp_good / np.maximum(counts, 1), np.nan)

    def rows(self):
        header = ("cluster", "payback", "default", "good_mass", "bad_mass",
                  "low_mass", "crisp_good", "crisp_bad", "crisp_ratio")
        out = []
        ratio = self.crisp_ratio
        for j in range(self.n_clusters):
            out.append((j, self.payback[j], self.default[j], self.good_mass[j],
                        self.bad_mass[j], bool(self.low_mass[j]),
                        int(self.crisp_good[j]), int(self.crisp_bad[j]),
                        "" if np.isnan(ratio[j]) else ratio[j]))
        return header, out


@dataclass(frozen=True)
class ScoringModel:
    gmm: FittedGmm
    table: ClusterPdTable
    threshold: float

    def __post_init__(self):
        if self.table.n_clusters != self.gmm.params.n_components:
            raise ValueError(
                f"table has {self.table.n_clusters} clusters for "
                f"{self.gmm.params.n_components} components")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must be in (0, 1), got {self.threshold}")


def cluster_payback_probs(model, X_train, y_train):
    """Estimate the per-cluster pay-back table from labeled rows.

    The pay-back probability of cluster j is the responsibility-weighted
    mean of y over the estimation rows. A cluster with total mass below
    1e-10 falls back to the global pay-back rate, flagged.
    """
    params = model.params if isinstance(model, FittedGmm) else model
    values = X_train.values if isinstance(X_train, FeatureMatrix) else np.asarray(X_train, dtype=np.float64)
    y = np.asarray(y_train, dtype=np.float64)
    if values.shape[0] != y.shape[0]:
        raise ValueError(f"{values.shape[0]} rows paired with {y.shape[0]} labels")

    r = e_step(values, params)
    mass = r.sum(axis=0)
    good_mass = r.T @ y
    bad_mass = mass - good_mass
    low = mass < LOW_MASS
    global_rate = float(y.mean())
    payback = np.where(low, global_rate, good_mass / np.where(low, 1.0, mass))
    payback = np.clip(payback, 0.0, 1.0)

    assign = r.argmax(axis=1)
    k = params.n_components
    crisp_good = np.bincount(assign[y == 1], minlength=k).astype(np.int64)
    crisp_bad = np.bincount(assign[y == 0], minlength=k).astype(np.int64)
    return ClusterPdTable(payback, 1.0 - payback, good_mass, bad_mass, low,
                          crisp_good, crisp_bad)


def payback_probability(x, model):
    """Posterior-weighted average of cluster pay-back probabilities.

    The posterior weights sum to one, so the normalizing denominator is
    exactly one; that is asserted rather than recomputed.
    """
    post = cluster_posterior(np.asarray(x, dtype=np.float64), model.gmm.params)
    total = float(post.sum())
    if abs(total - 1.0) > 1e-9:
        raise AssertionError(f"posterior mass {total!r} differs from 1")
    return float(min(max(post @ model.table.payback, 0.0), 1.0))


def default_probability(x, model):
    """Posterior-weighted average of cluster default probabilities."""
    post = cluster_posterior(np.asarray(x, dtype=np.float64), model.gmm.params)
    return float(min(max(post @ model.table.default, 0.0), 1.0))


def classify(p_payback, threshold):
    """1 (approve) iff p_payback >= threshold, boundary inclusive."""
    if not 0.0 <= p_payback <= 1.0 or not 0.0 <= threshold <= 1.0:
        raise ValueError("probability and threshold must lie in [0, 1]")
    return 1 if p_payback >= threshold else 0


def score_rows(values, model):
    """Batch scoring: (p_payback, p_default, label at the model threshold).

    The weighted sums are convex combinations, so any excursion outside
    [0, 1] is float dust; outputs are clamped to keep the probability
    contract exact.
    """
    values = values.values if isinstance(values, FeatureMatrix) else np.asarray(values, dtype=np.float64)
    r = e_step(values, model.gmm.params)
    payback = np.clip(r @ model.table.payback, 0.0, 1.0)
    default = np.clip(r @ model.table.default, 0.0, 1.0)
    labels = (payback >= model.threshold).astype(np.int64)
    return payback, default, labels
