"""Classification metrics and a from-scratch logistic regression baseline.

The positive class is 1 (a repaying client) throughout. Ratio metrics with
a zero denominator are reported as None, never silently as 0.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def n(self):
        return self.tp + self.tn + self.fp + self.fn


def confusion(y_true, y_pred):
    """Standard confusion counts with positive class 1."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError(f"length mismatch: {y_true.shape} vs {y_pred.shape}")
    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    tn = int(np.sum((y_true == 0) & (y_pred == 0)))
    fp = int(np.sum((y_true == 0) & (y_pred == 1)))
    fn = int(np.sum((y_true == 1) & (y_pred == 0)))
    return ConfusionMatrix(tp, tn, fp, fn)


@dataclass(frozen=True)
class MetricsReport:
    """accuracy, precision, recall, f1, auc; None marks an undefined ratio."""

    accuracy: float
    precision: float
    recall: float
    f1: float
    auc: float


def roc_auc(y_true, scores):
    """Exact ROC-AUC by the Mann-Whitney statistic, ties earning 0.5.

    Counts positive-negative score pairs in a single sorted sweep, so it
    matches brute-force pair counting exactly.
    """
    y_true = np.asarray(y_true)
    scores = np.asarray(scores, dtype=np.float64)
    if y_true.shape != scores.shape:
        raise ValueError(f"length mismatch: {y_true.shape} vs {scores.shape}")
    n_pos = int(np.sum(y_true == 1))
    n_neg = y_true.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        return None
    order = np.argsort(scores, kind="stable")
    y_sorted = y_true[order]
    s_sorted = scores[order]
    credit = 0.0
    neg_below = 0
    i = 0
    n = y_true.shape[0]
    while i < n:
        j = i
        while j < n and s_sorted[j] == s_sorted[i]:
            j += 1
        pos_here = int(np.sum(y_sorted[i:j] == 1))
        neg_here = (j - i) - pos_here
        credit += pos_here * neg_below + 0.5 * pos_here * neg_here
        neg_below += neg_here
        i = j
    return credit / (n_pos * n_neg)


def metrics(cm, scores=None, y_true=None):
    """MetricsReport from a confusion matrix plus optional scores for AUC."""
    n = cm.n
    accuracy = (cm.tp + cm.tn) / n if n else None
    precision = cm.tp / (cm.tp + cm.fp) if (cm.tp + cm.fp) else None
    recall = cm.tp / (cm.tp + cm.fn) if (cm.tp + cm.fn) else None
    if precision is None or recall is None or (precision + recall) == 0:
        f1 = None
    else:
        f1 = 2 * precision * recall / (precision + recall)
    auc = roc_auc(y_true, scores) if scores is not None and y_true is not None else None
    return MetricsReport(accuracy, precision, recall, f1, auc)


@dataclass(frozen=True)
class LogisticConfig:
    l2: float = 1e-4          # penalty on weights, never on the bias
    max_iter: int = 5000
    tol: float = 1e-8         # gradient-norm stopping threshold


@dataclass(frozen=True)
class LogisticModel:
    """Raw-space parameters: probability = sigmoid(weights . x + bias)."""

    weights: np.ndarray
    bias: float
    n_iter: int
    final_objective: float
    converged: bool


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_objective(params, X, y, l2):
    """Mean negative log-likelihood plus L2 on weights; value and gradient.

    params stacks [weights..., bias]. Written with logaddexp so the loss
    stays finite for any margin.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    w, b = params[:-1], params[-1]
    z = X @ w + b
    # -log p(y|z) = logaddexp(0, z) - y z
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    value = loss + 0.5 * l2 * float(w @ w)
    p = _sigmoid(z)
    resid = (p - y) / y.shape[0]
    grad = np.empty_like(params)
    grad[:-1] = X.T @ resid + l2 * w
    grad[-1] = float(resid.sum())
    return value, grad


def logistic_fit(X, y, config=LogisticConfig()):
    """Full-batch gradient descent with Armijo backtracking, zero init.

    Features are standardized internally on the training statistics and
    the solution is folded back to raw space, so callers never see the
    scaling. Deterministic; returns the best iterate flagged unconverged
    when the gradient tolerance is not reached.
    """
    values = getattr(X, "values", X)
    values = np.asarray(values, dtype=np.float64)
    y = np.asarray(y)
    if values.shape[0] != y.shape[0]:
        raise ValueError(f"{values.shape[0]} rows paired with {y.shape[0]} labels")
    present = set(np.unique(y).tolist())
    if present != {0, 1}:
        raise InputError(f"labels must be exactly {{0, 1}} with both present, got {sorted(present)}")

    mu = values.mean(axis=0)
    sd = values.std(axis=0)
    sd = np.where(sd < 1e-12, 1.0, sd)
    Z = (values - mu) / sd

    params = np.zeros(values.shape[1] + 1)
    value, grad = logistic_objective(params, Z, y, config.l2)
    n_iter = 0
    converged = False
    for _ in range(config.max_iter):
        gnorm = float(np.linalg.norm(grad))
        if gnorm < config.tol:
            converged = True
            break
        step = 1.0
        g2 = gnorm * gnorm
        while step > 1e-20:
            trial = params - step * grad
            trial_value, trial_grad = logistic_objective(trial, Z, y, config.l2)
            if trial_value <= value - 1e-4 * step * g2:
                break
            step *= 0.5
        else:
            break   # no productive step left at this precision
        params, value, grad = trial, trial_value, trial_grad
        n_iter += 1
    else:
        converged = float(np.linalg.norm(grad)) < config.tol

    w_std, b_std = params[:-1], params[-1]
    weights = w_std / sd
    bias = float(b_std - np.sum(w_std * mu / sd))
    return LogisticModel(weights, bias, n_iter, value, converged)


def logistic_predict_proba(model, x):
    """sigmoid(w . x + b); accepts a single row or a matrix of rows."""
    x = np.asarray(getattr(x, "values", x), dtype=np.float64)
    z = x @ model.weights + model.bias
    if np.ndim(z) == 0:
        return float(_sigmoid(np.array([z]))[0])
    return _sigmoid(z)
