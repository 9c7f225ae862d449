"""SMOTE-style rebalancing of a training set.

Synthetic minority rows are convex combinations of two distinct same-class
originals, x_new = (1 - alpha) x1 + alpha x2 with alpha ~ Uniform[0, 1] and
the parent pair drawn uniformly over ordered pairs of distinct minority
rows. One-hot indicator columns come out fractional and stay that way; the
mixture model consumes real vectors.

Applied to the training split only, after encoding.
"""

from dataclasses import dataclass

import numpy as np

from .dataio import FeatureMatrix
from .errors import InputError


@dataclass(frozen=True)
class BalanceReport:
    original_counts: dict      # label -> count before
    generated: int
    final_counts: dict         # label -> count after
    seed: int

    def lines(self):
        """Structured text form for CLI logs."""
        orig = " ".join(f"{k}:{v}" for k, v in sorted(self.original_counts.items()))
        final = " ".join(f"{k}:{v}" for k, v in sorted(self.final_counts.items()))
        return [
            f"balance original {orig}",
            f"balance generated {self.generated}",
            f"balance final {final}",
            f"balance seed {self.seed}",
        ]


def smote_interpolate(x1, x2, alpha):
    """(1 - alpha) * x1 + alpha * x2, componentwise."""
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    if x1.shape != x2.shape:
        raise ValueError(f"parent shapes differ: {x1.shape} vs {x2.shape}")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    return (1.0 - alpha) * x1 + alpha * x2


def balance_train(X, y, seed):
    """Oversample the minority class until class counts are equal.

    Synthetic rows are appended after the originals, which are preserved
    bit-exact in their input order. Returns the augmented matrix, labels,
    and a BalanceReport. Already-balanced input passes through unchanged.
    """
    values = X.values if isinstance(X, FeatureMatrix) else np.asarray(X, dtype=np.float64)
    names = X.column_names if isinstance(X, FeatureMatrix) else None
    y = np.asarray(y)
    if values.shape[0] != y.shape[0]:
        raise ValueError(f"features have {values.shape[0]} rows but labels have {y.shape[0]}")

    n1 = int(np.sum(y == 1))
    n0 = int(np.sum(y == 0))
    if n1 == 0 or n0 == 0:
        raise InputError("both classes must be present to balance")
    original = {0: n0, 1: n1}

    deficit = abs(n1 - n0)
    if deficit == 0:
        report = BalanceReport(original, 0, dict(original), seed)
        return _wrap(values, names), y.copy(), report

    minority = 1 if n1 < n0 else 0
    pool = values[y == minority]
    if pool.shape[0] < 2:
        raise InputError(
            f"class {minority} has {pool.shape[0]} member(s); need at least 2 to draw pairs")

    rng = np.random.default_rng(seed)
    synth = np.empty((deficit, values.shape[1]))
    for t in range(deficit):
        i = int(rng.integers(pool.shape[0]))
        j = int(rng.integers(pool.shape[0] - 1))
        if j >= i:
            j += 1
        synth[t] = smote_interpolate(pool[i], pool[j], float(rng.random()))

    out_values = np.concatenate([values, synth], axis=0)
    out_y = np.concatenate([y, np.full(deficit, minority, dtype=y.dtype)])
    final = {minority: original[minority] + deficit, 1 - minority: original[1 - minority]}
    report = BalanceReport(original, deficit, dict(sorted(final.items())), seed)
    return _wrap(out_values, names), out_y, report


def _wrap(values, names):
    return FeatureMatrix(values, names) if names is not None else values
