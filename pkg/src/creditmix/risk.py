"""Expected-loss accounting and profit/threshold analytics.

Conventions: y = 1 is a payback, so losses fall on the (1 - y) side;
exposures are either one fixed obligation M per applicant or draws from a
normal distribution with negatives rejected; recovery rate R is a scalar.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleBudgetError, InputError, UndefinedMetricError

EXPOSURE_MODES = ("fixed", "normal")


@dataclass(frozen=True)
class PortfolioSpec:
    """Loan obligations, original capital, recovery rate, exposure mode."""

    loan_amount: float = 1000.0      # scalar M, or a per-applicant vector
    original_capital: float = 1000.0
    recovery_rate: float = 0.5
    exposure_mode: str = "fixed"
    exposure_mean: float = 1000.0
    exposure_std: float = 100.0
    exposure_seed: int = 0

    def __post_init__(self):
        if self.exposure_mode not in EXPOSURE_MODES:
            raise InputError(f"exposure_mode must be one of {EXPOSURE_MODES}")
        if not 0.0 <= self.recovery_rate <= 1.0:
            raise InputError(f"recovery rate must be in [0, 1], got {self.recovery_rate}")
        amounts = np.asarray(self.loan_amount, dtype=np.float64)
        if np.any(amounts <= 0.0):
            raise InputError("loan amounts must be positive")
        if self.exposure_mode == "normal" and (
                self.exposure_mean <= 0.0 or self.exposure_std < 0.0):
            raise InputError("exposure mean must be positive and std non-negative")

    def exposures(self, n):
        """Per-applicant exposure vector of length n."""
        if self.exposure_mode == "normal":
            return sample_exposures(n, self.exposure_mean, self.exposure_std,
                                    self.exposure_seed)
        amounts = np.asarray(self.loan_amount, dtype=np.float64)
        if amounts.ndim == 0:
            return np.full(n, float(amounts))
        if amounts.shape[0] != n:
            raise ValueError(f"loan vector has {amounts.shape[0]} entries, need {n}")
        return amounts.copy()


def sample_exposures(n, mean, std, seed):
    """n normal draws, deterministic given seed, non-positive draws redrawn.

    At mean 1000 and std 100 a rejection is a ~1e-23 event; the redraw loop
    exists so the contract (positive exposures) holds for any mean/std.
    """
    if mean <= 0.0 or std < 0.0:
        raise InputError("exposure mean must be positive and std non-negative")
    rng = np.random.default_rng(seed)
    draws = rng.normal(mean, std, size=n)
    bad = draws <= 0.0
    while bad.any():
        draws[bad] = rng.normal(mean, std, size=int(bad.sum()))
        bad = draws <= 0.0
    return draws


def expected_loss_model(pds, spec_or_exposures):
    """Model expected loss: sum of PD_i * (1 - R) * EAD_i.

    Entries may stray outside [0, 1] by float dust only (1e-9); they are
    clamped, anything worse is rejected.
    """
    pds = np.asarray(pds, dtype=np.float64)
    if np.any((pds < -1e-9) | (pds > 1.0 + 1e-9)):
        raise ValueError("default probabilities must lie in [0, 1]")
    pds = np.clip(pds, 0.0, 1.0)
    ead, r = _exposures_and_rate(spec_or_exposures, pds.shape[0])
    return float(np.sum(pds * (1.0 - r) * ead))


def expected_loss_actual(y, spec_or_exposures):
    """Realized loss: defaulters (y = 0) lose (1 - R) of their exposure."""
    y = np.asarray(y)
    ead, r = _exposures_and_rate(spec_or_exposures, y.shape[0])
    return float(np.sum((1.0 - y) * (1.0 - r) * ead))


def _exposures_and_rate(spec_or_exposures, n):
    if isinstance(spec_or_exposures, PortfolioSpec):
        return spec_or_exposures.exposures(n), spec_or_exposures.recovery_rate
    ead, r = spec_or_exposures
    ead = np.asarray(ead, dtype=np.float64)
    if ead.ndim == 0:
        ead = np.full(n, float(ead))
    if ead.shape[0] != n:
        raise ValueError(f"exposure vector has {ead.shape[0]} entries, need {n}")
    return ead, float(r)


def relative_el_error(el_model, el_actual):
    """(model - actual) / actual; undefined at zero actual loss."""
    if el_actual == 0.0:
        raise UndefinedMetricError("relative EL error undefined: actual loss is zero")
    return (el_model - el_actual) / el_actual


@dataclass(frozen=True)
class ElReport:
    """One expected-loss comparison.

    eps_el is the actual-relative error, None when actual loss is zero.
    capital_relative_error normalizes the same gap by total capital.
    """

    total_capital: float
    el_model: float
    el_actual: float
    eps_el: float
    capital_relative_error: float


def build_el_report(pds, y, spec):
    """ElReport for one scored population under one portfolio spec."""
    pds = np.asarray(pds, dtype=np.float64)
    y = np.asarray(y)
    if pds.shape[0] != y.shape[0]:
        raise ValueError(f"{pds.shape[0]} scores paired with {y.shape[0]} labels")
    ead = spec.exposures(pds.shape[0])
    r = spec.recovery_rate
    total = float(ead.sum())
    el_m = expected_loss_model(pds, (ead, r))
    el_a = expected_loss_actual(y, (ead, r))
    try:
        eps = relative_el_error(el_m, el_a)
    except UndefinedMetricError:
        eps = None
    return ElReport(total, el_m, el_a, eps, (el_m - el_a) / total)


def income_lower_bound(m, M, R, p_min):
    """Guaranteed income of m approved loans: m * M * (R + p_min (1 - R))."""
    return m * M * (R + p_min * (1.0 - R))


def total_expected_loss(paybacks, M, R):
    """n M (1 - R) - M (1 - R) * sum of paybacks."""
    paybacks = np.asarray(paybacks, dtype=np.float64)
    if np.any((paybacks < 0.0) | (paybacks > 1.0)):
        raise ValueError("payback probabilities must lie in [0, 1]")
    n = paybacks.shape[0]
    return float(n * M * (1.0 - R) - M * (1.0 - R) * paybacks.sum())


def loss_upper_bound(m, M, R, p_min):
    """Worst-case expected loss of the approved set: m M (1 - R)(1 - p_min)."""
    return m * M * (1.0 - R) * (1.0 - p_min)


@dataclass(frozen=True)
class ThresholdCurve:
    """Approval analytics over a p_min grid.

    Per grid point: approved count m, the approved fraction term
    m/n * (1 - p_min), the loss upper bound, the guaranteed income lower
    bound, the average-loss bound (loss bound / n), net profit bound
    (income bound - m * M0), and, when labels were supplied, the realized
    loss of the approved subset.
    """

    p_min: np.ndarray
    m: np.ndarray
    m_frac_term: np.ndarray
    loss_bound: np.ndarray
    income_bound: np.ndarray
    avg_loss_bound: np.ndarray
    net_profit_bound: np.ndarray
    realized_loss: np.ndarray     # None when labels were not supplied
    n: int
    loan_amount: float
    recovery_rate: float

    def rows(self):
        header = ("p_min", "m", "m_over_n_times_1_minus_pmin", "loss_bound",
                  "income_bound", "realized_loss", "avg_loss_bound",
                  "net_profit_bound")
        out = []
        for i in range(self.p_min.shape[0]):
            realized = "" if self.realized_loss is None else self.realized_loss[i]
            out.append((self.p_min[i], int(self.m[i]), self.m_frac_term[i],
                        self.loss_bound[i], self.income_bound[i], realized,
                        self.avg_loss_bound[i], self.net_profit_bound[i]))
        return header, out


def default_grid(step=0.01):
    return np.round(np.arange(0, int(round(1.0 / step)) + 1) * step, 10)


def approval_curve(paybacks, grid, spec, y=None):
    """Sweep approval thresholds p_min over a sorted grid.

    Approval is inclusive (payback >= p_min). Bounds use the scalar loan
    amount M; realized loss (labels permitting) uses the same M for every
    approved defaulter.
    """
    paybacks = np.asarray(paybacks, dtype=np.float64)
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise InputError("empty p_min grid")
    if np.any(np.diff(grid) < 0) or grid[0] < 0.0 or grid[-1] > 1.0:
        raise InputError("grid must be sorted ascending within [0, 1]")
    M = float(np.asarray(spec.loan_amount, dtype=np.float64).mean())
    R = spec.recovery_rate
    n = paybacks.shape[0]
    if y is not None:
        y = np.asarray(y)
        if y.shape[0] != n:
            raise ValueError(f"{n} paybacks paired with {y.shape[0]} labels")

    g = grid.shape[0]
    m = np.empty(g, dtype=np.int64)
    realized = np.empty(g) if y is not None else None
    for i, p in enumerate(grid):
        approved = paybacks >= p
        m[i] = int(approved.sum())
        if y is not None:
            realized[i] = float(np.sum(approved & (y == 0)) * M * (1.0 - R))
    loss = np.array([loss_upper_bound(int(mi), M, R, p) for mi, p in zip(m, grid)])
    income = np.array([income_lower_bound(int(mi), M, R, p) for mi, p in zip(m, grid)])
    return ThresholdCurve(
        p_min=grid,
        m=m,
        m_frac_term=m / n * (1.0 - grid),
        loss_bound=loss,
        income_bound=income,
        avg_loss_bound=loss / n,
        net_profit_bound=income - m * spec.original_capital,
        realized_loss=realized,
        n=n,
        loan_amount=M,
        recovery_rate=R,
    )


def invert_loss_budget(curve, budget, M=None, R=None):
    """Smallest grid p_min whose loss bound fits the budget.

    Returns (p_min, achieved_bound). Bounds are recomputed from the
    curve's approved counts with the given M and R (defaulting to the
    curve's own). Raises InfeasibleBudgetError carrying the minimum
    achievable bound when no grid point qualifies.
    """
    if budget < 0.0:
        raise InputError(f"budget must be non-negative, got {budget}")
    M = curve.loan_amount if M is None else M
    R = curve.recovery_rate if R is None else R
    bounds = np.array([
        loss_upper_bound(int(mi), M, R, p) for mi, p in zip(curve.m, curve.p_min)
    ])
    ok = np.flatnonzero(bounds <= budget)
    if ok.size == 0:
        raise InfeasibleBudgetError(budget, float(bounds.min()))
    i = int(ok[0])
    return float(curve.p_min[i]), float(bounds[i])
