"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: input problems exit 1,
numerical failures exit 2, an unsatisfiable loss budget exits 3.
"""


class CreditmixError(Exception):
    """Base class for package-specific failures."""


class InputError(CreditmixError):
    """Bad file, schema, config, or data contents."""


class NumericalError(CreditmixError):
    """Numerical failure: Cholesky breakdown, repeated component collapse,
    non-finite values where finite ones are required."""


class UndefinedMetricError(CreditmixError):
    """A ratio metric whose denominator is zero."""


class InfeasibleBudgetError(CreditmixError):
    """No grid threshold satisfies the requested loss budget.

    Carries the smallest achievable bound so callers can report
    how far away the budget is.
    """

    def __init__(self, budget, min_achievable_bound):
        self.budget = budget
        self.min_achievable_bound = min_achievable_bound
        super().__init__(
            f"loss budget {budget!r} unattainable on the grid; "
            f"smallest achievable bound is {min_achievable_bound!r}")
