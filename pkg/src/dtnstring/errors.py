"""Exception types shared across the package."""


class DtnStringError(Exception):
    """Base class for all package errors."""


class InvalidStringError(DtnStringError):
    """Coefficient triple fails the structural checks; carries the report."""

    def __init__(self, report):
        self.report = report
        lines = "; ".join(f"{v.code}@{v.location}: {v.message}" for v in report.violations)
        super().__init__(f"invalid string coefficients: {lines}")


class DiscretizationError(DtnStringError):
    """Grid policy cannot be realized (bad truncation, non-integrable piece)."""


class TruncationBudgetError(DtnStringError):
    """Truncation target not reached within the resource budget.

    Carries the best available value and its certified bound.
    """

    def __init__(self, k, bound, message="truncation bound not reached"):
        self.k = k
        self.bound = bound
        super().__init__(f"{message} (best k={k}, bound={bound:.3e})")


class SymbolPoleError(DtnStringError):
    """Symbol evaluated at a pole of its closed form."""


class ConversionError(DtnStringError):
    """Coefficient form conversion is not defined for the given input."""
