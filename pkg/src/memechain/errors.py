"""Exception types shared across the package.

The CLI maps these onto exit codes (usage=1, data=2, numerical=3), so
library code should raise DataError for anything caused by bad input
data or files, and NumericalError when arithmetic goes non-finite.
"""


class DataError(ValueError):
    """Malformed, inconsistent, or missing input data."""


class NumericalError(ArithmeticError):
    """A computation produced or received non-finite values."""
