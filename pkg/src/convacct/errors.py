"""Exception types shared across the package.

The CLI maps these onto exit codes: DataError -> 3, NumericalError -> 4.
"""


class DataError(Exception):
    """Input data is unreadable, malformed, or leaves an empty sample."""


class NumericalError(Exception):
    """A numerical procedure failed (non-convergence, undefined result)."""
