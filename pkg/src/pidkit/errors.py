"""Exception types shared across the package."""


class PidkitError(Exception):
    """Base class for all package errors."""


class DataValidationError(PidkitError):
    """Malformed or inconsistent input data.

    Carries an optional 1-based row number when the problem can be
    pinned to a single CSV row.
    """

    def __init__(self, message: str, row: int | None = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class DomainError(PidkitError):
    """Arguments outside the domain of an operation (bad window, k <= 1, ...)."""


class InsufficientDataError(PidkitError):
    """Inputs are valid but do not cover the requested computation.

    Examples: a GDP level outside the observed range, a curve overlap
    shorter than the matcher requires, a trend projection that can
    never reach its target.
    """
