"""Exception types shared across the package."""


class PreserverError(Exception):
    """Base class for all errors raised by this package."""


class InvalidVertex(PreserverError, ValueError):
    pass


class SizeMismatch(PreserverError, ValueError):
    pass


class InvalidSpec(PreserverError, ValueError):
    pass


class InvalidThreshold(PreserverError, ValueError):
    """Raised when a threshold t lies outside the range an operation accepts."""


class ParseError(PreserverError, ValueError):
    pass


class NotSignConsistent(PreserverError):
    """A matrix map whose support pattern is not compatible with graph unions."""


class BudgetExceeded(PreserverError):
    """A search or scan would exceed its configured budget.

    ``partial`` carries whatever was computed before the cap was hit, if anything.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
