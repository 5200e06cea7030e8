"""Exception hierarchy shared by the library and the CLI."""


class BngeomError(Exception):
    """Base class for all errors raised by bngeom."""


class InputError(BngeomError, ValueError):
    """Malformed model, point or dataset."""


class CapabilityError(BngeomError):
    """The requested computation is outside what the library supports."""


class ConditioningError(BngeomError, ArithmeticError):
    """The metric is singular or too ill-conditioned to invert reliably."""

    def __init__(self, message, condition_number):
        super().__init__(message)
        self.condition_number = condition_number
