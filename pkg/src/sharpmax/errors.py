"""Exception hierarchy shared by every module."""


class SharpMaxError(Exception):
    pass


class DomainError(SharpMaxError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateInputError(SharpMaxError, ValueError):
    """A ratio was requested for the zero function."""


class ArityError(SharpMaxError, ValueError):
    pass


class BudgetExceeded(SharpMaxError, RuntimeError):
    """An enumeration would exceed its configured size cap."""


class InfeasibleError(SharpMaxError):
    """Raised by the LP solver; carries an exact Farkas certificate."""

    def __init__(self, message, certificate):
        super().__init__(message)
        self.certificate = certificate
