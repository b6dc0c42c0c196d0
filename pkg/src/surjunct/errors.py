"""Exception types shared across the package."""


class SurjunctError(Exception):
    """Base class for all package errors."""


class ZeroPolynomialError(SurjunctError, ValueError):
    """An operation that needs a nonzero polynomial received zero."""

    def __init__(self, msg="zero polynomial"):
        super().__init__(msg)


class DimensionMismatchError(SurjunctError, ValueError):
    pass


class ExponentLimitError(SurjunctError, ValueError):
    pass


class ParseError(SurjunctError, ValueError):
    """Syntax error in polynomial text; ``pos`` is a 0-based character offset."""

    def __init__(self, msg, pos, text=""):
        self.msg = msg
        self.pos = pos
        self.text = text
        super().__init__(f"{msg} at position {pos}")


class RootOnEndpointError(SurjunctError, ValueError):
    pass


class ConvergenceError(SurjunctError, ArithmeticError):
    """Numeric refinement did not reach the requested accuracy.

    ``value`` and ``bound`` hold the best estimate and its certified error
    bound at the time of giving up.
    """

    def __init__(self, msg, value=None, bound=None):
        super().__init__(msg)
        self.value = value
        self.bound = bound


class BudgetExceededError(SurjunctError, RuntimeError):
    """A grid, lattice or iteration cap was exceeded."""


class InsufficientDataError(SurjunctError, ValueError):
    pass


class InconsistentReportError(SurjunctError, AssertionError):
    """Internal consistency violation; always indicates a bug."""
