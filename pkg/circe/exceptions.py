# License: BSD 3 clause
"""Exceptions and warnings raised by circe."""

from sklearn.exceptions import ConvergenceWarning

__all__ = ['ArityError', 'NotMonotoneError', 'BudgetExceededError',
           'FixpointError', 'CircuitSyntaxError', 'InvalidCospanError',
           'StuckRedexWarning', 'ConvergenceWarning']


class ArityError(ValueError):
    """Raised when wire counts of two objects do not line up."""


class NotMonotoneError(ValueError):
    """Raised when a table or map is required to be monotone and is not."""


class BudgetExceededError(RuntimeError):
    """Raised when an enumeration goes past its configured cap.

    Parameters
    ----------
    what : str
        Name of the enumerated quantity.

    budget : int
        The cap that was exceeded.
    """

    def __init__(self, what, budget):
        self.what = what
        self.budget = budget
        super().__init__("Budget exceeded: more than %d %s"
                         % (budget, what))


class FixpointError(RuntimeError):
    """Raised when a Kleene iteration does not converge within its bound.

    This only happens for non-monotone machines.
    """


class CircuitSyntaxError(ValueError):
    """Error in circuit-language source.

    Parameters
    ----------
    msg : str
        Description of the problem.

    line : int, optional
        1-based line of the offending token.

    col : int, optional
        1-based column of the offending token.
    """

    def __init__(self, msg, line=None, col=None):
        self.msg = msg
        self.line = line
        self.col = col
        if line is not None:
            msg = "line %d, col %d: %s" % (line, col, msg)
        super().__init__(msg)


class InvalidCospanError(ValueError):
    """Raised when a cospan fails the validator an operation requires."""


class StuckRedexWarning(UserWarning):
    """Warning emitted when partial evaluation meets a redex it cannot
    reduce (an uncertain value entering a generator with no rule)."""
