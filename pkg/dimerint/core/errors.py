"""
This module defines the exception hierarchy shared by the numerical modules
of dimerint.

Two families are distinguished. PreconditionError (and its SizeGuardError
subclass) signals that a request lies outside the domain an operation accepts,
such as a case whose sign conditions do not hold or a window too large for the
exhaustive enumerator. DimerNumericalError signals that a well-posed request
failed numerically: a vanishing denominator, a singular linear system, a
quadrature that did not converge, or a one-sided limit whose extrapolants
disagree.

The command-line front end maps the first family to exit status 1 and the
second to exit status 2.

Version: 1.0.0
"""

from typing import Optional


class DimerError(Exception):
    """
    Base class for every error raised by dimerint.
    """


class PreconditionError(DimerError, ValueError):
    """
    Raised when the arguments of an operation violate its preconditions.
    """


class SizeGuardError(PreconditionError):
    """
    Raised when a brute-force oracle is asked for more work than its guard
    allows.
    """


class DimerNumericalError(DimerError, ArithmeticError):
    """
    Base class for numerical failures on otherwise valid input.
    """


class DegenerateCoefficientError(DimerNumericalError):
    """
    Raised when a closed-form coefficient has a vanishing denominator.

    Parameters
    ----------
    subexpression: str
        Name of the denominator that vanished.

    msg: str, default=None
        Optional message. A default one naming the subexpression is used when
        omitted.
    """

    def __init__(self,
                 subexpression: str,
                 msg: Optional[str] = None):
        self.subexpression = subexpression
        if msg is None:
            msg = f"Degenerate denominator '{subexpression}'."
        super().__init__(msg)


class SingularMatrixError(DimerNumericalError):
    """
    Raised when a linear system has no unique solution.
    """


class QuadratureError(DimerNumericalError):
    """
    Raised when adaptive quadrature exhausts its panel budget.

    Parameters
    ----------
    panels: int
        Number of panels in use when the budget ran out.

    error_estimate: float
        The summed error estimate at that point.
    """

    def __init__(self,
                 panels: int,
                 error_estimate: float):
        self.panels = panels
        self.error_estimate = error_estimate
        super().__init__(
            f"Quadrature did not converge within {panels} panels "
            f"(error estimate {error_estimate:.3e}).")


class LimitConvergenceError(DimerNumericalError):
    """
    Raised when extrapolated one-sided limits disagree beyond tolerance.
    """
