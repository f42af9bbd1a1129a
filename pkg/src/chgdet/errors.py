"""Exception hierarchy.

Every numerical failure raised by the library derives from :class:`ChgdetError`
so the command line front end can map it to a single exit status.
"""


class ChgdetError(Exception):
    """Base class for numerical failures."""


class DomainError(ChgdetError, ValueError):
    """Argument outside the accepted domain of an operation."""


class PoleError(DomainError):
    """Evaluation at a pole (nonpositive integer argument of Gamma)."""


class ConvergenceError(ChgdetError, ArithmeticError):
    """An iterative method missed its accuracy target."""


class DiscretizationError(ChgdetError, ArithmeticError):
    """A discretised operator violates a structural property (e.g. 1 - gamma*lambda <= 0)."""


class BlowUpError(ChgdetError, ArithmeticError):
    """ODE solution left the bounded region."""


class StepUnderflowError(ChgdetError, ArithmeticError):
    """Adaptive step size fell below the representable resolution."""
