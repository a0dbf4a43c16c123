"""Exception hierarchy.

Every error is also a ``ValueError`` or ``ArithmeticError`` so callers that
do not care about the finer classes can catch the builtin.
"""


class RieszError(Exception):
    """Base class for all package errors."""


class SpectrumError(RieszError, ValueError):
    """A spectrum or operator violates its data-model invariants."""

    def __init__(self, msg, chain=None):
        if chain is not None:
            msg = f"chain {chain}: {msg}"
        super().__init__(msg)
        self.chain = chain


class GapError(RieszError, ValueError):
    """Eigenvalues do not have a positive uniform gap."""

    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class DecompositionError(RieszError, ValueError):
    """Eigenvalues cannot be grouped into separated balls of bounded size."""


class ClusterOverflowError(DecompositionError):
    def __init__(self, msg, members, size):
        super().__init__(msg)
        self.members = members
        self.size = size


class PoleError(RieszError, ArithmeticError):
    """Evaluation requested at (or numerically at) a pole."""


class InfeasibleError(RieszError, ValueError):
    """Requested interpolation bound is below the minimal feasible norm."""


class RecursionStepError(RieszError, ArithmeticError):
    """A Schur recursion step became numerically singular."""

    def __init__(self, msg, step):
        super().__init__(f"step {step}: {msg}")
        self.step = step


class ContourError(RieszError, ValueError):
    """Contour parameters are inadmissible for the operator at hand."""


class SpanError(RieszError, ValueError):
    """Chains do not span the ambient space."""


class ConditioningError(RieszError, ValueError):
    def __init__(self, msg, condition):
        super().__init__(msg)
        self.condition = condition


class ConvergenceError(RieszError, ArithmeticError):
    """An iterative method hit its iteration cap."""
