"""Exception types shared across the package."""


class ClusterMapsError(Exception):
    pass


class NvarsMismatch(ClusterMapsError, ValueError):
    pass


class DivisionByZero(ClusterMapsError, ZeroDivisionError):
    pass


class NotDivisible(ClusterMapsError, ArithmeticError):
    """Exact division left a nonzero remainder."""


class PoleAtPoint(ClusterMapsError, ZeroDivisionError):
    """A negative power of a variable was evaluated at zero."""


class NotPeriodic(ClusterMapsError, ValueError):
    pass


class InvalidQuiver(ClusterMapsError, ValueError):
    pass


class ParameterConstraint(ClusterMapsError, ValueError):
    pass


class ZeroDivisorAt(ClusterMapsError, ZeroDivisionError):
    """Numeric iteration hit a zero divisor; ``index`` is the 1-based term index."""

    def __init__(self, index: int, orbit=None):
        super().__init__(f"zero divisor while computing term {index}")
        self.index = index
        self.orbit = orbit


class LaurentViolationAt(ClusterMapsError, ArithmeticError):
    def __init__(self, index: int):
        super().__init__(f"term {index} is not a Laurent polynomial")
        self.index = index


class ResourceLimit(ClusterMapsError, RuntimeError):
    pass


class SingularSystem(ClusterMapsError, ArithmeticError):
    pass


class ReexpressionFailure(ClusterMapsError, ArithmeticError):
    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual
