"""Exception types raised across the package."""


class NBSpecError(Exception):
    """Base class for all package errors."""


class DegenerateScale(NBSpecError, ValueError):
    """alpha = (n-1)p - 1 is not positive, so the rescaled operators do not exist."""


class MinDegreeTooLow(NBSpecError, ValueError):
    pass


class GraphDisconnected(MinDegreeTooLow):
    pass


class TooLarge(NBSpecError, ValueError):
    pass


class NotSymmetric(NBSpecError, ValueError):
    pass


class NoConvergence(NBSpecError, ArithmeticError):
    pass


class DegenerateEigenvalue(NBSpecError, ArithmeticError):
    """lambda_i^2 is numerically 4, so the pair mu_{2i-1}, mu_{2i} collapses."""

    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"eigenvalue {index} = {value!r} has lambda^2 within tolerance of 4")


class SingularY(NBSpecError, ArithmeticError):
    pass


class HypothesisViolated(NBSpecError, ValueError):
    pass


class ConfigInvalid(NBSpecError, ValueError):
    pass


class EmitError(NBSpecError, OSError):
    pass
