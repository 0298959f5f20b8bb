"""Exception hierarchy shared by all switchsim modules."""


class SwitchSimError(Exception):
    """Base class for every error raised by switchsim."""


class ConfigError(SwitchSimError, ValueError):
    """Malformed or inconsistent configuration; ``path`` names the offending field."""

    def __init__(self, message, path=None):
        self.path = path
        self.detail = message
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class DivergentTail(SwitchSimError, ValueError):
    """The law has an infinite mean, so its integrated tail diverges."""


class Unsupported(SwitchSimError, NotImplementedError):
    """Operation not available for this law (e.g. mgf derivative of a heavy tail)."""


class NumericalError(SwitchSimError, ArithmeticError):
    """Base class for numerical failures (mapped to CLI exit code 4)."""


class NoConvergence(NumericalError):
    """An iterative routine ran out of budget.

    ``value`` and ``error`` carry the last partial result when one exists.
    """

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class QuadratureNoConvergence(NoConvergence):
    """Escalating switch-law quadrature did not settle; carries the last two levels."""

    def __init__(self, message, previous=None, last=None):
        super().__init__(message, value=last,
                         error=None if previous is None or last is None else abs(last - previous))
        self.previous = previous
        self.last = last


class NoBracket(NumericalError):
    """Root finder was handed an interval without a sign change."""


class NoAdjustmentCoefficient(NumericalError):
    """The Lundberg equation has no positive root on the admissible interval."""


class ThetaZero(NumericalError):
    """theta vanishes, so the subexponential theorem for the union probability does not apply."""


class NotRegVarying(SwitchSimError, ValueError):
    """The model is not in the regularly varying (or dominated-mixed) regime."""


class NetProfitViolated(SwitchSimError, ValueError):
    """Some server receives at least as much work per unit time as it can process."""

    def __init__(self, message, server=None, excess=None):
        super().__init__(message)
        self.server = server
        self.excess = excess
