"""Exception hierarchy shared by the numerical core and the experiment runner."""


class TailBoundsError(Exception):
    """Base class for every error raised by pytailbounds."""


class DomainError(TailBoundsError, ValueError):
    """An argument lies outside the domain of the operation."""


class InfiniteMomentError(TailBoundsError, ArithmeticError):
    """The requested moment does not exist for the model."""


class BracketError(TailBoundsError, ArithmeticError):
    """No minimizing bracket was found (the exponent is not convex as assumed)."""


class PreconditionError(TailBoundsError, ValueError):
    """The model does not satisfy the hypothesis an operation depends on."""


class ConfigError(TailBoundsError):
    """Experiment configuration is malformed or inconsistent."""
