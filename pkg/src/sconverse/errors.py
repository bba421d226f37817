"""Exception hierarchy shared by all modules."""


class ConverseError(Exception):
    """Base class for every error raised by this package."""


class StructureError(ConverseError, ValueError):
    """Alphabet mismatch, malformed shapes, or invalid probability vectors."""


class DomainError(ConverseError, ValueError):
    """A scalar argument lies outside its admissible range."""


class UndefinedTiltError(ConverseError):
    """The absolutely continuous part of a measure has zero mass."""


class DivergenceInfiniteError(ConverseError):
    """A divergence required to be finite evaluated to infinity."""


class ConvergenceError(ConverseError):
    """An iterative solver gave up before reaching its tolerance."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class RegimeError(ConverseError):
    """The requested rate lies outside the regime where a result applies."""


class DegenerateVarianceError(ConverseError):
    """The log-likelihood ratio has zero variance under the tilted measure."""


class HypothesisError(ConverseError):
    """A stated hypothesis of a bound (e.g. a parameter window) is violated."""

    def __init__(self, message, window=None):
        super().__init__(message)
        self.window = window


class CapacityError(ConverseError):
    """An exact enumeration would exceed the configured size cap."""
