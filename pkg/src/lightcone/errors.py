"""Exception hierarchy shared across the package."""


class LightconeError(Exception):
    """Base class for all errors raised by this package."""


class ExpressionSyntaxError(LightconeError):
    """Malformed expression text; carries the character position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownIdentifier(LightconeError):
    """Identifier is neither a variable nor a known function."""


class VariableOutOfRange(LightconeError):
    """Variable index outside the declared arity."""


class DomainError(LightconeError):
    """Evaluation outside the mathematical domain (division by ~0, log/sqrt
    of a nonpositive value, non-finite result)."""

    def __init__(self, message, point=None):
        if point is not None:
            message = f"{message} at point {tuple(point)}"
        super().__init__(message)
        self.point = point


class DegenerateMetric(LightconeError):
    """|det g| below the nondegeneracy threshold."""


class WrongSignature(LightconeError):
    """Metric eigenvalue signature at the base point is not (-,+,...,+)."""


class ZeroVector(LightconeError):
    """Causal character of the zero vector is undefined."""


class GeodesicFailure(LightconeError):
    """Metric became degenerate mid-integration; carries the partial path."""

    def __init__(self, message, partial_path, t_failure):
        super().__init__(f"{message} (t = {t_failure})")
        self.partial_path = partial_path
        self.t_failure = t_failure


class IdentityViolation(LightconeError):
    """Structural identity of the axis decomposition violated (would
    indicate an evaluation bug, not bad input)."""


class SingularC(LightconeError):
    """|C| = |1 - sum b_i^2| below threshold: the ODE normal form is not
    valid in this part of state space."""

    def __init__(self, message, y=None, partial=None):
        super().__init__(message)
        self.y = y
        self.partial = partial


class NotLightLike(LightconeError):
    """The supplied tangent direction is not light-like."""


class ReGraphFailure(LightconeError):
    """The transformed surface could not be re-expressed as a graph."""


class ConfigError(LightconeError):
    """Invalid run configuration."""
