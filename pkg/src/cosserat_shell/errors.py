"""Exception hierarchy.

The CLI maps the three families to exit codes: ConfigError -> 2,
DomainError -> 3, NumericalError -> 4.
"""


class ShellError(Exception):
    """Base class for all library errors."""


class ConfigError(ShellError):
    """Malformed or incomplete scenario configuration."""


class DomainError(ShellError):
    """Inputs outside the geometric domain of validity."""


class NumericalError(ShellError):
    """A numerical procedure could not produce a trustworthy result."""


class DegenerateParametrization(DomainError):
    pass


class ThicknessExceedsCurvature(DomainError):
    """The shifter b(x3) = 1 - 2H x3 + K x3^2 is not positive."""


class StructureViolation(DomainError):
    """A tensor lacks the tangential column structure an identity requires."""


class NotSkew(NumericalError):
    pass


class Singular(NumericalError):
    pass


class InconsistentRotationDerivative(NumericalError):
    """Supplied rotation derivative is not tangent to SO(3) at the rotation."""


class LineSearchFailure(NumericalError):
    pass
