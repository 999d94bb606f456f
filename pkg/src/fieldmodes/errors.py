"""Exception hierarchy shared by every module of the package."""


class FieldModesError(Exception):
    """Base class for all errors raised by fieldmodes."""


class DomainError(FieldModesError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(FieldModesError, ArithmeticError):
    """A series did not reach its tolerance within the term budget."""


class QuadratureError(FieldModesError, ArithmeticError):
    """A numerical integral did not reach its tolerance within budget."""


class IRDivergenceError(FieldModesError, ArithmeticError):
    """The massless field in one spatial dimension has divergent correlators."""


class UnsupportedConfigurationError(FieldModesError, ValueError):
    """The closed-form path does not cover the requested configuration."""


class CommutatorError(FieldModesError, ValueError):
    """The smeared operators of a mode set are not canonically normalized."""


class DegeneracyError(FieldModesError, ArithmeticError):
    """Symplectic eigenvalues could not be paired within tolerance."""


class NoThresholdError(FieldModesError, ArithmeticError):
    """No entangling mixing strength exists in the search bracket."""


class UnknownExperimentError(FieldModesError, KeyError):
    """The requested experiment is not registered."""


class ConfigError(FieldModesError, ValueError):
    """A run configuration or mode-list file could not be parsed."""
