"""Exceptions raised by the package.

The CLI maps each family onto an exit code:

    InputError       -> 2 (unreadable or malformed count data)
    ValidationError  -> 3 (values outside their physical domain)
    StatisticsError  -> 4 (data that leaves an estimator undefined)
"""


class QutritCorrelationError(Exception):
    """Root of every error raised on purpose by this package."""

    exit_code = 1


class InputError(QutritCorrelationError):
    exit_code = 2


class ParseError(InputError, ValueError):
    """A file could not be parsed."""


class ShapeError(InputError, ValueError):
    """A matrix does not have the expected shape."""


class EmptyMatrix(InputError, ValueError):
    """A count matrix has zero total counts."""


class ValidationError(QutritCorrelationError, ValueError):
    exit_code = 3


class NormalizationError(ValidationError):
    """Schmidt coefficients whose squares do not sum to one."""


class NegativeCoefficient(ValidationError):
    pass


class DomainError(ValidationError):
    """An argument lies outside the domain of the operation."""


class DimensionError(ValidationError):
    pass


class BoundaryError(ValidationError):
    """A closed-form expression was evaluated on the boundary of its domain."""


class InsufficientSpan(ValidationError):
    """A profile is sampled over less than one fringe period."""


class ConfigError(ValidationError):
    pass


class MatchingIndexError(ValidationError, IndexError):
    """An outcome matching refers to invalid or repeated cells."""


class StatisticsError(QutritCorrelationError, ValueError):
    exit_code = 4


class DegenerateVariance(StatisticsError):
    """A marginal has (numerically) zero variance, so the PCC is undefined."""
