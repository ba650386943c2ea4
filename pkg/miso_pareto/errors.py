"""
Exception hierarchy for the MISO Pareto boundary toolkit.

Every error raised by the package derives from ``MisoParetoError`` so callers
(the CLI in particular) can map families of failures onto exit codes.
"""


class MisoParetoError(Exception):
    """Base class for all package errors."""


class DomainError(MisoParetoError, ValueError):
    """An input lies outside the domain of the operation."""


class ColinearChannels(DomainError):
    """Direct and crosstalk channels of one transmitter are (nearly) colinear."""


class OrthogonalChannels(DomainError):
    """Direct and crosstalk channels of one transmitter are (nearly) orthogonal."""


class DimensionMismatch(DomainError):
    """Vectors that must share the antenna count do not."""


class SingularAtZero(DomainError):
    """The evaluated expression has a pole at the origin."""


class AllZeroCoefficients(DomainError):
    """The polynomial is identically zero."""


class EmptyInput(DomainError):
    """An operation that needs at least one element received none."""


class DivisionByZero(DomainError):
    """A zero SINR target was passed where a strictly positive one is needed."""


class ConfigError(DomainError):
    """Invalid configuration file or environment override."""


class InfeasibleTarget(MisoParetoError):
    """The requested SINR/rate target cannot be met."""


class InfeasibleRadicand(InfeasibleTarget):
    """A square-root argument went negative beyond tolerance."""


class NoFeasibleRoot(MisoParetoError):
    """No root of the KKT cubic lies in the unit interval."""


class RedrawExhausted(MisoParetoError, RuntimeError):
    """Random channel generation kept violating the correlation margins."""
