"""Exception hierarchy shared across the package."""


class MittagError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MittagError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedRegionError(MittagError):
    """No evaluation method applies to the requested parameter region."""


class ConvergenceError(MittagError):
    """A series, quadrature or iteration budget was exhausted."""


class EvaluationOverflow(MittagError, OverflowError):
    """A result (or a mandatory intermediate) exceeds the floating range.

    Raised instead of silently returning ``inf``.
    """


class BracketError(MittagError):
    """A root bracket could not be established or failed its sign check."""
