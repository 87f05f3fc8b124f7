"""Exception hierarchy shared by every nsdiv module."""


class NsdivError(Exception):
    """Base class; the CLI maps any subclass to a nonzero exit."""


class DomainError(NsdivError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(NsdivError, OverflowError):
    """Fixed-point value does not fit its format. Never saturated silently."""


class FormatMismatchError(NsdivError, ValueError):
    """Operands of an add/sub do not share a binary point."""


class ConfigError(NsdivError, ValueError):
    """Invalid configuration: unsupported degree, empty grid, bad flags."""


class FactoringError(NsdivError, ValueError):
    """Polynomial does not have the shape a factorization relies on."""


class NumericalError(NsdivError, ArithmeticError):
    """Numerical breakdown, e.g. a rank-deficient least-squares system."""
