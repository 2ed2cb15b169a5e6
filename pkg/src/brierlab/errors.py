"""Exception types shared across the package."""


class BrierLabError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(BrierLabError, ValueError):
    """An input value violates its domain (probability range, binary outcome, ...)."""


class DimensionError(ValidationError):
    """Paired vectors have mismatched lengths."""


class InsufficientPoolError(ValidationError):
    """An empirical probability pool is too small for the requested subsample."""


class EnumerationBudgetError(BrierLabError):
    """Exhaustive enumeration was requested beyond the supported vector length."""


class ConfigError(BrierLabError, ValueError):
    """A study configuration document is malformed; the message names the field."""
