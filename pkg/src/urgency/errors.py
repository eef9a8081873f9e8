"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
NumericError -> 4.
"""


class UrgencyError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(UrgencyError):
    """Invalid configuration: bad flag combinations, unmapped columns, ..."""


class DataError(UrgencyError):
    """Malformed or invalid input data (CSV parse errors, bad labels, ...)."""


class NumericError(UrgencyError):
    """Numerical failure during model fitting (non-finite loss, ...)."""
