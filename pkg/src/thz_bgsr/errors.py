"""
Error hierarchy for thz-bgsr.

The CLI maps ConfigError to exit code 2 and NumericalError to exit code 3.
"""


class ThzBgsrError(Exception):
    """Base class for all thz-bgsr errors."""


class InputError(ThzBgsrError, ValueError):
    """Invalid argument value or inconsistent array dimensions."""


class ConfigError(ThzBgsrError):
    """Scenario or sweep configuration is invalid.

    Attributes:
        keys: Config keys involved in the violation, if known.
    """

    def __init__(self, message: str, keys: tuple[str, ...] = ()):
        super().__init__(message)
        self.keys = keys


class NumericalError(ThzBgsrError):
    """A factorization or solve failed.

    Attributes:
        condition: Estimated condition number of the offending matrix, if available.
    """

    def __init__(self, message: str, condition: float | None = None):
        if condition is not None:
            message = f"{message} (condition number ≈ {condition:.3e})"
        super().__init__(message)
        self.condition = condition
