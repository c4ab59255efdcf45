"""
Validation findings for scenario configs.

A finding names the scenario keys it concerns, so blocking findings turn into a
ConfigError carrying the same keys as a schema violation would.
"""

from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

from thz_bgsr.errors import ConfigError


class Severity(Enum):
    """ERROR blocks run and bcrb; WARNING fails ``validate --strict``."""
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"
    SUCCESS = "success"


@dataclass(frozen=True)
class ValidationResult:
    """
    One finding about a scenario or sweep.

    Attributes:
        check: Check identifier, e.g. ``gmm-separation``
        severity: How bad it is
        message: Short headline
        details: What was detected
        fix: Recommended change
        keys: Scenario or sweep keys the finding is about
    """
    check: str
    severity: Severity
    message: str
    details: str | None = None
    fix: str | None = None
    keys: tuple[str, ...] = ()

    @property
    def blocks_sweep(self) -> bool:
        return self.severity == Severity.ERROR

    def describe(self) -> str:
        """Headline, details and keys on one line."""
        text = self.message if self.details is None else f"{self.message}: {self.details}"
        return f"{text} [{', '.join(self.keys)}]" if self.keys else text


def blocking_error(results: Iterable[ValidationResult]) -> ConfigError | None:
    """Fold every blocking finding into one ConfigError; None when nothing blocks."""
    blocking = [r for r in results if r.blocks_sweep]
    if not blocking:
        return None
    keys = tuple(dict.fromkeys(key for r in blocking for key in r.keys))
    return ConfigError("; ".join(r.describe() for r in blocking), keys=keys)
