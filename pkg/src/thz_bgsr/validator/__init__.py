"""
Pre-flight validation for scenario configs.

Catches problems before a sweep starts:
- Parse errors, unknown keys and scenario invariants
- Sensing tensor memory footprint
- Known pitfalls (infeasible angle separation, coarse grids, degenerate TBoD)
"""

from thz_bgsr.validator.checks import SCENARIO_CHECKS, ScenarioCheck, check_scenario
from thz_bgsr.validator.core import ValidationResults, format_results, validate_scenario
from thz_bgsr.validator.memory import estimate_memory_requirements, estimate_sensing_bytes
from thz_bgsr.validator.types import Severity, ValidationResult, blocking_error

__all__ = [
    # Core validation
    "validate_scenario",
    "ValidationResult",
    "ValidationResults",
    "Severity",
    "blocking_error",
    "format_results",
    # Checks
    "SCENARIO_CHECKS",
    "ScenarioCheck",
    "check_scenario",
    # Memory
    "estimate_memory_requirements",
    "estimate_sensing_bytes",
]
