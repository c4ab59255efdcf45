"""
thz-bgsr: Multi-user THz dual-wideband channel estimation under low-resolution ADCs.

Provides the channel and front-end simulators, sparse estimators (BGSR, GSMP, OMP,
SBL), the Bayesian CRB and a Monte Carlo sweep harness.
"""

__version__ = "0.1.0"

from thz_bgsr.config import ScenarioConfig, SweepSpec, load_config
from thz_bgsr.errors import ConfigError, InputError, NumericalError, ThzBgsrError
from thz_bgsr.harness import run_sweep
from thz_bgsr.validator import validate_scenario

__all__ = [
    "ScenarioConfig",
    "SweepSpec",
    "load_config",
    "run_sweep",
    "validate_scenario",
    "ThzBgsrError",
    "ConfigError",
    "InputError",
    "NumericalError",
]
