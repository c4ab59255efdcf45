"""
Scenario configuration: models, presets and file loading.
"""

from thz_bgsr.config.loader import (
    LoadedConfig,
    build_config,
    compute_config_hash,
    flat_config,
    load_config,
    read_config_file,
    save_config,
)
from thz_bgsr.config.presets import SCENARIO_PRESETS, ScenarioPreset, get_preset, list_presets
from thz_bgsr.config.scenario import (
    Algorithm,
    AngleDistribution,
    AngleMode,
    DictionaryFrequency,
    DictionaryMode,
    NoiseCovarianceMode,
    PulseKind,
    ScenarioConfig,
    SweepAxis,
    SweepSpec,
)

__all__ = [
    # Models
    "ScenarioConfig",
    "SweepSpec",
    "Algorithm",
    "AngleDistribution",
    "AngleMode",
    "DictionaryFrequency",
    "DictionaryMode",
    "NoiseCovarianceMode",
    "PulseKind",
    "SweepAxis",
    # Presets
    "SCENARIO_PRESETS",
    "ScenarioPreset",
    "get_preset",
    "list_presets",
    # Loading
    "LoadedConfig",
    "build_config",
    "compute_config_hash",
    "flat_config",
    "load_config",
    "read_config_file",
    "save_config",
]
