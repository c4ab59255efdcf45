"""
Scenario presets.

``desk`` is the scaled-down scenario used by default and in CI; ``paper`` keeps the
full-scale dimensions of the reference system.
"""

from dataclasses import dataclass, field
from typing import Any

from thz_bgsr.config.scenario import ScenarioConfig


@dataclass
class ScenarioPreset:
    """Named set of ScenarioConfig overrides."""
    name: str
    description: str
    overrides: dict[str, Any] = field(default_factory=dict)
    notes: str = ""

    def build(self, **updates: Any) -> ScenarioConfig:
        """Validate the preset with optional extra overrides."""
        data = {**self.overrides, **updates}
        return ScenarioConfig.model_validate(data)


SCENARIO_PRESETS: dict[str, ScenarioPreset] = {
    "desk": ScenarioPreset(
        name="desk",
        description="Desk-scale MU link (N_R=16, K=16, M=8, U=2)",
        overrides={},
        notes="Model defaults; bounded CI runtimes",
    ),
    "paper": ScenarioPreset(
        name="paper",
        description="Full-scale MU link (N_R=48, K=64, M=20, U=3)",
        overrides={
            "num_users": 3,
            "tx_antennas_per_user": 4,
            "rx_antennas": 48,
            "tx_rf_chains": 2,
            "rx_rf_chains": 8,
            "subcarriers": 64,
            "pilot_blocks": 20,
            "pilots_per_block": 62,
            "delay_taps": 3,
            "nlos_clusters": 3,
            "diffuse_rays": 4,
            "grid_rx": 96,
            "grid_tx": 8,
            "psf_upsampling": 20,
            "gsmp_eps0": 2.0,
        },
        notes="Sensing tensor needs several hundred MB per trial",
    ),
}


def get_preset(name: str) -> ScenarioPreset | None:
    """Get a scenario preset by name."""
    return SCENARIO_PRESETS.get(name.lower())


def list_presets() -> list[str]:
    """List available preset names."""
    return list(SCENARIO_PRESETS.keys())
