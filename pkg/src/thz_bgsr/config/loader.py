"""
Config file loading and saving.

Config files are flat tables whose keys are ScenarioConfig and SweepSpec field names,
plus an optional ``preset`` key. JSON and TOML are both accepted.
"""

import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import tomli
import tomli_w
from pydantic import ValidationError

from thz_bgsr.config.presets import get_preset, list_presets
from thz_bgsr.config.scenario import ScenarioConfig, SweepSpec
from thz_bgsr.errors import ConfigError

logger = logging.getLogger(__name__)

SCENARIO_KEYS = frozenset(ScenarioConfig.model_fields)
SWEEP_KEYS = frozenset(SweepSpec.model_fields)


@dataclass(frozen=True)
class LoadedConfig:
    """Validated scenario and sweep, plus provenance."""
    scenario: ScenarioConfig
    sweep: SweepSpec
    preset: str
    config_hash: str


def read_config_file(path: Path) -> dict[str, Any]:
    """
    Parse a flat JSON or TOML config file.

    Args:
        path: Config file path (``.toml`` is parsed as TOML, anything else as JSON)

    Returns:
        Raw key/value mapping (empty for an empty file)
    """
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")

    text = path.read_text(encoding="utf-8")
    if not text.strip():
        return {}

    try:
        if path.suffix.lower() == ".toml":
            data = tomli.loads(text)
        else:
            data = json.loads(text)
    except (tomli.TOMLDecodeError, json.JSONDecodeError) as e:
        raise ConfigError(f"Could not parse {path}: {e}")

    if not isinstance(data, dict):
        raise ConfigError(f"Config root must be a table of keys, got {type(data).__name__}")

    nested = [key for key, value in data.items() if isinstance(value, dict)]
    if nested:
        raise ConfigError(
            f"Config keys must be flat; nested tables found: {', '.join(nested)}",
            keys=tuple(nested),
        )
    return data


def build_config(
    data: dict[str, Any],
    preset: str | None = None,
) -> LoadedConfig:
    """
    Validate raw keys on top of a preset.

    Args:
        data: Flat key/value mapping (file contents plus CLI overrides)
        preset: Preset name; falls back to ``data["preset"]`` and then ``desk``

    Returns:
        LoadedConfig
    """
    data = dict(data)
    file_preset = data.pop("preset", None)
    preset_name = preset or file_preset or "desk"

    base = get_preset(str(preset_name))
    if base is None:
        raise ConfigError(
            f"Unknown preset '{preset_name}'. Available: {', '.join(list_presets())}",
            keys=("preset",),
        )

    unknown = sorted(set(data) - SCENARIO_KEYS - SWEEP_KEYS)
    if unknown:
        raise ConfigError(f"Unknown config key(s): {', '.join(unknown)}", keys=tuple(unknown))

    scenario_data = {**base.overrides, **{k: v for k, v in data.items() if k in SCENARIO_KEYS}}
    sweep_data = {k: v for k, v in data.items() if k in SWEEP_KEYS}

    scenario = _validate(ScenarioConfig, scenario_data)
    sweep = _validate(SweepSpec, sweep_data)

    config_hash = compute_config_hash(scenario, sweep)
    logger.debug("Loaded config preset=%s hash=%s", base.name, config_hash)
    return LoadedConfig(scenario=scenario, sweep=sweep, preset=base.name, config_hash=config_hash)


def load_config(
    path: Path | None,
    preset: str | None = None,
    overrides: dict[str, Any] | None = None,
) -> LoadedConfig:
    """
    Load, merge and validate a config file.

    Precedence is preset < file < overrides. Unset fields take the preset values.

    Args:
        path: Config file, or None to use the preset alone
        preset: Preset name overriding any ``preset`` key in the file
        overrides: Extra keys (e.g. from CLI options)

    Returns:
        LoadedConfig

    Raises:
        ConfigError: Missing file, parse failure, unknown keys or invariant violations
    """
    data = read_config_file(path) if path is not None else {}
    if overrides:
        data.update({k: v for k, v in overrides.items() if v is not None})
    return build_config(data, preset=preset)


def compute_config_hash(scenario: ScenarioConfig, sweep: SweepSpec) -> str:
    """Stable short hash of the merged scenario and sweep."""
    payload = {
        "scenario": scenario.model_dump(mode="json"),
        "sweep": sweep.model_dump(mode="json", exclude={"output_path", "workers", "record_runtime"}),
    }
    content = json.dumps(payload, sort_keys=True)
    return hashlib.sha256(content.encode()).hexdigest()[:12]


def flat_config(scenario: ScenarioConfig, sweep: SweepSpec | None = None) -> dict[str, Any]:
    """Flat JSON-compatible mapping of a scenario (and sweep), dropping unset optionals."""
    data = scenario.model_dump(mode="json", exclude_none=True)
    if sweep is not None:
        data.update(sweep.model_dump(mode="json", exclude_none=True))
    return data


def save_config(path: Path, scenario: ScenarioConfig, sweep: SweepSpec | None = None) -> None:
    """
    Write a flat config file.

    Args:
        path: Destination; ``.toml`` writes TOML, anything else JSON
        scenario: Scenario to write
        sweep: Optional sweep to include
    """
    data = flat_config(scenario, sweep)
    if path.suffix.lower() == ".toml":
        with open(path, "wb") as f:
            tomli_w.dump(data, f)
    else:
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _validate(model: type[Any], data: dict[str, Any]) -> Any:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        keys: list[str] = []
        messages: list[str] = []
        for err in e.errors():
            loc = ".".join(str(part) for part in err["loc"])
            if loc:
                keys.append(loc)
            messages.append(f"{loc or model.__name__}: {err['msg']}")
        raise ConfigError("; ".join(messages), keys=tuple(keys))
