"""Tests for scenario models, presets and config loading."""

import json
import math

import pytest
from pydantic import ValidationError

from tests.helpers import CONFIGS_DIR
from thz_bgsr.config import (
    Algorithm,
    ScenarioConfig,
    SweepAxis,
    SweepSpec,
    build_config,
    compute_config_hash,
    get_preset,
    list_presets,
    load_config,
    read_config_file,
    save_config,
)
from thz_bgsr.errors import ConfigError


class TestScenarioConfig:
    """Tests for ScenarioConfig validation and derived values."""

    def test_defaults_are_desk_preset(self):
        """The model defaults and the desk preset describe the same scenario."""
        assert get_preset("desk").build() == ScenarioConfig()

    def test_frame_length_invariant(self):
        """K must equal N_p + L - 1."""
        with pytest.raises(ValidationError, match="pilots_per_block"):
            ScenarioConfig(subcarriers=16, pilots_per_block=10, delay_taps=3)

    def test_rf_chain_limits(self):
        """RF chains cannot exceed antennas on either side."""
        with pytest.raises(ValidationError, match="rx_rf_chains"):
            ScenarioConfig(rx_antennas=4, rx_rf_chains=8, grid_rx=8)
        with pytest.raises(ValidationError, match="tx_rf_chains"):
            ScenarioConfig(tx_antennas_per_user=2, tx_rf_chains=3)

    def test_grid_must_cover_array(self):
        """Grids smaller than the array are rejected."""
        with pytest.raises(ValidationError, match="grid_rx"):
            ScenarioConfig(grid_rx=8)

    @pytest.mark.parametrize("value", ["inf", "Infinity", math.inf])
    def test_adc_bits_infinite(self, value):
        """Every spelling of infinity maps to an unquantized receiver."""
        cfg = ScenarioConfig(adc_bits=value)
        assert cfg.adc_bits == "inf"
        assert math.isinf(cfg.adc_resolution)

    def test_adc_bits_string_integer(self):
        """Numeric strings are accepted as bit counts."""
        assert ScenarioConfig(adc_bits="4").adc_resolution == 4.0

    @pytest.mark.parametrize("value", [0, -1, 2.5, "many"])
    def test_adc_bits_invalid(self, value):
        """Zero, negative, fractional and non-numeric resolutions are rejected."""
        with pytest.raises(ValidationError):
            ScenarioConfig(adc_bits=value)

    def test_psk_order_must_be_power_of_two(self):
        """PSK orders outside 2..64 powers of two are rejected."""
        with pytest.raises(ValidationError, match="psk_order"):
            ScenarioConfig(psk_order=6)

    def test_with_snr(self):
        """with_snr sets noise_var = 10^(-SNR/10) and round-trips through snr_db."""
        cfg = ScenarioConfig().with_snr(10.0)
        assert cfg.noise_var == pytest.approx(0.1)
        assert cfg.snr_db == pytest.approx(10.0)

    def test_with_updates_revalidates(self):
        """with_updates re-runs the model validators."""
        with pytest.raises(ValidationError):
            ScenarioConfig().with_updates(subcarriers=20)

    def test_gsmp_threshold_rescaled(self):
        """Unset eps0 scales with M * N_RF_R * K; an explicit value wins."""
        cfg = ScenarioConfig()
        rows = cfg.pilot_blocks * cfg.rx_rf_chains * cfg.subcarriers
        assert cfg.gsmp_threshold == pytest.approx(2.0 * rows / (20 * 8 * 64))
        assert ScenarioConfig(gsmp_eps0=0.5).gsmp_threshold == 0.5

    def test_derived_dimensions(self):
        """Derived sizes follow from the base fields."""
        cfg = ScenarioConfig()
        assert cfg.total_tx_antennas == cfg.num_users * cfg.tx_antennas_per_user
        assert cfg.measurement_rows == cfg.pilot_blocks * cfg.rx_rf_chains
        assert cfg.sampling_period == pytest.approx(1.0 / cfg.bandwidth_hz)
        assert cfg.tx_gain_per_user == pytest.approx(cfg.tx_gain / cfg.num_users)


class TestSweepSpec:
    """Tests for SweepSpec."""

    def test_snr_axis_needs_points(self):
        """An SNR sweep without SNR points is rejected."""
        with pytest.raises(ValidationError, match="snr_db_list"):
            SweepSpec(snr_db_list=[])

    def test_other_axes_need_values(self):
        """Non-SNR axes need sweep_values."""
        with pytest.raises(ValidationError, match="sweep_values"):
            SweepSpec(sweep_axis=SweepAxis.PILOT_BLOCKS)

    def test_points(self):
        """points() returns the values of the chosen axis."""
        assert SweepSpec(snr_db_list=[0.0, 5.0]).points() == [0.0, 5.0]
        spec = SweepSpec(sweep_axis=SweepAxis.USERS, sweep_values=[1, 2, 3])
        assert spec.points() == [1.0, 2.0, 3.0]

    def test_duplicate_algorithms_collapsed(self):
        """Repeated algorithms run once, in first-seen order."""
        spec = SweepSpec(algorithms=["gsmp", "bgsr", "gsmp"])
        assert spec.algorithms == [Algorithm.GSMP, Algorithm.BGSR]

    def test_empty_algorithms_rejected(self):
        """At least one estimator must be requested."""
        with pytest.raises(ValidationError):
            SweepSpec(algorithms=[])


class TestPresets:
    """Tests for scenario presets."""

    def test_presets_listed(self):
        """Both presets are registered."""
        assert set(list_presets()) == {"desk", "paper"}

    def test_full_preset_is_valid(self):
        """The full-scale preset satisfies every invariant."""
        cfg = get_preset("paper").build()
        assert cfg.subcarriers == cfg.pilots_per_block + cfg.delay_taps - 1
        assert cfg.rx_antennas == 48
        assert cfg.num_users == 3

    def test_lookup_is_case_insensitive(self):
        """Preset names match regardless of case."""
        assert get_preset("DESK") is get_preset("desk")
        assert get_preset("nonexistent") is None


class TestLoadConfig:
    """Tests for config file loading."""

    def test_empty_file_gives_desk_defaults(self, tmp_path):
        """An empty config file yields the desk scenario."""
        path = tmp_path / "empty.json"
        path.write_text("")
        loaded = load_config(path)
        assert loaded.scenario == ScenarioConfig()
        assert loaded.preset == "desk"

    def test_unknown_key_rejected(self, tmp_path):
        """Unknown keys raise ConfigError naming the key."""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"num_userz": 3}))
        with pytest.raises(ConfigError) as exc_info:
            load_config(path)
        assert "num_userz" in exc_info.value.keys

    def test_frame_length_error_names_all_keys(self):
        """A K mismatch reports subcarriers, pilots_per_block and delay_taps."""
        with pytest.raises(ConfigError) as exc_info:
            build_config({"subcarriers": 16, "pilots_per_block": 10})
        message = str(exc_info.value)
        for key in ("subcarriers", "pilots_per_block", "delay_taps"):
            assert key in message

    def test_field_error_names_key(self):
        """Field-level violations carry the offending key."""
        with pytest.raises(ConfigError) as exc_info:
            build_config({"trials": 0})
        assert "trials" in exc_info.value.keys

    def test_nested_tables_rejected(self, tmp_path):
        """Config files must be flat."""
        path = tmp_path / "nested.toml"
        path.write_text("[scenario]\nnum_users = 2\n")
        with pytest.raises(ConfigError, match="flat"):
            read_config_file(path)

    def test_missing_file(self, tmp_path):
        """A missing file raises ConfigError."""
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "missing.json")

    def test_unparseable_file(self, tmp_path):
        """Malformed JSON raises ConfigError."""
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError, match="Could not parse"):
            load_config(path)

    def test_unknown_preset(self):
        """Unknown preset names raise ConfigError."""
        with pytest.raises(ConfigError, match="Unknown preset"):
            build_config({}, preset="huge")

    def test_precedence(self, tmp_path):
        """Preset < file < overrides; unset overrides are ignored."""
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps({"preset": "paper", "trials": 5, "noise_var": 0.5}))
        loaded = load_config(path, overrides={"trials": 2, "rng_seed": None})
        assert loaded.scenario.rx_antennas == 48
        assert loaded.scenario.noise_var == 0.5
        assert loaded.sweep.trials == 2
        assert loaded.scenario.rng_seed == 0

    def test_explicit_preset_overrides_file(self, tmp_path):
        """A preset argument replaces the file's preset key."""
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps({"preset": "paper"}))
        assert load_config(path, preset="desk").scenario == ScenarioConfig()

    @pytest.mark.parametrize("suffix", [".json", ".toml"])
    def test_save_and_reload(self, tmp_path, suffix):
        """save_config output loads back to the same scenario and sweep."""
        cfg = get_preset("paper").build(adc_bits="inf", noise_var=0.25)
        sweep = SweepSpec(snr_db_list=[-5.0, 5.0], trials=3, algorithms=["bgsr", "omp"])
        path = tmp_path / f"scenario{suffix}"
        save_config(path, cfg, sweep)

        loaded = load_config(path)
        assert loaded.scenario == cfg
        assert loaded.sweep == sweep

    def test_sample_configs_load(self):
        """Every shipped config except the known-bad frame example loads."""
        for path in sorted(CONFIGS_DIR.glob("*")):
            if path.name == "gotcha-frame-length.json":
                with pytest.raises(ConfigError):
                    load_config(path)
                continue
            assert load_config(path).sweep.trials >= 1


class TestConfigHash:
    """Tests for compute_config_hash."""

    def test_stable(self):
        """Equal configs hash equally."""
        a = compute_config_hash(ScenarioConfig(), SweepSpec())
        b = compute_config_hash(ScenarioConfig(), SweepSpec())
        assert a == b
        assert len(a) == 12

    def test_sensitive_to_scenario_and_sweep(self):
        """Changing a scenario or sweep field changes the hash."""
        base = compute_config_hash(ScenarioConfig(), SweepSpec())
        assert compute_config_hash(ScenarioConfig(rng_seed=1), SweepSpec()) != base
        assert compute_config_hash(ScenarioConfig(), SweepSpec(trials=3)) != base

    def test_ignores_execution_settings(self):
        """Worker count, output path and runtime recording do not change results."""
        base = compute_config_hash(ScenarioConfig(), SweepSpec())
        spec = SweepSpec(workers=4, output_path="out.csv", record_runtime=True)
        assert compute_config_hash(ScenarioConfig(), spec) == base
