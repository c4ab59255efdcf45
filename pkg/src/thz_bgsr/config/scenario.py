"""
Scenario and sweep models.

ScenarioConfig holds every system, channel, pilot and algorithm parameter of one
simulated link. SweepSpec describes which Monte Carlo experiment to run over it.
Both are flat pydantic models so a config file is a single table of keys.
"""

import math
from enum import Enum
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Reference dimensions (M * N_RF_R * K) the GSMP threshold default was tuned for.
GSMP_REFERENCE_ROWS = 20 * 8 * 64
GSMP_REFERENCE_EPS0 = 2.0


class PulseKind(str, Enum):
    """Pulse-shaping filter family."""
    RRC = "rrc"
    RECT = "rect"


class AngleMode(str, Enum):
    """How path angles are generated."""
    GMM = "gmm"
    ON_GRID = "on_grid"
    OFF_GRID = "off_grid"


class AngleDistribution(str, Enum):
    """Kernel of the per-user angle mixture."""
    GAUSSIAN = "gaussian"
    LAPLACIAN = "laplacian"


class DictionaryMode(str, Enum):
    """Sparsifying dictionary construction."""
    ON_GRID = "on_grid"
    TBOD = "tbod"


class DictionaryFrequency(str, Enum):
    """Frequency at which dictionary manifolds are evaluated."""
    SUBCARRIER = "subcarrier"
    CARRIER = "carrier"


class NoiseCovarianceMode(str, Enum):
    """Noise covariance handed to the estimators."""
    ANALYTIC = "analytic"
    SAMPLED = "sampled"


class Algorithm(str, Enum):
    """Estimators the harness can run."""
    BGSR = "bgsr"
    GSMP = "gsmp"
    OMP = "omp"
    SBL = "sbl"
    GENIE = "genie"


class SweepAxis(str, Enum):
    """Scenario parameter varied across sweep points."""
    SNR = "snr"
    PILOT_BLOCKS = "pilot_blocks"
    USERS = "users"
    ADC_BITS = "adc_bits"
    SUBCARRIERS = "subcarriers"
    DIFFUSE_RAYS = "diffuse_rays"


AdcBits = int | Literal["inf"]


class ScenarioConfig(BaseModel):
    """
    All parameters of one multi-user THz link.

    Defaults are the desk-scale preset. Gains are linear; angles are in degrees.
    """

    model_config = ConfigDict(extra="forbid", frozen=True, use_enum_values=False)

    # Array and RF chain dimensions
    num_users: int = Field(2, ge=1)
    tx_antennas_per_user: int = Field(2, ge=1)
    rx_antennas: int = Field(16, ge=1)
    tx_rf_chains: int = Field(1, ge=1)
    rx_rf_chains: int = Field(4, ge=1)

    # Frame structure
    subcarriers: int = Field(16, ge=1)
    pilot_blocks: int = Field(8, ge=1)
    pilots_per_block: int = Field(14, ge=1)
    delay_taps: int = Field(3, ge=1)

    # Propagation
    nlos_clusters: int = Field(2, ge=0)
    diffuse_rays: int = Field(2, ge=1)
    include_los: bool = True
    carrier_hz: float = Field(0.65e12, gt=0)
    bandwidth_hz: float = Field(5e9, gt=0)
    distance_m: float = Field(15.0, gt=0)
    tx_gain: float = Field(10 ** 3.1, gt=0)
    rx_gain: float = Field(10 ** 3.1, gt=0)
    absorption_per_m: float = Field(0.05, ge=0)
    absorption_table: Path | None = None
    materials_table: Path | None = None

    # Pulse shaping
    psf_kind: PulseKind = PulseKind.RRC
    rrc_rolloff: float = Field(0.8, ge=0, le=1)
    psf_upsampling: int | None = Field(None, ge=1)

    # Angles
    angle_mode: AngleMode = AngleMode.GMM
    angle_distribution: AngleDistribution = AngleDistribution.GAUSSIAN
    angle_spread_deg: float = Field(2.0, ge=0)
    min_separation_deg: float = Field(5.0, ge=0)

    # Dictionary
    grid_rx: int = Field(32, ge=1)
    grid_tx: int = Field(4, ge=1)
    dictionary_frequency: DictionaryFrequency = DictionaryFrequency.SUBCARRIER
    tbod_offset: float | None = None

    # Front end
    adc_bits: AdcBits = 3
    phase_bits: int = Field(4, ge=1)
    pilot_power: float = Field(1.0, gt=0)
    noise_var: float = Field(0.1, gt=0)
    noise_covariance: NoiseCovarianceMode = NoiseCovarianceMode.ANALYTIC
    noise_samples: int = Field(200, ge=2)

    # Estimators
    bgsr_eps: float = Field(1.0, gt=0)
    bgsr_max_iter: int = Field(20, ge=1)
    gsmp_eps0: float | None = Field(None, gt=0)

    # Data phase
    data_vectors: int = Field(100, ge=1)
    psk_order: int = 8

    rng_seed: int = Field(0, ge=0)

    @field_validator("adc_bits", mode="before")
    @classmethod
    def _normalize_adc_bits(cls, value: Any) -> Any:
        if isinstance(value, str):
            if value.strip().lower() in {"inf", "infinity", "∞"}:
                return "inf"
            try:
                value = int(value)
            except ValueError:
                raise ValueError(f"adc_bits must be an integer >= 1 or 'inf', got {value!r}")
        if isinstance(value, float):
            if math.isinf(value) and value > 0:
                return "inf"
            if not value.is_integer():
                raise ValueError(f"adc_bits must be an integer >= 1 or 'inf', got {value!r}")
            value = int(value)
        if isinstance(value, int) and value < 1:
            raise ValueError("adc_bits must be >= 1 (use 'inf' for an unquantized receiver)")
        return value

    @field_validator("psk_order")
    @classmethod
    def _check_psk_order(cls, value: int) -> int:
        if value not in (2, 4, 8, 16, 32, 64):
            raise ValueError(f"psk_order must be a power of two between 2 and 64, got {value}")
        return value

    @model_validator(mode="after")
    def _check_invariants(self) -> "ScenarioConfig":
        if self.rx_rf_chains > self.rx_antennas:
            raise ValueError(
                f"rx_rf_chains ({self.rx_rf_chains}) must not exceed rx_antennas ({self.rx_antennas})"
            )
        if self.tx_rf_chains > self.tx_antennas_per_user:
            raise ValueError(
                f"tx_rf_chains ({self.tx_rf_chains}) must not exceed "
                f"tx_antennas_per_user ({self.tx_antennas_per_user})"
            )
        if self.subcarriers != self.pilots_per_block + self.delay_taps - 1:
            raise ValueError(
                "subcarriers must equal pilots_per_block + delay_taps - 1 "
                f"(subcarriers={self.subcarriers}, pilots_per_block={self.pilots_per_block}, "
                f"delay_taps={self.delay_taps})"
            )
        if self.grid_rx < self.rx_antennas:
            raise ValueError(f"grid_rx ({self.grid_rx}) must be >= rx_antennas ({self.rx_antennas})")
        if self.grid_tx < self.tx_antennas_per_user:
            raise ValueError(
                f"grid_tx ({self.grid_tx}) must be >= tx_antennas_per_user "
                f"({self.tx_antennas_per_user})"
            )
        return self

    @property
    def total_tx_antennas(self) -> int:
        """N_T = U * N_Tu."""
        return self.num_users * self.tx_antennas_per_user

    @property
    def sampling_period(self) -> float:
        """T_s = 1 / B."""
        return 1.0 / self.bandwidth_hz

    @property
    def adc_resolution(self) -> float:
        """ADC bits as a float, ``math.inf`` for an unquantized receiver."""
        return math.inf if self.adc_bits == "inf" else float(self.adc_bits)

    @property
    def tx_gain_per_user(self) -> float:
        """Per-user share of the combined transmit gain."""
        return self.tx_gain / self.num_users

    @property
    def measurement_rows(self) -> int:
        """Rows of the stacked pilot model, M * N_RF_R."""
        return self.pilot_blocks * self.rx_rf_chains

    @property
    def snr_db(self) -> float:
        """SNR(dB) = 10 log10(1 / noise_var)."""
        return float(10.0 * math.log10(1.0 / self.noise_var))

    @property
    def gsmp_threshold(self) -> float:
        """GSMP stopping threshold, rescaled to the scenario dimensions when unset."""
        if self.gsmp_eps0 is not None:
            return self.gsmp_eps0
        rows = self.measurement_rows * self.subcarriers
        return GSMP_REFERENCE_EPS0 * rows / GSMP_REFERENCE_ROWS

    def with_snr(self, snr_db: float) -> "ScenarioConfig":
        """Copy with noise_var set from an SNR in dB."""
        return self.model_copy(update={"noise_var": 10.0 ** (-snr_db / 10.0)})

    def with_updates(self, **updates: Any) -> "ScenarioConfig":
        """Copy with field updates, re-running every validator."""
        data = self.model_dump()
        data.update(updates)
        return ScenarioConfig.model_validate(data)


class SweepSpec(BaseModel):
    """Monte Carlo experiment over one scenario axis."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    snr_db_list: list[float] = Field(default_factory=lambda: [0.0, 5.0, 10.0])
    trials: int = Field(20, ge=1)
    algorithms: list[Algorithm] = Field(
        default_factory=lambda: [
            Algorithm.BGSR, Algorithm.GSMP, Algorithm.OMP, Algorithm.SBL, Algorithm.GENIE,
        ]
    )
    sweep_axis: SweepAxis = SweepAxis.SNR
    sweep_values: list[float] = Field(default_factory=list)
    fixed_snr_db: float = 10.0
    dictionary_mode: DictionaryMode = DictionaryMode.ON_GRID
    output_path: Path | None = None
    workers: int = Field(1, ge=1)
    record_runtime: bool = False

    @field_validator("algorithms")
    @classmethod
    def _check_algorithms(cls, value: list[Algorithm]) -> list[Algorithm]:
        if not value:
            raise ValueError("algorithms must name at least one estimator")
        return list(dict.fromkeys(value))

    @model_validator(mode="after")
    def _check_points(self) -> "SweepSpec":
        if self.sweep_axis == SweepAxis.SNR and not self.snr_db_list:
            raise ValueError("snr_db_list must not be empty for an snr sweep")
        if self.sweep_axis != SweepAxis.SNR and not self.sweep_values:
            raise ValueError(f"sweep_values must not be empty for a {self.sweep_axis.value} sweep")
        return self

    def points(self) -> list[float]:
        """Sweep values in run order."""
        if self.sweep_axis == SweepAxis.SNR:
            return list(self.snr_db_list)
        return list(self.sweep_values)
