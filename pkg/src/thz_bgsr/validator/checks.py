"""
Known pitfalls of scenario configs.

Each check pairs a detection function over the validated scenario and sweep with a
recommended fix. Checks only flag combinations the model validators accept.
"""

from collections.abc import Callable
from dataclasses import dataclass

from thz_bgsr.config.scenario import (
    AngleMode,
    DictionaryMode,
    NoiseCovarianceMode,
    PulseKind,
    ScenarioConfig,
    SweepSpec,
)
from thz_bgsr.frontend.quantization import BUSSGANG_UPSILON
from thz_bgsr.validator.types import Severity, ValidationResult


@dataclass
class ScenarioCheck:
    """
    A known problem in scenario configs.

    Attributes:
        id: Unique identifier
        name: Short name
        description: What the issue is
        detection: Returns True when the config has the issue
        recommendation: What to do instead
        severity: How bad it is
        keys: Scenario or sweep keys involved
    """
    id: str
    name: str
    description: str
    detection: Callable[[ScenarioConfig, SweepSpec], bool]
    recommendation: str
    severity: Severity = Severity.WARNING
    keys: tuple[str, ...] = ()


def _detect_coarse_grid(cfg: ScenarioConfig, _sweep: SweepSpec) -> bool:
    """Grid below twice the array size on either side."""
    return cfg.grid_rx < 2 * cfg.rx_antennas or cfg.grid_tx < 2 * cfg.tx_antennas_per_user


def _detect_infeasible_separation(cfg: ScenarioConfig, _sweep: SweepSpec) -> bool:
    """2U mixture means cannot be min_separation_deg apart on the circle."""
    if cfg.angle_mode != AngleMode.GMM:
        return False
    return 2 * cfg.num_users * cfg.min_separation_deg > 360.0


def _detect_closed_form_adc(cfg: ScenarioConfig, _sweep: SweepSpec) -> bool:
    bits = cfg.adc_resolution
    return bits != float("inf") and int(bits) > max(BUSSGANG_UPSILON)


def _detect_zero_tbod_offset(cfg: ScenarioConfig, sweep: SweepSpec) -> bool:
    return sweep.dictionary_mode == DictionaryMode.TBOD and cfg.tbod_offset == 0


def _detect_zero_rolloff(cfg: ScenarioConfig, _sweep: SweepSpec) -> bool:
    return cfg.psf_kind == PulseKind.RRC and cfg.rrc_rolloff == 0


def _detect_few_noise_samples(cfg: ScenarioConfig, _sweep: SweepSpec) -> bool:
    """Sample covariance of an N_RF_R block is singular with fewer draws than rows."""
    return cfg.noise_covariance == NoiseCovarianceMode.SAMPLED and cfg.noise_samples < cfg.rx_rf_chains


SCENARIO_CHECKS: list[ScenarioCheck] = [
    ScenarioCheck(
        id="coarse-grid",
        name="Coarse Angular Grid",
        description="Grid smaller than twice the antenna count leaves most paths far off-grid",
        detection=_detect_coarse_grid,
        recommendation="Set grid_rx >= 2 * rx_antennas and grid_tx >= 2 * tx_antennas_per_user",
        severity=Severity.WARNING,
        keys=("grid_rx", "grid_tx"),
    ),
    ScenarioCheck(
        id="gmm-separation",
        name="Infeasible Angle Separation",
        description="2 * num_users mixture means cannot be min_separation_deg apart on 360 degrees",
        detection=_detect_infeasible_separation,
        recommendation="Lower min_separation_deg or num_users",
        severity=Severity.ERROR,
        keys=("num_users", "min_separation_deg"),
    ),
    ScenarioCheck(
        id="adc-closed-form",
        name="Closed-Form ADC Distortion",
        description="ADC resolutions above 5 bits use the (pi sqrt(3) / 2) 2^-2b approximation",
        detection=_detect_closed_form_adc,
        recommendation="No action needed; results match the table within the approximation",
        severity=Severity.INFO,
        keys=("adc_bits",),
    ),
    ScenarioCheck(
        id="tbod-zero-offset",
        name="TBoD Without Offset",
        description="tbod_offset = 0 zeroes every derivative atom, so TBoD adds nothing",
        detection=_detect_zero_tbod_offset,
        recommendation="Unset tbod_offset (defaults to pi / G) or use the on_grid dictionary",
        severity=Severity.ERROR,
        keys=("tbod_offset", "dictionary_mode"),
    ),
    ScenarioCheck(
        id="rrc-zero-rolloff",
        name="Zero Roll-Off",
        description="An RRC pulse with roll-off 0 is a sinc with slowly decaying tails",
        detection=_detect_zero_rolloff,
        recommendation="Expect more inter-tap leakage; the default roll-off is 0.8",
        severity=Severity.INFO,
        keys=("rrc_rolloff",),
    ),
    ScenarioCheck(
        id="few-noise-samples",
        name="Singular Sampled Covariance",
        description="noise_samples below rx_rf_chains gives a rank-deficient noise covariance",
        detection=_detect_few_noise_samples,
        recommendation="Set noise_samples well above rx_rf_chains (e.g. 10x)",
        severity=Severity.WARNING,
        keys=("noise_samples", "rx_rf_chains"),
    ),
]


def check_scenario(cfg: ScenarioConfig, sweep: SweepSpec) -> list[ValidationResult]:
    """
    Run every known check.

    Returns:
        ValidationResults for triggered checks
    """
    results = []
    for check in SCENARIO_CHECKS:
        if check.detection(cfg, sweep):
            results.append(ValidationResult(
                check=check.id,
                severity=check.severity,
                message=check.name,
                details=check.description,
                fix=check.recommendation,
                keys=check.keys,
            ))
    return results
