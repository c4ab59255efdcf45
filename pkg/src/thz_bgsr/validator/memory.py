"""
Memory estimation for sweep configs.

The sensing tensor Xi (rows x columns x K complex entries) dominates a trial's footprint.
"""

from thz_bgsr.config.scenario import DictionaryMode, ScenarioConfig
from thz_bgsr.validator.types import Severity, ValidationResult

BYTES_PER_COMPLEX = 16
GIB = 1024**3

# Sensing tensor above this size triggers a warning
SENSING_WARN_BYTES = GIB


def dictionary_columns(cfg: ScenarioConfig, mode: DictionaryMode) -> int:
    """U * G_R' * G_T' with G' = 2G for TBoD."""
    factor = 2 if mode == DictionaryMode.TBOD else 1
    return cfg.num_users * (factor * cfg.grid_rx) * (factor * cfg.grid_tx)


def estimate_sensing_bytes(cfg: ScenarioConfig, mode: DictionaryMode) -> int:
    """Bytes of the (M N_RF_R, columns, K) sensing tensor."""
    return cfg.measurement_rows * dictionary_columns(cfg, mode) * cfg.subcarriers * BYTES_PER_COMPLEX


def estimate_memory_requirements(cfg: ScenarioConfig, mode: DictionaryMode) -> list[ValidationResult]:
    """
    Report the sensing tensor footprint per trial.

    Args:
        cfg: Scenario
        mode: Dictionary mode of the sweep

    Returns:
        One result, a warning above 1 GiB
    """
    size = estimate_sensing_bytes(cfg, mode)
    gib = size / GIB
    if size > SENSING_WARN_BYTES:
        return [ValidationResult(
            check="sensing-memory",
            severity=Severity.WARNING,
            message=f"Sensing tensor needs ~{gib:.2f} GiB per trial",
            details=(
                f"{cfg.measurement_rows} rows x {dictionary_columns(cfg, mode)} columns x "
                f"{cfg.subcarriers} subcarriers; every worker holds its own copy"
            ),
            fix="Reduce grid_rx/grid_tx, use the on_grid dictionary, or lower workers",
            keys=("grid_rx", "grid_tx", "dictionary_mode", "workers"),
        )]
    return [ValidationResult(
        check="sensing-memory",
        severity=Severity.SUCCESS,
        message=f"Sensing tensor fits comfortably (~{gib * 1024:.1f} MiB per trial)",
    )]
