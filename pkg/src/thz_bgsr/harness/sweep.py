"""
Monte Carlo sweeps over one scenario axis.

Every sweep point's config is validated before the first trial runs. Trials run
sequentially or on a thread pool and are reduced in trial order, so the result table is
the same for any worker count.
"""

import logging
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from pydantic import ValidationError

from thz_bgsr.config.scenario import Algorithm, ScenarioConfig, SweepAxis, SweepSpec
from thz_bgsr.dictionary.sparsifying import build_dictionary
from thz_bgsr.errors import ConfigError
from thz_bgsr.harness.results import SweepRow, revision_tag
from thz_bgsr.harness.trial import BCRB_LABEL, TrialOutcome, run_trial

logger = logging.getLogger(__name__)

METRIC_ORDER = ("nmse", "ber", "iterations", "runtime_s")
BOUND_METRIC = "bcrb_nmse"

AXIS_FIELDS: dict[SweepAxis, str] = {
    SweepAxis.PILOT_BLOCKS: "pilot_blocks",
    SweepAxis.USERS: "num_users",
    SweepAxis.ADC_BITS: "adc_bits",
    SweepAxis.SUBCARRIERS: "subcarriers",
    SweepAxis.DIFFUSE_RAYS: "diffuse_rays",
}


@dataclass
class SweepResult:
    """Aggregated rows of a sweep, in point / algorithm / metric order."""
    rows: list[SweepRow] = field(default_factory=list)

    def value(self, sweep_value: float, algorithm: str, metric: str) -> float | None:
        for row in self.rows:
            if row.sweep_value == sweep_value and row.algorithm == algorithm and row.metric == metric:
                return row.mean
        return None

    def points(self) -> list[float]:
        return list(dict.fromkeys(row.sweep_value for row in self.rows))

    def algorithms(self) -> list[str]:
        return list(dict.fromkeys(row.algorithm for row in self.rows))


def _as_int(axis: SweepAxis, value: float) -> int:
    if not float(value).is_integer():
        raise ConfigError(f"{axis.value} sweep values must be integers, got {value}", keys=("sweep_values",))
    return int(value)


def point_config(cfg: ScenarioConfig, sweep: SweepSpec, value: float) -> ScenarioConfig:
    """
    Scenario at one sweep point.

    Non-SNR axes run at ``sweep.fixed_snr_db``. A subcarrier sweep keeps the delay
    spread and sets pilots_per_block = K - L + 1.

    Raises:
        ConfigError: The point violates a scenario invariant
    """
    axis = sweep.sweep_axis
    if axis == SweepAxis.SNR:
        return cfg.with_snr(value)

    updates: dict[str, object]
    if axis == SweepAxis.ADC_BITS:
        updates = {"adc_bits": "inf" if math.isinf(value) else _as_int(axis, value)}
    elif axis == SweepAxis.SUBCARRIERS:
        k = _as_int(axis, value)
        updates = {"subcarriers": k, "pilots_per_block": k - cfg.delay_taps + 1}
    else:
        updates = {AXIS_FIELDS[axis]: _as_int(axis, value)}

    try:
        return cfg.with_updates(**updates).with_snr(sweep.fixed_snr_db)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        raise ConfigError(
            f"{axis.value} = {value} is not a valid scenario: {messages}",
            keys=(*updates.keys(), "sweep_values"),
        )


def aggregate(
    sweep_value: float,
    outcomes: list[TrialOutcome],
    algorithms: list[Algorithm],
    config_hash: str,
    seed: int,
    revision: str,
) -> list[SweepRow]:
    """Mean and standard error of every metric over trials."""
    rows = []
    n = len(outcomes)

    def stderr(values: np.ndarray) -> float:
        return float(np.std(values, ddof=1) / math.sqrt(n)) if n > 1 else 0.0

    for algorithm in algorithms:
        for metric in METRIC_ORDER:
            key = (algorithm.value, metric)
            if key not in outcomes[0].values:
                continue
            values = np.array([o.values[key] for o in outcomes])
            rows.append(SweepRow(
                sweep_value=float(sweep_value),
                algorithm=algorithm.value,
                metric=metric,
                mean=float(values.mean()),
                stderr=stderr(values),
                trials=n,
                config_hash=config_hash,
                seed=seed,
                revision=revision,
            ))

    bounds = [o.bound for o in outcomes if o.bound is not None]
    if bounds:
        energy = float(np.mean([o.channel_energy for o in outcomes]))
        scaled = np.array(bounds) / energy
        rows.append(SweepRow(
            sweep_value=float(sweep_value),
            algorithm=BCRB_LABEL,
            metric=BOUND_METRIC,
            mean=float(scaled.mean()),
            stderr=stderr(scaled),
            trials=n,
            config_hash=config_hash,
            seed=seed,
            revision=revision,
        ))
    return rows


def _run_point(
    cfg: ScenarioConfig,
    value: float,
    sweep: SweepSpec,
    with_bcrb: bool,
    on_trial: Callable[[float, int], None] | None,
) -> list[TrialOutcome]:
    dictionary = build_dictionary(cfg, sweep.dictionary_mode)

    def one(trial: int) -> TrialOutcome:
        outcome = run_trial(
            cfg,
            trial,
            sweep.algorithms,
            sweep.dictionary_mode,
            dictionary,
            with_bcrb=with_bcrb,
            record_runtime=sweep.record_runtime,
        )
        if on_trial is not None:
            on_trial(value, trial)
        return outcome

    if sweep.workers > 1:
        with ThreadPoolExecutor(max_workers=sweep.workers) as pool:
            return list(pool.map(one, range(sweep.trials)))
    return [one(trial) for trial in range(sweep.trials)]


def run_sweep(
    cfg: ScenarioConfig,
    sweep: SweepSpec,
    config_hash: str = "",
    revision: str | None = None,
    with_bcrb: bool = False,
    on_trial: Callable[[float, int], None] | None = None,
) -> SweepResult:
    """
    Run every trial of every sweep point and aggregate the metrics.

    Args:
        cfg: Base scenario (seed taken from ``cfg.rng_seed``)
        sweep: Axis, points, trials and algorithms
        config_hash: Hash written to every row
        revision: Revision tag, looked up when None
        with_bcrb: Add plug-in BCRB rows
        on_trial: Called with (sweep value, trial index) after each trial

    Returns:
        SweepResult

    Raises:
        ConfigError: A sweep point is invalid (raised before any trial runs)
        NumericalError: A factorization failed inside a trial
    """
    points = sweep.points()
    configs = [point_config(cfg, sweep, value) for value in points]
    revision = revision or revision_tag()
    logger.info(
        "Sweep over %s: %d points x %d trials, algorithms %s",
        sweep.sweep_axis.value, len(points), sweep.trials, ",".join(a.value for a in sweep.algorithms),
    )

    result = SweepResult()
    for value, point_cfg in zip(points, configs, strict=True):
        outcomes = _run_point(point_cfg, value, sweep, with_bcrb, on_trial)
        result.rows.extend(
            aggregate(value, outcomes, sweep.algorithms, config_hash, cfg.rng_seed, revision)
        )
    logger.info("Sweep finished: %d rows", len(result.rows))
    return result


def run_bcrb_sweep(
    cfg: ScenarioConfig,
    sweep: SweepSpec,
    config_hash: str = "",
    revision: str | None = None,
    on_trial: Callable[[float, int], None] | None = None,
) -> SweepResult:
    """BGSR NMSE and the plug-in BCRB at every sweep point."""
    bound_sweep = sweep.model_copy(update={"algorithms": [Algorithm.BGSR]})
    return run_sweep(cfg, bound_sweep, config_hash, revision, with_bcrb=True, on_trial=on_trial)
