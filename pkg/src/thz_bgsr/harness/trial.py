"""
One Monte Carlo trial: channel, pilots, measurements, estimators and metrics.
"""

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from thz_bgsr.channel.synthesis import MultiUserChannel, generate_channel
from thz_bgsr.config.scenario import Algorithm, DictionaryMode, ScenarioConfig
from thz_bgsr.dictionary.sparsifying import (
    SparsifyingDictionary,
    build_dictionary,
    build_sensing_tensor_factored,
)
from thz_bgsr.estimators.baselines import omp_estimate, smv_sbl_estimate
from thz_bgsr.estimators.bgsr import bgsr_estimate
from thz_bgsr.estimators.gsmp import gsmp_estimate
from thz_bgsr.estimators.types import EstimatorOutput
from thz_bgsr.frontend.codebooks import RFCodebook, draw_codebooks
from thz_bgsr.frontend.measurements import MeasurementSet, synthesize_measurements
from thz_bgsr.frontend.pilots import draw_pilot_frame
from thz_bgsr.frontend.quantization import QuantizationModel
from thz_bgsr.harness.rng import TrialStreams, trial_streams
from thz_bgsr.metrics.bcrb import bcrb, plug_in_gamma
from thz_bgsr.metrics.ber import link_ber
from thz_bgsr.metrics.nmse import nmse

logger = logging.getLogger(__name__)

BCRB_LABEL = "bcrb"


@dataclass
class TrialOutcome:
    """
    Metric values of one trial.

    Attributes:
        values: (algorithm, metric) -> value
        channel_energy: sum_k ||H[k]||_F^2 of the drawn channel
        bound: Plug-in BCRB on the CFR MSE, when requested
    """
    trial: int
    values: dict[tuple[str, str], float] = field(default_factory=dict)
    channel_energy: float = 0.0
    bound: float | None = None


@dataclass
class TrialProblem:
    """Everything the estimators see in one trial."""
    channel: MultiUserChannel
    codebook: RFCodebook
    measurements: MeasurementSet
    dictionary: SparsifyingDictionary
    xi_mu: np.ndarray
    streams: TrialStreams


def build_problem(
    cfg: ScenarioConfig,
    trial: int,
    dictionary: SparsifyingDictionary | None = None,
    dictionary_mode: DictionaryMode = DictionaryMode.ON_GRID,
) -> TrialProblem:
    """Draw the channel and pilots of one trial and form the sensing tensor."""
    streams = trial_streams(cfg.rng_seed, trial)
    channel = generate_channel(cfg, streams.channel)
    codebook = draw_codebooks(cfg, streams.frontend)
    frame = draw_pilot_frame(cfg, streams.frontend)
    quant = QuantizationModel.from_bits(cfg.adc_resolution)
    measurements = synthesize_measurements(
        channel,
        codebook,
        frame,
        quant,
        cfg.noise_var,
        streams.noise,
        pilot_power=cfg.pilot_power,
        noise_covariance=cfg.noise_covariance,
        noise_samples=cfg.noise_samples,
    )
    dictionary = dictionary or build_dictionary(cfg, dictionary_mode)
    xi_mu = build_sensing_tensor_factored(measurements.transmit, codebook.w_rf, quant.epsilon, dictionary)
    measurements.xi_mu = xi_mu
    return TrialProblem(
        channel=channel,
        codebook=codebook,
        measurements=measurements,
        dictionary=dictionary,
        xi_mu=xi_mu,
        streams=streams,
    )


def run_estimator(algorithm: Algorithm, cfg: ScenarioConfig, problem: TrialProblem) -> EstimatorOutput:
    """Dispatch one estimator on a trial problem."""
    xi, y = problem.xi_mu, problem.measurements.y_mu
    c_w, dictionary = problem.measurements.c_w, problem.dictionary
    if algorithm == Algorithm.BGSR:
        return bgsr_estimate(xi, y, c_w, cfg.bgsr_eps, cfg.bgsr_max_iter, dictionary=dictionary)
    if algorithm == Algorithm.GSMP:
        return gsmp_estimate(xi, y, cfg.gsmp_threshold, dictionary=dictionary)
    if algorithm == Algorithm.OMP:
        return omp_estimate(xi, y, c_w, dictionary=dictionary)
    if algorithm == Algorithm.SBL:
        return smv_sbl_estimate(xi, y, c_w, cfg.bgsr_eps, cfg.bgsr_max_iter, dictionary=dictionary)
    return EstimatorOutput(
        algorithm=Algorithm.GENIE.value,
        h_b_hat=np.zeros((dictionary.columns, dictionary.subcarriers), dtype=complex),
        h_hat=problem.channel.cfr,
        iterations=0,
        support=np.zeros(0, dtype=np.intp),
        wall_time=0.0,
    )


def run_trial(
    cfg: ScenarioConfig,
    trial: int,
    algorithms: list[Algorithm],
    dictionary_mode: DictionaryMode = DictionaryMode.ON_GRID,
    dictionary: SparsifyingDictionary | None = None,
    with_bcrb: bool = False,
    record_runtime: bool = False,
) -> TrialOutcome:
    """
    Run every requested estimator on one trial and score it.

    Each algorithm's BER uses the same data symbols and noise. With ``with_bcrb`` the
    bound is evaluated at the converged BGSR hyperparameters, running BGSR if it is
    not among ``algorithms``.

    Returns:
        TrialOutcome with nmse, ber and iterations per algorithm (plus runtime_s)
    """
    start = time.perf_counter()
    problem = build_problem(cfg, trial, dictionary, dictionary_mode)
    channel = problem.channel
    outcome = TrialOutcome(trial=trial, channel_energy=channel.energy)
    noise_cov = problem.measurements.r_vv[0]
    eps = problem.measurements.quant.epsilon

    bgsr_output: EstimatorOutput | None = None
    for algorithm in algorithms:
        output = run_estimator(algorithm, cfg, problem)
        if algorithm == Algorithm.BGSR:
            bgsr_output = output
        assert output.h_hat is not None
        name = algorithm.value
        outcome.values[(name, "nmse")] = nmse(output.h_hat, channel.cfr)
        outcome.values[(name, "ber")] = link_ber(
            output.h_hat,
            channel.cfr,
            problem.codebook,
            eps,
            cfg.noise_var,
            noise_cov,
            cfg.psk_order,
            cfg.data_vectors,
            problem.streams.data_rng(),
        )
        outcome.values[(name, "iterations")] = float(output.iterations)
        if record_runtime:
            outcome.values[(name, "runtime_s")] = output.wall_time

    if with_bcrb:
        if bgsr_output is None:
            bgsr_output = run_estimator(Algorithm.BGSR, cfg, problem)
        assert bgsr_output.gamma is not None
        result = bcrb(
            problem.xi_mu,
            problem.measurements.c_w_true,
            plug_in_gamma(bgsr_output.gamma, support=bgsr_output.support),
            problem.dictionary,
        )
        outcome.bound = result.bound

    logger.debug("Trial %d finished in %.2fs", trial, time.perf_counter() - start)
    return outcome
