"""
Monte Carlo harness: seeded trials, sweeps and CSV results.
"""

from thz_bgsr.harness.results import CSV_COLUMNS, SweepRow, read_results, revision_tag, write_results
from thz_bgsr.harness.rng import TrialStreams, trial_seed_sequence, trial_streams
from thz_bgsr.harness.sweep import SweepResult, aggregate, point_config, run_bcrb_sweep, run_sweep
from thz_bgsr.harness.trial import TrialOutcome, TrialProblem, build_problem, run_estimator, run_trial

__all__ = [
    "CSV_COLUMNS",
    "SweepRow",
    "read_results",
    "revision_tag",
    "write_results",
    "TrialStreams",
    "trial_seed_sequence",
    "trial_streams",
    "SweepResult",
    "aggregate",
    "point_config",
    "run_bcrb_sweep",
    "run_sweep",
    "TrialOutcome",
    "TrialProblem",
    "build_problem",
    "run_estimator",
    "run_trial",
]
