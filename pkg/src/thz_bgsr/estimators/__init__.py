"""
Sparse channel estimators: BGSR, GSMP and the per-subcarrier OMP and SBL baselines.
"""

from thz_bgsr.estimators.baselines import (
    OMPPath,
    omp_estimate,
    omp_path,
    omp_per_subcarrier,
    smv_sbl,
    smv_sbl_estimate,
)
from thz_bgsr.estimators.bgsr import (
    bgsr_e_step,
    bgsr_em,
    bgsr_estimate,
    bgsr_m_step,
    marginal_log_likelihood,
    posterior_covariance,
)
from thz_bgsr.estimators.gsmp import gsmp_estimate
from thz_bgsr.estimators.linalg import cholesky_factor, cholesky_logdet, cholesky_solve
from thz_bgsr.estimators.reconstruct import reconstruct_channel
from thz_bgsr.estimators.types import BGSRState, EstimatorOutput

__all__ = [
    "BGSRState",
    "EstimatorOutput",
    "bgsr_e_step",
    "bgsr_m_step",
    "bgsr_em",
    "bgsr_estimate",
    "marginal_log_likelihood",
    "posterior_covariance",
    "gsmp_estimate",
    "OMPPath",
    "omp_path",
    "omp_per_subcarrier",
    "omp_estimate",
    "smv_sbl",
    "smv_sbl_estimate",
    "reconstruct_channel",
    "cholesky_factor",
    "cholesky_logdet",
    "cholesky_solve",
]
