"""
Estimator state and output containers.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from thz_bgsr.dictionary.sparsifying import ColumnGroups


@dataclass
class BGSRState:
    """
    EM state after the final E-step.

    Attributes:
        gamma: (columns,) prior variances shared across subcarriers, >= 0
        sigma_diag: (columns, K) posterior variances
        h_b: (columns, K) posterior mean
        trace: ||Gamma_j - Gamma_{j-1}||_F^2 per iteration
        iterations: EM iterations run
        log_likelihood: Marginal log-likelihood per iteration, when tracked
        groups: Tied columns, None when every column has its own hyperparameter
        group_gamma: (num_groups,) hyperparameters of the tied groups
    """
    gamma: NDArray[np.float64]
    sigma_diag: NDArray[np.float64]
    h_b: NDArray[np.complex128]
    trace: list[float] = field(default_factory=list)
    iterations: int = 0
    log_likelihood: list[float] = field(default_factory=list)
    groups: ColumnGroups | None = None
    group_gamma: NDArray[np.float64] | None = None

    def support(self, threshold: float = 0.01) -> NDArray[np.intp]:
        """
        Indices with gamma above ``threshold`` times the peak.

        With tied columns the test runs on the group hyperparameters and a selected group
        contributes all of its columns.
        """
        if self.groups is not None and self.group_gamma is not None:
            peak = float(self.group_gamma.max(initial=0.0))
            if peak <= 0.0:
                return np.zeros(0, dtype=np.intp)
            return self.groups.members(np.flatnonzero(self.group_gamma > threshold * peak))
        peak = float(self.gamma.max(initial=0.0))
        if peak <= 0.0:
            return np.zeros(0, dtype=np.intp)
        return np.flatnonzero(self.gamma > threshold * peak)


@dataclass
class EstimatorOutput:
    """
    Result of one estimator on one trial.

    Attributes:
        algorithm: Estimator name
        h_b_hat: (columns, K) beamspace estimate
        h_hat: (N_R, U * N_Tu, K) reconstructed CFR, None without a dictionary
        iterations: Iterations (EM steps or selected atoms)
        support: Selected column indices
        wall_time: Seconds spent in the estimator
        trace: Gamma differences (BGSR) or residual energies (greedy)
        degenerate: Greedy loop stopped on a rank-deficient or repeated selection
        gamma: Final per-column prior variances (Bayesian estimators)
    """
    algorithm: str
    h_b_hat: NDArray[np.complex128]
    h_hat: NDArray[np.complex128] | None
    iterations: int
    support: NDArray[np.intp]
    wall_time: float
    trace: list[float] = field(default_factory=list)
    degenerate: bool = False
    gamma: NDArray[np.float64] | None = None
