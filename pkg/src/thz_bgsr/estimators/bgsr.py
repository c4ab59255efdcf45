"""
Bayesian group-sparse regression (BGSR) via expectation maximization.

All subcarriers share one hyperparameter vector gamma, so the estimated support is the
same on every subcarrier even though each subcarrier has its own sensing matrix. The
E-step uses the Woodbury form, which only inverts the (rows x rows) matrix

    C_y[k] = C_w + Phi_k Gamma Phi_k^H,    Phi_k = Xi[:, active, k]

instead of the (columns x columns) posterior precision.
"""

import logging
import math
import time

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import cho_solve

from thz_bgsr.dictionary.sparsifying import ColumnGroups, SparsifyingDictionary
from thz_bgsr.errors import InputError
from thz_bgsr.estimators.linalg import cholesky_factor, cholesky_logdet
from thz_bgsr.estimators.reconstruct import reconstruct_channel
from thz_bgsr.estimators.types import BGSRState, EstimatorOutput

logger = logging.getLogger(__name__)

DEFAULT_EPS_TOL = 1.0
DEFAULT_MAX_ITER = 20
DEFAULT_PRUNE_THRESHOLD = 1e-8
SUPPORT_THRESHOLD = 0.01


def _check_inputs(
    xi_mu: NDArray[np.complex128],
    y_mu: NDArray[np.complex128],
    c_w: NDArray[np.complex128],
) -> None:
    if xi_mu.ndim != 3 or y_mu.ndim != 2:
        raise InputError(f"xi_mu must be (rows, columns, K) and y_mu (rows, K), got {xi_mu.shape}, {y_mu.shape}")
    rows, _, k = xi_mu.shape
    if y_mu.shape != (rows, k):
        raise InputError(f"y_mu shape {y_mu.shape} does not match xi_mu {xi_mu.shape}")
    if c_w.shape != (rows, rows):
        raise InputError(f"c_w must be ({rows}, {rows}), got {c_w.shape}")


def bgsr_e_step(
    xi_mu: NDArray[np.complex128],
    y_mu: NDArray[np.complex128],
    c_w: NDArray[np.complex128],
    gamma: NDArray[np.float64],
) -> tuple[NDArray[np.float64], NDArray[np.complex128]]:
    """
    Posterior variances and means for every subcarrier.

    Entries with gamma = 0 are excluded from the inner solve and get zero mean and
    variance.

    Args:
        xi_mu: (rows, columns, K) sensing tensor
        y_mu: (rows, K) measurements
        c_w: (rows, rows) noise covariance
        gamma: (columns,) nonnegative hyperparameters

    Returns:
        (sigma_diag, h_b), both (columns, K)

    Raises:
        NumericalError: C_y[k] cannot be factored
    """
    _check_inputs(xi_mu, y_mu, c_w)
    gamma = np.asarray(gamma, dtype=float)
    if np.any(gamma < 0):
        raise InputError("gamma must be nonnegative")

    _, columns, k = xi_mu.shape
    sigma_diag = np.zeros((columns, k))
    h_b = np.zeros((columns, k), dtype=complex)
    active = np.flatnonzero(gamma > 0)
    if active.size == 0:
        return sigma_diag, h_b

    g = gamma[active]
    for i in range(k):
        phi = xi_mu[:, active, i]
        c_y = c_w + (phi * g) @ phi.conj().T
        factor = cholesky_factor(c_y, what=f"C_y[{i}]")
        solved = cho_solve(factor, np.column_stack([y_mu[:, i], phi]), check_finite=False)
        h_b[active, i] = g * (phi.conj().T @ solved[:, 0])
        quad = np.real(np.sum(phi.conj() * solved[:, 1:], axis=0))
        sigma_diag[active, i] = np.maximum(g - g**2 * quad, 0.0)
    return sigma_diag, h_b


def bgsr_m_step(
    sigma_diag: NDArray[np.float64],
    h_b: NDArray[np.complex128],
) -> NDArray[np.float64]:
    """gamma = mean over k of diag(Sigma[k]) + |h_b[:, k]|^2."""
    return np.mean(sigma_diag + np.abs(h_b) ** 2, axis=1)


def posterior_covariance(
    xi_k: NDArray[np.complex128],
    c_w: NDArray[np.complex128],
    gamma: NDArray[np.float64],
) -> NDArray[np.complex128]:
    """
    Full posterior covariance of one subcarrier, Gamma - Gamma Phi^H C_y^-1 Phi Gamma.

    Rows and columns with gamma = 0 are zero.
    """
    columns = xi_k.shape[1]
    sigma = np.zeros((columns, columns), dtype=complex)
    active = np.flatnonzero(gamma > 0)
    if active.size == 0:
        return sigma
    g = gamma[active]
    phi = xi_k[:, active]
    factor = cholesky_factor(c_w + (phi * g) @ phi.conj().T, what="C_y")
    inner = phi.conj().T @ cho_solve(factor, phi, check_finite=False)
    block = np.diag(g) - (g[:, None] * inner) * g[None, :]
    sigma[np.ix_(active, active)] = 0.5 * (block + block.conj().T)
    return sigma


def marginal_log_likelihood(
    xi_mu: NDArray[np.complex128],
    y_mu: NDArray[np.complex128],
    c_w: NDArray[np.complex128],
    gamma: NDArray[np.float64],
) -> float:
    """
    sum_k log CN(y[:, k]; 0, C_y[k]).

    Equals -sum_k (rows log pi + log det C_y[k] + y^H C_y[k]^-1 y).
    """
    _check_inputs(xi_mu, y_mu, c_w)
    rows, _, k = xi_mu.shape
    active = np.flatnonzero(gamma > 0)
    g = gamma[active]
    total = 0.0
    for i in range(k):
        phi = xi_mu[:, active, i]
        factor = cholesky_factor(c_w + (phi * g) @ phi.conj().T, what=f"C_y[{i}]")
        y = y_mu[:, i]
        quad = float(np.real(y.conj() @ cho_solve(factor, y, check_finite=False)))
        total -= rows * math.log(math.pi) + cholesky_logdet(factor) + quad
    return total


def bgsr_em(
    xi_mu: NDArray[np.complex128],
    y_mu: NDArray[np.complex128],
    c_w: NDArray[np.complex128],
    eps_tol: float = DEFAULT_EPS_TOL,
    k_max: int = DEFAULT_MAX_ITER,
    prune_threshold: float = DEFAULT_PRUNE_THRESHOLD,
    track_likelihood: bool = False,
    groups: ColumnGroups | None = None,
) -> BGSRState:
    """
    Run EM from Gamma = I until ||Gamma_j - Gamma_{j-1}||_F^2 <= eps_tol or k_max steps.

    Hyperparameters below ``prune_threshold`` times the peak are set to zero after each
    M-step. A final E-step with the returned gamma produces the posterior mean.

    With ``groups`` the hyperparameters, the pruning and the stopping test live on the
    groups; column i gets prior variance weights[i] * gamma[groups[i]].

    Args:
        xi_mu: (rows, columns, K) sensing tensor
        y_mu: (rows, K) measurements
        c_w: (rows, rows) noise covariance
        eps_tol: Stopping tolerance on the squared gamma change
        k_max: Iteration cap
        prune_threshold: Relative pruning level, 0 disables pruning
        track_likelihood: Record the marginal log-likelihood before each M-step
        groups: Tied columns, e.g. a TBoD base atom and its derivatives

    Returns:
        Final EM state
    """
    if eps_tol <= 0:
        raise InputError(f"eps_tol must be positive, got {eps_tol}")
    if k_max < 1:
        raise InputError(f"k_max must be >= 1, got {k_max}")
    _check_inputs(xi_mu, y_mu, c_w)
    columns = xi_mu.shape[1]
    if groups is not None and groups.columns != columns:
        raise InputError(f"Column groups cover {groups.columns} columns, sensing tensor has {columns}")

    def expand(hyper: NDArray[np.float64]) -> NDArray[np.float64]:
        return hyper if groups is None else groups.expand(hyper)

    hyper = np.ones(columns if groups is None else groups.num_groups)
    state = BGSRState(gamma=expand(hyper), sigma_diag=np.zeros((0, 0)), h_b=np.zeros((0, 0), dtype=complex))
    for j in range(1, k_max + 1):
        gamma = expand(hyper)
        if track_likelihood:
            state.log_likelihood.append(marginal_log_likelihood(xi_mu, y_mu, c_w, gamma))
        sigma_diag, h_b = bgsr_e_step(xi_mu, y_mu, c_w, gamma)
        updated = bgsr_m_step(sigma_diag, h_b)
        if groups is not None:
            updated = groups.collapse(updated)
        if prune_threshold > 0:
            updated[updated < prune_threshold * updated.max(initial=0.0)] = 0.0

        change = float(np.sum((updated - hyper) ** 2))
        state.trace.append(change)
        state.iterations = j
        hyper = updated
        if change <= eps_tol:
            break

    state.gamma = expand(hyper)
    if groups is not None:
        state.groups, state.group_gamma = groups, hyper
    state.sigma_diag, state.h_b = bgsr_e_step(xi_mu, y_mu, c_w, state.gamma)
    logger.debug(
        "BGSR stopped after %d iterations, last change %.3e, %d active",
        state.iterations, state.trace[-1], int(np.count_nonzero(state.gamma)),
    )
    return state


def bgsr_estimate(
    xi_mu: NDArray[np.complex128],
    y_mu: NDArray[np.complex128],
    c_w: NDArray[np.complex128],
    eps_tol: float = DEFAULT_EPS_TOL,
    k_max: int = DEFAULT_MAX_ITER,
    dictionary: SparsifyingDictionary | None = None,
    prune_threshold: float = DEFAULT_PRUNE_THRESHOLD,
    algorithm: str = "bgsr",
    groups: ColumnGroups | None = None,
) -> EstimatorOutput:
    """
    BGSR estimate restricted to one support shared by all subcarriers.

    Coefficients outside {i : gamma_i > 0.01 max(gamma)} are zeroed before
    reconstruction; ``dictionary`` enables the CFR reconstruction. A TBoD dictionary
    ties each base atom to its derivative atoms unless ``groups`` is given.
    """
    start = time.perf_counter()
    if groups is None and dictionary is not None:
        groups = dictionary.column_groups()
    state = bgsr_em(xi_mu, y_mu, c_w, eps_tol, k_max, prune_threshold, groups=groups)
    support = state.support(SUPPORT_THRESHOLD)
    h_b_hat = np.zeros_like(state.h_b)
    h_b_hat[support] = state.h_b[support]
    h_hat = reconstruct_channel(h_b_hat, dictionary) if dictionary is not None else None
    return EstimatorOutput(
        algorithm=algorithm,
        h_b_hat=h_b_hat,
        h_hat=h_hat,
        iterations=state.iterations,
        support=support,
        wall_time=time.perf_counter() - start,
        trace=state.trace,
        gamma=state.gamma,
    )
