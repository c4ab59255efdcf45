"""
Bayesian Cramer-Rao bound on the multi-user channel MSE.

The Bayesian Fisher information of the beamspace vector is

    I = sum_k Xi[k]^H C_w^-1 Xi[k] + Gamma^-1

and mapping through the dictionaries gives MSE(H) >= Tr(I^-1 sum_k Psi[k]^H Psi[k]).
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import solve_triangular

from thz_bgsr.dictionary.sparsifying import SparsifyingDictionary
from thz_bgsr.errors import InputError
from thz_bgsr.estimators.linalg import cholesky_factor, cholesky_solve

# Relative floor applied to plug-in hyperparameters so the prior FIM stays finite
GAMMA_FLOOR = 1e-8


@dataclass
class BCRBResult:
    """
    Attributes:
        fim: (columns, columns) Bayesian Fisher information
        bound: Lower bound on sum_k ||H_hat[k] - H[k]||_F^2
        bound_nmse: bound / E||H||^2 when the channel energy is known
    """
    fim: NDArray[np.complex128]
    bound: float
    bound_nmse: float | None = None


def plug_in_gamma(
    gamma: NDArray[np.float64],
    floor: float = GAMMA_FLOOR,
    support: NDArray[np.int64] | None = None,
) -> NDArray[np.float64]:
    """
    Converged hyperparameters floored at ``floor`` times their peak.

    Args:
        gamma: Converged BGSR hyperparameters
        floor: Relative floor for atoms off the support
        support: Indices BGSR reported as active; every other atom is set to the floor.
            None keeps all atoms

    Raises:
        InputError: All hyperparameters are zero, or the support is empty or out of range
    """
    gamma = np.asarray(gamma, dtype=float)
    peak = float(gamma.max(initial=0.0))
    if peak <= 0:
        raise InputError("Plug-in hyperparameters are all zero")
    floored = np.maximum(gamma, floor * peak)
    if support is None:
        return floored
    support = np.asarray(support, dtype=int)
    if support.size == 0:
        raise InputError("Plug-in support is empty")
    if support.min() < 0 or support.max() >= gamma.size:
        raise InputError(f"Plug-in support indices must lie in [0, {gamma.size})")
    restricted = np.full_like(floored, floor * peak)
    restricted[support] = floored[support]
    return restricted


def dictionary_gram(delta_mu: SparsifyingDictionary | NDArray[np.complex128]) -> NDArray[np.complex128]:
    """
    sum_k Psi[k]^H Psi[k].

    For a SparsifyingDictionary each user block is the Kronecker product
    (A_T^T conj(A_T)) kron (A_R^H A_R), which avoids forming Psi.
    """
    if isinstance(delta_mu, SparsifyingDictionary):
        per_user = delta_mu.columns_per_user
        gram = np.zeros((delta_mu.columns, delta_mu.columns), dtype=complex)
        rx = np.einsum("nak,nbk->abk", delta_mu.a_r.conj(), delta_mu.a_r)
        for u in range(delta_mu.num_users):
            tx = np.einsum("nak,nbk->abk", delta_mu.a_t[u], delta_mu.a_t[u].conj())
            block = sum(np.kron(tx[:, :, k], rx[:, :, k]) for k in range(delta_mu.subcarriers))
            sl = slice(u * per_user, (u + 1) * per_user)
            gram[sl, sl] = block
        return gram
    psi = np.asarray(delta_mu)
    if psi.ndim != 3:
        raise InputError(f"Dictionary tensor must be 3-D, got shape {psi.shape}")
    return np.einsum("nak,nbk->ab", psi.conj(), psi)


def bayesian_fim(
    xi_mu: NDArray[np.complex128],
    c_w: NDArray[np.complex128],
    gamma_hat: NDArray[np.float64],
) -> NDArray[np.complex128]:
    """Data information summed over subcarriers plus the prior term Gamma^-1."""
    rows, columns, k = xi_mu.shape
    gamma_hat = np.asarray(gamma_hat, dtype=float)
    if gamma_hat.shape != (columns,):
        raise InputError(f"gamma_hat must have length {columns}, got {gamma_hat.shape}")
    if np.any(gamma_hat <= 0):
        raise InputError("gamma_hat must be strictly positive")

    chol, _ = cholesky_factor(c_w, what="C_w")
    lower = np.tril(chol)
    fim = np.zeros((columns, columns), dtype=complex)
    for i in range(k):
        white = solve_triangular(lower, xi_mu[:, :, i], lower=True, check_finite=False)
        fim += white.conj().T @ white
    fim += np.diag(1.0 / gamma_hat)
    return 0.5 * (fim + fim.conj().T)


def bcrb(
    xi_mu: NDArray[np.complex128],
    c_w: NDArray[np.complex128],
    gamma_hat: NDArray[np.float64],
    delta_mu: SparsifyingDictionary | NDArray[np.complex128],
    channel_energy: float | None = None,
) -> BCRBResult:
    """
    Bound on the CFR MSE for one measurement set.

    Args:
        xi_mu: (rows, columns, K) sensing tensor
        c_w: (rows, rows) noise covariance
        gamma_hat: (columns,) prior variances, > 0 (inf drops the prior term)
        delta_mu: Dictionary or its (N_R N_T, columns, K) tensor
        channel_energy: E sum_k ||H[k]||_F^2 for the normalized bound

    Raises:
        NumericalError: The information matrix is singular
    """
    fim = bayesian_fim(xi_mu, c_w, gamma_hat)
    gram = dictionary_gram(delta_mu)
    if gram.shape != fim.shape:
        raise InputError(f"Dictionary Gram {gram.shape} does not match FIM {fim.shape}")
    bound = float(np.real(np.trace(cholesky_solve(fim, gram, what="Bayesian FIM"))))
    bound_nmse = bound / channel_energy if channel_energy else None
    return BCRBResult(fim=fim, bound=bound, bound_nmse=bound_nmse)
