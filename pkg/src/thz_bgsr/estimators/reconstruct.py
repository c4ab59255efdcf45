"""
Beamspace-to-CFR reconstruction.
"""

from typing import Literal

import numpy as np
from numpy.typing import NDArray

from thz_bgsr.channel.geometry import steering_matrix
from thz_bgsr.config.scenario import DictionaryMode
from thz_bgsr.dictionary.sparsifying import SparsifyingDictionary, estimate_offsets, split_user_beamspace
from thz_bgsr.errors import InputError

Fold = Literal["linear", "refine"]


def reconstruct_channel(
    h_b_hat: NDArray[np.complex128],
    dictionary: SparsifyingDictionary,
    fold: Fold = "linear",
) -> NDArray[np.complex128]:
    """
    H[k] = A_R[k] H_b,u[k] A_T,u[k]^H for every user, concatenated column-wise.

    ``fold="linear"`` maps through the (possibly Taylor-augmented) manifolds as they are.
    ``fold="refine"`` turns TBoD derivative coefficients into per-atom angle offsets and
    re-synthesizes the base coefficients with steering vectors at the refined angles.

    Args:
        h_b_hat: (columns, K) beamspace coefficients
        dictionary: Dictionary the coefficients refer to
        fold: Treatment of derivative atoms

    Returns:
        (N_R, U * N_Tu, K) channel estimate
    """
    h_b_hat = np.asarray(h_b_hat)
    if h_b_hat.ndim == 1:
        h_b_hat = h_b_hat[:, None]
    if h_b_hat.shape != (dictionary.columns, dictionary.subcarriers):
        raise InputError(
            f"Estimate shape {h_b_hat.shape} does not match dictionary "
            f"({dictionary.columns}, {dictionary.subcarriers})"
        )
    if fold == "refine" and dictionary.mode == DictionaryMode.TBOD:
        return _refine(h_b_hat, dictionary)
    if fold not in ("linear", "refine"):
        raise InputError(f"Unknown fold {fold!r}")

    blocks = []
    for u in range(dictionary.num_users):
        coeffs = split_user_beamspace(h_b_hat, dictionary, u)
        blocks.append(
            np.einsum("ark,rtk,itk->aik", dictionary.a_r, coeffs, dictionary.a_t[u].conj())
        )
    return np.concatenate(blocks, axis=1)


def _refine(h_b_hat: NDArray[np.complex128], dictionary: SparsifyingDictionary) -> NDArray[np.complex128]:
    g_r, g_t = dictionary.grid_rx.size, dictionary.grid_tx.size
    n_r, n_tu = dictionary.a_r.shape[0], dictionary.a_t.shape[1]
    phi_grid = dictionary.grid_rx.points
    theta_grid = dictionary.grid_tx.points

    blocks = []
    for u, (dphi, dtheta, _active) in enumerate(estimate_offsets(h_b_hat, dictionary)):
        base = split_user_beamspace(h_b_hat, dictionary, u)[:g_r, :g_t]
        rows, cols = (idx.ravel() for idx in np.indices((g_r, g_t)))
        phis = phi_grid[rows] + dphi[rows, cols]
        thetas = theta_grid[cols] + dtheta[rows, cols]
        out = np.zeros((n_r, n_tu, dictionary.subcarriers), dtype=complex)
        for k, f_k in enumerate(dictionary.frequencies):
            a_r = steering_matrix(phis, f_k, n_r, dictionary.carrier_hz)
            a_t = steering_matrix(thetas, f_k, n_tu, dictionary.carrier_hz)
            out[:, :, k] = (a_r * base[rows, cols, k]) @ a_t.conj().T
        blocks.append(out)
    return np.concatenate(blocks, axis=1)
