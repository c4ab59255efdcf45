"""
Data-phase bit error rate with a linear MMSE receiver.

Data streams use the block-0 pilot codebooks: each user's RF chains carry one Gray-coded
PSK stream, and the receiver sees the effective channel eps W_0^H H[k] F_0.
"""

import numpy as np
from numpy.typing import NDArray

from thz_bgsr.errors import InputError
from thz_bgsr.estimators.linalg import cholesky_solve
from thz_bgsr.frontend.codebooks import RFCodebook
from thz_bgsr.frontend.covariance import draw_noise

SUPPORTED_PSK_ORDERS = (2, 4, 8, 16, 32, 64)


def psk_constellation(order: int) -> NDArray[np.complex128]:
    """Unit-energy points exp(j 2 pi m / M)."""
    if order not in SUPPORTED_PSK_ORDERS:
        raise InputError(f"PSK order must be one of {SUPPORTED_PSK_ORDERS}, got {order}")
    return np.exp(2j * np.pi * np.arange(order) / order)


def gray_labels(order: int) -> NDArray[np.int64]:
    """Bit label of point m is m xor (m >> 1)."""
    m = np.arange(order)
    return m ^ (m >> 1)


def count_bit_errors(sent: NDArray[np.int64], detected: NDArray[np.int64], order: int) -> int:
    """Hamming distance between the Gray labels of symbol indices."""
    labels = gray_labels(order)
    diff = (labels[sent] ^ labels[detected]).astype(np.uint8)
    return int(np.unpackbits(diff[..., None], axis=-1).sum())


def effective_channel(
    cfr: NDArray[np.complex128],
    codebook: RFCodebook,
    eps: float,
    block: int = 0,
) -> NDArray[np.complex128]:
    """
    eps W^H H[k] F for every subcarrier.

    Args:
        cfr: (N_R, U * N_Tu, K) channel
        codebook: RF codebooks; ``block`` selects the pair used for data

    Returns:
        (N_RF_R, U * N_RFu_T, K)
    """
    w = codebook.w_rf[block]
    f = codebook.precoder_mu(block)
    return eps * np.einsum("ri,rtk,ts->isk", w.conj(), cfr, f)


def mmse_equalize_detect(
    h_hat_k: NDArray[np.complex128],
    tx_symbols: NDArray[np.int64],
    noise_var: float,
    constellation: NDArray[np.complex128],
    rng: np.random.Generator,
    h_true_k: NDArray[np.complex128] | None = None,
    noise_cov: NDArray[np.complex128] | None = None,
) -> float:
    """
    Transmit PSK symbols, equalize with the estimated channel and return the BER.

    The receiver applies W = (H_hat^H H_hat + sigma^2 I)^-1 H_hat^H and demaps to the
    nearest constellation point.

    Args:
        h_hat_k: (N_RF_R, S) estimated effective channel
        tx_symbols: (S, N_d) constellation indices
        noise_var: sigma^2 in the equalizer
        constellation: PSK points, index order
        rng: Noise generator
        h_true_k: Effective channel the data goes through (defaults to h_hat_k)
        noise_cov: (N_RF_R, N_RF_R) receive noise covariance (defaults to sigma^2 I);
            an all-zero matrix gives noiseless reception

    Returns:
        Fraction of bits in error
    """
    h_true_k = h_hat_k if h_true_k is None else h_true_k
    rows, streams = h_true_k.shape
    if tx_symbols.shape[0] != streams:
        raise InputError(f"Expected {streams} symbol streams, got {tx_symbols.shape[0]}")
    order = constellation.size

    x = constellation[tx_symbols]
    received = h_true_k @ x
    cov = noise_var * np.eye(rows) if noise_cov is None else noise_cov
    if np.any(cov != 0):
        received = received + draw_noise(cov, x.shape[1], rng)

    gram = h_hat_k.conj().T @ h_hat_k + noise_var * np.eye(streams)
    if noise_var == 0:
        equalized = np.linalg.lstsq(h_hat_k, received, rcond=None)[0]
    else:
        equalized = cholesky_solve(gram, h_hat_k.conj().T @ received, what="MMSE Gram")
    detected = np.argmin(np.abs(equalized[..., None] - constellation) ** 2, axis=-1)

    bits_per_symbol = int(np.log2(order))
    return count_bit_errors(tx_symbols, detected, order) / (tx_symbols.size * bits_per_symbol)


def link_ber(
    h_hat: NDArray[np.complex128],
    h_true: NDArray[np.complex128],
    codebook: RFCodebook,
    eps: float,
    noise_var: float,
    noise_cov: NDArray[np.complex128],
    psk_order: int,
    data_vectors: int,
    rng: np.random.Generator,
) -> float:
    """
    BER averaged over all subcarriers, N_d data vectors each.

    Args:
        h_hat: (N_R, U * N_Tu, K) channel estimate
        h_true: (N_R, U * N_Tu, K) true channel
        codebook: Pilot-phase codebooks, block 0 reused for data
        eps: Bussgang gain
        noise_var: sigma^2
        noise_cov: Effective noise covariance of block 0
        psk_order: M-PSK order
        data_vectors: N_d
        rng: Symbol and noise generator
    """
    constellation = psk_constellation(psk_order)
    est = effective_channel(h_hat, codebook, eps)
    true = effective_channel(h_true, codebook, eps)
    streams, k = true.shape[1], true.shape[2]
    total = 0.0
    for i in range(k):
        symbols = rng.integers(psk_order, size=(streams, data_vectors))
        total += mmse_equalize_detect(
            est[:, :, i], symbols, noise_var, constellation, rng, h_true_k=true[:, :, i], noise_cov=noise_cov
        )
    return total / k
