"""
Stacked per-subcarrier pilot measurements.

Per block m and subcarrier k the linearized receiver output is

    y_m[k] = D W_m^H H_MU[k] s_m[k] + v_m[k],    s_m[k] = [F_m,1 a_m,1[k]; ...; F_m,U a_m,U[k]]

and with vec(H) column-major, D W^H H s = (s^T kron D W^H) vec(H) = Lambda_m[k] vec(H).
Blocks are stacked so that y_mu[:, k] has length M * N_RF_R.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from thz_bgsr.channel.synthesis import MultiUserChannel
from thz_bgsr.config.scenario import NoiseCovarianceMode
from thz_bgsr.errors import ConfigError, InputError
from thz_bgsr.frontend.codebooks import RFCodebook
from thz_bgsr.frontend.covariance import (
    draw_noise,
    effective_noise_covariance,
    quantizer_noise_covariance,
    sample_covariance,
    signal_covariance_Q,
    stack_block_covariance,
    transmit_covariance,
)
from thz_bgsr.frontend.pilots import PilotFrame
from thz_bgsr.frontend.quantization import QuantizationModel

logger = logging.getLogger(__name__)


@dataclass
class MeasurementSet:
    """
    Everything the estimators need from one pilot transmission.

    Attributes:
        y_mu: (M * N_RF_R, K) stacked noisy outputs
        noiseless: (M * N_RF_R, K) stacked outputs without v
        lambda_ops: (M, N_RF_R, N_R * N_T, K) measurement operators Lambda_m[k]
        transmit: (M, N_T, K) stacked precoded pilots s_m[k]
        r_vv: (M, N_RF_R, N_RF_R) analytic per-block noise covariances
        c_w: Noise covariance handed to the estimators (analytic or sampled)
        quant: ADC model used
        xi_mu: (M * N_RF_R, columns, K) sensing tensor, attached once a dictionary is chosen
    """
    y_mu: NDArray[np.complex128]
    noiseless: NDArray[np.complex128]
    lambda_ops: NDArray[np.complex128]
    transmit: NDArray[np.complex128]
    r_vv: NDArray[np.complex128]
    c_w: NDArray[np.complex128]
    quant: QuantizationModel
    xi_mu: NDArray[np.complex128] | None = field(default=None, repr=False)

    @property
    def pilot_blocks(self) -> int:
        return int(self.lambda_ops.shape[0])

    @property
    def rows(self) -> int:
        return int(self.y_mu.shape[0])

    @property
    def subcarriers(self) -> int:
        return int(self.y_mu.shape[1])

    @property
    def c_w_true(self) -> NDArray[np.complex128]:
        """Analytic blkdiag(R_vv,1, ..., R_vv,M)."""
        return stack_block_covariance(list(self.r_vv))


def stack_transmit(codebook: RFCodebook, frame: PilotFrame) -> NDArray[np.complex128]:
    """
    Precoded pilots s_m[k], users stacked in index order.

    Returns:
        (M, U * N_Tu, K)
    """
    freq = frame.frequency
    per_user = np.einsum("muir,murk->muik", codebook.f_rf, freq)
    m, u, n_tu, k = per_user.shape
    return per_user.reshape(m, u * n_tu, k)


def measurement_operator(
    s_k: NDArray[np.complex128],
    w_rf: NDArray[np.complex128],
    eps: float,
) -> NDArray[np.complex128]:
    """
    Lambda = s^T kron (eps W^H), shape (N_RF_R, N_R * N_T).

    Args:
        s_k: (N_T,) stacked precoded pilot of one block and subcarrier
        w_rf: (N_R, N_RF_R) combiner
        eps: Bussgang gain
    """
    s_k = np.asarray(s_k).reshape(-1)
    return np.kron(s_k[None, :], eps * w_rf.conj().T)


def _block_operators(
    s_m: NDArray[np.complex128],
    w_rf: NDArray[np.complex128],
    eps: float,
) -> NDArray[np.complex128]:
    # kron(s^T, B)[i, c * N_R + r] = s[c] B[i, r]
    b = eps * w_rf.conj().T
    n_rf, n_r = b.shape
    n_t, k = s_m.shape
    return np.einsum("ck,ir->icrk", s_m, b).reshape(n_rf, n_t * n_r, k)


def pilot_output_time_domain(
    channel: MultiUserChannel,
    codebook: RFCodebook,
    frame: PilotFrame,
) -> NDArray[np.complex128]:
    """
    Antenna-domain pilot response via length-K circular convolution with the taps.

    Returns:
        (M, N_R, K) unitary DFT of sum_l H(l) x_m((n - l) mod K)
    """
    taps = channel.taps
    n_r, n_t, k = taps.shape
    x = np.einsum("muir,murn->muin", codebook.f_rf, frame.padded)
    x = x.reshape(x.shape[0], n_t, k)

    out = np.zeros((x.shape[0], n_r, k), dtype=complex)
    for m in range(x.shape[0]):
        for n in range(k):
            for lag in range(k):
                out[m, :, n] += taps[:, :, lag] @ x[m, :, (n - lag) % k]
    return np.fft.fft(out, axis=-1, norm="ortho")


def synthesize_measurements(
    channel: MultiUserChannel,
    codebook: RFCodebook,
    frame: PilotFrame,
    quant: QuantizationModel,
    noise_var: float,
    rng: np.random.Generator,
    *,
    pilot_power: float = 1.0,
    add_noise: bool = True,
    noise_covariance: NoiseCovarianceMode = NoiseCovarianceMode.ANALYTIC,
    noise_samples: int = 200,
) -> MeasurementSet:
    """
    Form y_mu, the operators Lambda and the noise covariance for one trial.

    Args:
        channel: True multi-user channel
        codebook: Combiners and precoders
        frame: Pilots, K = N_p + L - 1 after padding
        quant: Linearized ADC model
        noise_var: Per-antenna noise variance sigma^2
        rng: Random generator for the noise
        pilot_power: sigma_b^2 used in Q_m
        add_noise: Draw v_m[k] ~ CN(0, R_vv,m); False gives y_mu = noiseless
        noise_covariance: Hand the analytic R_vv or a sample estimate to the estimators
        noise_samples: Draws per block for the sampled estimate

    Raises:
        ConfigError: Frame length does not match the channel's subcarriers
        InputError: Codebook or channel dimensions disagree
    """
    n_r, n_t, k = channel.cfr.shape
    if frame.frame_length != k:
        raise ConfigError(
            f"Frame length N_p + L - 1 = {frame.frame_length} does not match K = {k}",
            keys=("subcarriers", "pilots_per_block", "delay_taps"),
        )
    if codebook.w_rf.shape[1] != n_r:
        raise InputError(f"Combiner has {codebook.w_rf.shape[1]} rows, channel has {n_r} receive antennas")
    if noise_var < 0:
        raise InputError(f"noise_var must be >= 0, got {noise_var}")

    transmit = stack_transmit(codebook, frame)
    if transmit.shape[1] != n_t:
        raise InputError(f"Precoders cover {transmit.shape[1]} transmit antennas, channel has {n_t}")

    eps = quant.epsilon
    blocks = codebook.pilot_blocks
    n_rf = codebook.w_rf.shape[2]

    lambda_ops = np.empty((blocks, n_rf, n_r * n_t, k), dtype=complex)
    noiseless = np.empty((blocks, n_rf, k), dtype=complex)
    r_vv = np.empty((blocks, n_rf, n_rf), dtype=complex)
    noise = np.zeros((blocks, n_rf, k), dtype=complex)
    used: list[NDArray[np.complex128]] = []

    for m in range(blocks):
        w = codebook.w_rf[m]
        lambda_ops[m] = _block_operators(transmit[m], w, eps)
        noiseless[m] = eps * np.einsum("ri,rtk,tk->ik", w.conj(), channel.cfr, transmit[m])

        q_m = signal_covariance_Q(channel.taps, transmit_covariance(codebook.f_rf[m], pilot_power))
        c_m = quantizer_noise_covariance(w, q_m, noise_var, eps)
        r_vv[m] = effective_noise_covariance(w, c_m, eps, noise_var)

        if add_noise and noise_var > 0:
            noise[m] = draw_noise(r_vv[m], k, rng)
        if noise_covariance == NoiseCovarianceMode.SAMPLED and noise_var > 0:
            used.append(sample_covariance(draw_noise(r_vv[m], noise_samples, rng)))
        else:
            used.append(r_vv[m])

    y = (noiseless + noise).reshape(blocks * n_rf, k)
    logger.debug(
        "Measurements: %d blocks x %d RF chains x %d subcarriers, eps=%.5f",
        blocks, n_rf, k, eps,
    )
    return MeasurementSet(
        y_mu=y,
        noiseless=noiseless.reshape(blocks * n_rf, k),
        lambda_ops=lambda_ops,
        transmit=transmit,
        r_vv=r_vv,
        c_w=stack_block_covariance(used),
        quant=quant,
    )
