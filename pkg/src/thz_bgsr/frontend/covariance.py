"""
Noise covariances of the quantized hybrid receiver.

Q_m is the covariance of the unquantized antenna signal, C_m the Bussgang distortion
covariance it induces, and R_vv,m the effective noise covariance after combining. The
estimators only ever see C_w = blkdiag(R_vv,1, ..., R_vv,M).
"""

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import block_diag

from thz_bgsr.errors import InputError, NumericalError

HERMITIAN_TOL = 1e-10


def transmit_covariance(f_rf: NDArray[np.complex128], pilot_power: float) -> NDArray[np.complex128]:
    """
    Per-user pilot covariance sigma_b^2 F F^H.

    Args:
        f_rf: (U, N_Tu, N_RFu_T) precoders of one block

    Returns:
        (U, N_Tu, N_Tu)
    """
    return pilot_power * np.einsum("uir,ujr->uij", f_rf, f_rf.conj())


def signal_covariance_Q(
    channel_taps: NDArray[np.complex128],
    r_xx: NDArray[np.complex128],
) -> NDArray[np.complex128]:
    """
    Q_m = sum_u sum_n H_u(n) R_xx,u H_u(n)^H.

    Args:
        channel_taps: (N_R, U * N_Tu, K) delay-domain channel
        r_xx: (U, N_Tu, N_Tu) per-user pilot covariances, or one (N_Tu, N_Tu) matrix
            shared by all users

    Returns:
        (N_R, N_R) Hermitian matrix
    """
    taps = np.asarray(channel_taps)
    r_xx = np.asarray(r_xx)
    if taps.ndim != 3:
        raise InputError(f"channel_taps must be (N_R, N_T, K), got shape {taps.shape}")
    if r_xx.ndim == 2:
        r_xx = r_xx[None]
    if r_xx.ndim != 3 or r_xx.shape[1] != r_xx.shape[2]:
        raise InputError(f"r_xx must be square per user, got shape {r_xx.shape}")

    n_r, n_t, k = taps.shape
    users, n_tu = r_xx.shape[0], r_xx.shape[1]
    if users == 1 and n_t % n_tu == 0 and n_t != n_tu:
        users = n_t // n_tu
        r_xx = np.broadcast_to(r_xx, (users, n_tu, n_tu))
    if users * n_tu != n_t:
        raise InputError(
            f"r_xx covers {users} x {n_tu} transmit antennas but the channel has {n_t}"
        )

    h = taps.reshape(n_r, users, n_tu, k)
    return np.einsum("auin,uij,bujn->ab", h, r_xx, h.conj())


def quantizer_noise_covariance(
    w_rf: NDArray[np.complex128],
    q_m: NDArray[np.complex128],
    sigma_n2: float,
    eps: float,
) -> NDArray[np.complex128]:
    """
    Bussgang distortion covariance C_m = eps (1 - eps) diag(W^H Q_m W + sigma^2 W^H W).

    Returns:
        (N_RF_R, N_RF_R) diagonal matrix, exactly zero for eps = 1
    """
    if not 0.0 < eps <= 1.0:
        raise InputError(f"eps must lie in (0, 1], got {eps}")
    w_h = w_rf.conj().T
    total = w_h @ q_m @ w_rf + sigma_n2 * (w_h @ w_rf)
    return eps * (1.0 - eps) * np.diag(np.diag(total))


def effective_noise_covariance(
    w_rf: NDArray[np.complex128],
    c_m: NDArray[np.complex128],
    eps: float,
    sigma_n2: float,
) -> NDArray[np.complex128]:
    """
    R_vv,m = eps^2 sigma^2 W^H W + C_m.

    Raises:
        InputError: c_m is not Hermitian positive semidefinite
    """
    c_m = np.asarray(c_m)
    scale = max(1.0, float(np.max(np.abs(c_m)))) if c_m.size else 1.0
    if np.max(np.abs(c_m - c_m.conj().T), initial=0.0) > HERMITIAN_TOL * scale:
        raise InputError("c_m must be Hermitian")
    if c_m.size and np.min(np.linalg.eigvalsh(c_m)) < -HERMITIAN_TOL * scale:
        raise InputError("c_m must be positive semidefinite")
    r_vv = eps**2 * sigma_n2 * (w_rf.conj().T @ w_rf) + c_m
    return 0.5 * (r_vv + r_vv.conj().T)


def draw_noise(
    r_vv: NDArray[np.complex128],
    count: int,
    rng: np.random.Generator,
) -> NDArray[np.complex128]:
    """
    Circular Gaussian samples with covariance r_vv.

    Singular PSD covariances fall back to an eigendecomposition square root.

    Returns:
        (n, count) matrix of independent CN(0, r_vv) columns

    Raises:
        NumericalError: r_vv has a clearly negative eigenvalue
    """
    n = r_vv.shape[0]
    try:
        root = np.linalg.cholesky(r_vv)
    except np.linalg.LinAlgError:
        values, vectors = np.linalg.eigh(0.5 * (r_vv + r_vv.conj().T))
        scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
        if np.min(values, initial=0.0) < -HERMITIAN_TOL * scale:
            raise NumericalError(
                f"Noise covariance ({n}x{n}) is not positive semidefinite",
                condition=float(np.linalg.cond(r_vv)),
            ) from None
        root = vectors * np.sqrt(np.clip(values, 0.0, None))
    white = (rng.standard_normal((n, count)) + 1j * rng.standard_normal((n, count))) / np.sqrt(2.0)
    return root @ white


def sample_covariance(samples: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Zero-mean sample covariance of the columns of ``samples``."""
    count = samples.shape[1]
    return (samples @ samples.conj().T) / count


def stack_block_covariance(blocks: list[NDArray[np.complex128]] | NDArray[np.complex128]) -> NDArray[np.complex128]:
    """C_w = blkdiag(R_vv,1, ..., R_vv,M)."""
    return np.asarray(block_diag(*blocks))
