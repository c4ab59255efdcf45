"""
Subcarrier frequencies and frequency-dependent ULA steering vectors.

Half-wavelength spacing at the carrier; the phase progression scales with
rho_k = f_k / f_c, which is what makes the array manifold squint across the band.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from thz_bgsr.config.scenario import ScenarioConfig
from thz_bgsr.errors import InputError


def subcarrier_frequency(k: int, cfg: ScenarioConfig) -> float:
    """
    Frequency of subcarrier k (1-based).

    Args:
        k: Subcarrier index, 1 <= k <= K
        cfg: Scenario supplying f_c, B and K

    Returns:
        f_c + (k - (K + 1) / 2) * B / K in Hz
    """
    num = cfg.subcarriers
    if not 1 <= k <= num:
        raise InputError(f"Subcarrier index {k} outside 1..{num}")
    return float(cfg.carrier_hz + (k - (num + 1) / 2.0) * cfg.bandwidth_hz / num)


def subcarrier_frequencies(cfg: ScenarioConfig) -> NDArray[np.float64]:
    """All K subcarrier frequencies in index order."""
    k = np.arange(1, cfg.subcarriers + 1, dtype=float)
    return cfg.carrier_hz + (k - (cfg.subcarriers + 1) / 2.0) * cfg.bandwidth_hz / cfg.subcarriers


def grid_cosines(size: int) -> NDArray[np.float64]:
    """Directional cosines 2 (r - 1) / G - 1 for r = 1..G."""
    if size < 1:
        raise InputError(f"Grid size must be >= 1, got {size}")
    return 2.0 * np.arange(size) / size - 1.0


def effective_aoa(phi: ArrayLike, rho_k: float) -> NDArray[np.float64]:
    """
    Squinted spatial angle seen at relative frequency rho_k.

    The cosine is clamped to [-1, 1] so the result stays real for extreme rho_k.
    """
    if rho_k <= 0:
        raise InputError(f"rho_k must be positive, got {rho_k}")
    cosine = np.clip(rho_k * np.cos(np.asarray(phi, dtype=float)), -1.0, 1.0)
    return np.arccos(cosine)


def steering_matrix(phis: ArrayLike, f_k: float, n: int, f_c: float) -> NDArray[np.complex128]:
    """
    Steering vectors for several angles, one per column.

    Args:
        phis: Angles in radians
        f_k: Subcarrier frequency in Hz
        n: Number of antennas
        f_c: Carrier frequency in Hz

    Returns:
        (n, len(phis)) matrix with unit-norm columns
    """
    if n < 1:
        raise InputError(f"Antenna count must be >= 1, got {n}")
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    rho = f_k / f_c
    idx = np.arange(n)[:, None]
    return np.exp(-1j * np.pi * idx * rho * np.cos(phis)[None, :]) / np.sqrt(n)


def steering_vector(phi: float, f_k: float, n: int, f_c: float) -> NDArray[np.complex128]:
    """Single steering vector a(phi, f_k) of length n."""
    return steering_matrix([phi], f_k, n, f_c)[:, 0]


def steering_derivative(phis: ArrayLike, f_k: float, n: int, f_c: float) -> NDArray[np.complex128]:
    """
    Angular derivative d a(phi, f_k) / d phi, one column per angle.

    Entry m is (j pi m rho sin phi) times the steering entry.
    """
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    rho = f_k / f_c
    idx = np.arange(n)[:, None]
    return (1j * np.pi * idx * rho * np.sin(phis)[None, :]) * steering_matrix(phis, f_k, n, f_c)
