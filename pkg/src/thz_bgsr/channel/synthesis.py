"""
Multi-user dual-wideband channel synthesis.

H_u[k] is the LoS rank-one term plus the normalized sum over NLoS clusters and diffuse
rays, each term being

    scale * alpha(f_k, d) * beta_tau[k] * B_T,u * B_R * a_R(phi, f_k) a_T(theta, f_k)^H

with scale = sqrt(N_Tu N_R) for LoS and sqrt(N_Tu N_R / (N_NLoS N_ray)) for NLoS. Users
are concatenated column-wise; taps are the K-point inverse DFT of the CFR.
"""

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from thz_bgsr.channel.angles import draw_angles
from thz_bgsr.channel.geometry import steering_matrix, subcarrier_frequencies
from thz_bgsr.channel.losses import (
    AbsorptionTable,
    absorption_from_config,
    free_space_loss,
    molecular_absorption_loss,
    reflection_coefficient,
)
from thz_bgsr.channel.materials import MaterialProps, load_materials
from thz_bgsr.channel.paths import PathComponent, PathKind, draw_paths
from thz_bgsr.channel.pulse import PulseShape, pulse_shaping_vector
from thz_bgsr.config.scenario import ScenarioConfig
from thz_bgsr.errors import InputError

logger = logging.getLogger(__name__)


@dataclass
class MultiUserChannel:
    """
    Per-subcarrier channel of all users.

    Attributes:
        cfr: (N_R, U * N_Tu, K) frequency response H_MU[k]
        taps: (N_R, U * N_Tu, K) K-point inverse DFT of cfr along the last axis
        paths: Path components per user
        tx_antennas_per_user: N_Tu, for slicing user blocks
    """
    cfr: NDArray[np.complex128]
    taps: NDArray[np.complex128]
    paths: list[list[PathComponent]]
    tx_antennas_per_user: int

    @property
    def num_users(self) -> int:
        return len(self.paths)

    @property
    def energy(self) -> float:
        """sum_k ||H_MU[k]||_F^2."""
        return float(np.sum(np.abs(self.cfr) ** 2))

    def user_columns(self, u: int) -> slice:
        n = self.tx_antennas_per_user
        return slice(u * n, (u + 1) * n)

    def user_cfr(self, u: int) -> NDArray[np.complex128]:
        """(N_R, N_Tu, K) block of user u."""
        return self.cfr[:, self.user_columns(u), :]


def path_gain(
    path: PathComponent,
    f_k: float,
    kabs: AbsorptionTable | float,
) -> complex:
    """
    Complex path gain alpha(f_k, d).

    |alpha|^2 = L_free L_abs for LoS and |Upsilon| L_free L_abs for NLoS; the phase is the
    path's drawn phase.
    """
    power = free_space_loss(f_k, path.distance_m) * molecular_absorption_loss(f_k, path.distance_m, kabs)
    if path.kind == PathKind.NLOS:
        assert path.material is not None and path.incidence_deg is not None
        upsilon = reflection_coefficient(f_k, path.material, math.radians(path.incidence_deg))
        power *= abs(upsilon)
    return math.sqrt(power) * cmath.exp(1j * path.gain_phase_rad)


def path_scale(cfg: ScenarioConfig, kind: PathKind) -> float:
    """Array-size normalization of a LoS or NLoS term."""
    base = cfg.tx_antennas_per_user * cfg.rx_antennas
    if kind == PathKind.LOS:
        return math.sqrt(base)
    return math.sqrt(base / (cfg.nlos_clusters * cfg.diffuse_rays))


def channel_term(
    scale: float,
    alpha: complex,
    beta: complex,
    tx_gain: float,
    rx_gain: float,
    a_r: NDArray[np.complex128],
    a_t: NDArray[np.complex128],
) -> NDArray[np.complex128]:
    """Single-path contribution scale * alpha * beta * B_T * B_R * a_R a_T^H."""
    return scale * alpha * beta * tx_gain * rx_gain * np.outer(a_r, a_t.conj())


def path_coefficients(
    cfg: ScenarioConfig,
    paths: list[PathComponent],
    psf: PulseShape,
    kabs: AbsorptionTable | float,
) -> NDArray[np.complex128]:
    """
    Scalar weight of every path on every subcarrier.

    Returns:
        (P, K) array of scale * alpha(f_k) * beta_tau[k] * B_T,u * B_R
    """
    freqs = subcarrier_frequencies(cfg)
    coeffs = np.empty((len(paths), cfg.subcarriers), dtype=complex)
    gain = cfg.tx_gain_per_user * cfg.rx_gain
    for p, path in enumerate(paths):
        beta = pulse_shaping_vector(path.delay_s, psf, cfg.subcarriers)
        alpha = np.array([path_gain(path, f, kabs) for f in freqs])
        coeffs[p] = path_scale(cfg, path.kind) * alpha * beta * gain
    return coeffs


def build_mu_cfr(
    cfg: ScenarioConfig,
    paths: list[list[PathComponent]],
    psf: PulseShape | None = None,
    kabs: AbsorptionTable | float | None = None,
) -> MultiUserChannel:
    """
    Assemble H_MU[k] for all subcarriers from per-user paths.

    Args:
        cfg: Scenario
        paths: Per-user path lists (one list per user, each nonempty)
        psf: Pulse shape (defaults to the scenario's)
        kabs: Absorption lookup (defaults to the scenario's)

    Returns:
        MultiUserChannel with cfr and taps
    """
    if len(paths) != cfg.num_users:
        raise InputError(f"Expected paths for {cfg.num_users} users, got {len(paths)}")
    if any(not user_paths for user_paths in paths):
        raise InputError("Every user needs at least one path")

    psf = psf or PulseShape.from_config(cfg)
    kabs = absorption_from_config(cfg) if kabs is None else kabs
    freqs = subcarrier_frequencies(cfg)
    n_r, n_t = cfg.rx_antennas, cfg.tx_antennas_per_user

    cfr = np.zeros((n_r, cfg.total_tx_antennas, cfg.subcarriers), dtype=complex)
    for u, user_paths in enumerate(paths):
        coeffs = path_coefficients(cfg, user_paths, psf, kabs)
        aoa = np.radians([p.aoa_deg for p in user_paths])
        aod = np.radians([p.aod_deg for p in user_paths])
        cols = slice(u * n_t, (u + 1) * n_t)
        for k, f_k in enumerate(freqs):
            a_r = steering_matrix(aoa, f_k, n_r, cfg.carrier_hz)
            a_t = steering_matrix(aod, f_k, n_t, cfg.carrier_hz)
            cfr[:, cols, k] = (a_r * coeffs[:, k]) @ a_t.conj().T

    taps = np.fft.ifft(cfr, axis=-1)
    return MultiUserChannel(cfr=cfr, taps=taps, paths=paths, tx_antennas_per_user=n_t)


def generate_channel(
    cfg: ScenarioConfig,
    rng: np.random.Generator,
    materials: list[MaterialProps] | None = None,
    kabs: AbsorptionTable | float | None = None,
) -> MultiUserChannel:
    """Draw angles and paths for every user and synthesize the channel."""
    materials = materials if materials is not None else load_materials(cfg.materials_table)
    angles = draw_angles(cfg, rng)
    paths = draw_paths(cfg, angles, materials, rng)
    channel = build_mu_cfr(cfg, paths, kabs=kabs)
    logger.debug("Synthesized channel: %d users, energy %.4e", cfg.num_users, channel.energy)
    return channel
