"""
Hybrid RF codebooks built from quantized phase shifters.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import block_diag

from thz_bgsr.config.scenario import ScenarioConfig
from thz_bgsr.errors import InputError


def draw_quantized_phasebook(
    rows: int,
    cols: int,
    phase_bits: int,
    scale: float,
    rng: np.random.Generator,
) -> NDArray[np.complex128]:
    """
    Matrix of constant-modulus entries with N_Q-bit phases.

    Phases are uniform over {0, 2 pi / 2^N_Q, ..., (2^N_Q - 1) 2 pi / 2^N_Q}.

    Args:
        rows: Matrix rows
        cols: Matrix columns
        phase_bits: N_Q >= 1
        scale: Entry modulus
        rng: Random generator

    Returns:
        (rows, cols) complex matrix
    """
    if phase_bits < 1:
        raise InputError(f"phase_bits must be >= 1, got {phase_bits}")
    levels = 2 ** phase_bits
    phases = rng.integers(levels, size=(rows, cols)) * (2.0 * np.pi / levels)
    return scale * np.exp(1j * phases)


@dataclass
class RFCodebook:
    """
    Analog combiners and precoders for every pilot block.

    Attributes:
        w_rf: (M, N_R, N_RF_R) receive combiners, entries of modulus 1/sqrt(N_R)
        f_rf: (M, U, N_Tu, N_RFu_T) per-user precoders, entries of modulus 1/sqrt(N_Tu)
    """
    w_rf: NDArray[np.complex128]
    f_rf: NDArray[np.complex128]

    @property
    def pilot_blocks(self) -> int:
        return int(self.w_rf.shape[0])

    @property
    def num_users(self) -> int:
        return int(self.f_rf.shape[1])

    def precoder_mu(self, m: int) -> NDArray[np.complex128]:
        """Block-diagonal precoder of all users for block m, (U N_Tu, U N_RFu_T)."""
        return np.asarray(block_diag(*self.f_rf[m]))


def draw_codebooks(cfg: ScenarioConfig, rng: np.random.Generator) -> RFCodebook:
    """Random phase-quantized combiners and precoders for all M blocks."""
    w_rf = np.stack([
        draw_quantized_phasebook(
            cfg.rx_antennas, cfg.rx_rf_chains, cfg.phase_bits, 1.0 / np.sqrt(cfg.rx_antennas), rng
        )
        for _ in range(cfg.pilot_blocks)
    ])
    f_rf = np.stack([
        np.stack([
            draw_quantized_phasebook(
                cfg.tx_antennas_per_user,
                cfg.tx_rf_chains,
                cfg.phase_bits,
                1.0 / np.sqrt(cfg.tx_antennas_per_user),
                rng,
            )
            for _ in range(cfg.num_users)
        ])
        for _ in range(cfg.pilot_blocks)
    ])
    return RFCodebook(w_rf=w_rf, f_rf=f_rf)
