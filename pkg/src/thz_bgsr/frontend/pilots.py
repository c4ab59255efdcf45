"""
Zero-padded pilot frames.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from thz_bgsr.config.scenario import ScenarioConfig


@dataclass
class PilotFrame:
    """
    Time-domain pilots of every user and block, zero-padded to K samples.

    Attributes:
        pilots: (M, U, N_RFu_T, N_p) pilot symbols
        zero_pad: Padding length L - 1
    """
    pilots: NDArray[np.complex128]
    zero_pad: int

    @property
    def pilots_per_block(self) -> int:
        return int(self.pilots.shape[-1])

    @property
    def frame_length(self) -> int:
        """K = N_p + L - 1."""
        return self.pilots_per_block + self.zero_pad

    @property
    def padded(self) -> NDArray[np.complex128]:
        """(M, U, N_RFu_T, K) pilots followed by L - 1 zeros."""
        pad = [(0, 0)] * (self.pilots.ndim - 1) + [(0, self.zero_pad)]
        return np.pad(self.pilots, pad)

    @property
    def frequency(self) -> NDArray[np.complex128]:
        """(M, U, N_RFu_T, K) unitary K-point DFT a_{m,u}[k] of the padded pilots."""
        return np.fft.fft(self.padded, axis=-1, norm="ortho")


def draw_pilot_frame(cfg: ScenarioConfig, rng: np.random.Generator) -> PilotFrame:
    """Unit-modulus QPSK pilots scaled to power sigma_b^2."""
    shape = (cfg.pilot_blocks, cfg.num_users, cfg.tx_rf_chains, cfg.pilots_per_block)
    phases = (2 * rng.integers(4, size=shape) + 1) * (np.pi / 4.0)
    pilots = np.sqrt(cfg.pilot_power) * np.exp(1j * phases)
    return PilotFrame(pilots=pilots, zero_pad=cfg.delay_taps - 1)
