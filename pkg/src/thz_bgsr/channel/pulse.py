"""
Pulse-shaping filters and the per-subcarrier delay coefficients they induce.

beta_tau[k] = sum_{l=0}^{K-1} p(l T_s - tau) exp(-j 2 pi k l / K), which is the K-point
DFT of the pulse sampled at the symbol instants and shifted by the path delay.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from thz_bgsr.config.scenario import PulseKind, ScenarioConfig
from thz_bgsr.errors import InputError

# Half-width, in symbol periods, of the tabulated pulse.
TABULATED_SPAN_SYMBOLS = 16


def rrc_impulse(t: ArrayLike, symbol_period: float, rolloff: float) -> NDArray[np.float64]:
    """
    Root-raised-cosine impulse response, p(0) = 1 + r (4/pi - 1).

    Args:
        t: Time instants in seconds
        symbol_period: T_s
        rolloff: Roll-off factor r in [0, 1]
    """
    x = np.asarray(t, dtype=float) / symbol_period
    r = rolloff
    out = np.empty_like(x)

    at_zero = np.isclose(x, 0.0, atol=1e-12)
    at_edge = np.zeros_like(at_zero) if r == 0 else np.isclose(np.abs(x), 1.0 / (4.0 * r), atol=1e-12)
    regular = ~(at_zero | at_edge)

    out[at_zero] = 1.0 + r * (4.0 / math.pi - 1.0)
    if r > 0:
        out[at_edge] = (r / math.sqrt(2.0)) * (
            (1.0 + 2.0 / math.pi) * math.sin(math.pi / (4.0 * r))
            + (1.0 - 2.0 / math.pi) * math.cos(math.pi / (4.0 * r))
        )

    xr = x[regular]
    num = np.sin(math.pi * xr * (1.0 - r)) + 4.0 * r * xr * np.cos(math.pi * xr * (1.0 + r))
    den = math.pi * xr * (1.0 - (4.0 * r * xr) ** 2)
    out[regular] = num / den
    return out


def rect_impulse(t: ArrayLike, symbol_period: float) -> NDArray[np.float64]:
    """Rectangular pulse, 1 on [0, T_s) and 0 elsewhere."""
    x = np.asarray(t, dtype=float)
    return ((x >= 0.0) & (x < symbol_period)).astype(float)


@dataclass(frozen=True)
class PulseShape:
    """
    Callable pulse p(t).

    With ``table_times``/``table_values`` set the pulse is evaluated by linear
    interpolation of a finely sampled copy (zero outside the table).
    """
    kind: PulseKind
    symbol_period: float
    rolloff: float = 0.0
    table_times: NDArray[np.float64] | None = None
    table_values: NDArray[np.float64] | None = None

    @classmethod
    def from_config(cls, cfg: ScenarioConfig) -> "PulseShape":
        shape = cls(kind=cfg.psf_kind, symbol_period=cfg.sampling_period, rolloff=cfg.rrc_rolloff)
        if cfg.psf_upsampling is not None:
            return shape.tabulated(cfg.psf_upsampling)
        return shape

    def tabulated(self, upsampling: int, span_symbols: int = TABULATED_SPAN_SYMBOLS) -> "PulseShape":
        """Copy of this pulse sampled at T_s / upsampling over +-span_symbols periods."""
        if upsampling < 1:
            raise InputError(f"Upsampling factor must be >= 1, got {upsampling}")
        step = self.symbol_period / upsampling
        count = span_symbols * upsampling
        times = np.arange(-count, count + 1) * step
        return PulseShape(
            kind=self.kind,
            symbol_period=self.symbol_period,
            rolloff=self.rolloff,
            table_times=times,
            table_values=self._analytic(times),
        )

    def __call__(self, t: ArrayLike) -> NDArray[np.float64]:
        if self.table_times is not None and self.table_values is not None:
            return np.interp(np.asarray(t, dtype=float), self.table_times, self.table_values,
                             left=0.0, right=0.0)
        return self._analytic(t)

    def _analytic(self, t: ArrayLike) -> NDArray[np.float64]:
        if self.kind == PulseKind.RRC:
            return rrc_impulse(t, self.symbol_period, self.rolloff)
        return rect_impulse(t, self.symbol_period)


def pulse_shaping_vector(tau: float, psf: PulseShape, num_subcarriers: int) -> NDArray[np.complex128]:
    """
    beta_tau for every subcarrier k = 0..K-1.

    Args:
        tau: Path delay in seconds, >= 0
        psf: Pulse shape (its symbol period is T_s)
        num_subcarriers: K

    Returns:
        Length-K complex vector
    """
    if tau < 0:
        raise InputError(f"Path delay must be >= 0, got {tau}")
    samples = psf(np.arange(num_subcarriers) * psf.symbol_period - tau)
    return np.fft.fft(samples)


def pulse_shaping_coefficient(k: int, tau: float, psf: PulseShape, cfg: ScenarioConfig) -> complex:
    """
    beta_tau at a single subcarrier.

    Args:
        k: Zero-based DFT index, 0 <= k < K
        tau: Path delay in seconds
        psf: Pulse shape
        cfg: Scenario supplying K

    Returns:
        Complex coefficient
    """
    num = cfg.subcarriers
    if not 0 <= k < num:
        raise InputError(f"DFT index {k} outside 0..{num - 1}")
    return complex(pulse_shaping_vector(tau, psf, num)[k])
