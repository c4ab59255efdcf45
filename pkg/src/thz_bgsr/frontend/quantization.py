"""
Low-resolution ADC model.

The estimators see the Bussgang-linearized receiver y = D r + v with D = eps I and
eps = 1 - upsilon. A midrise uniform quantizer is kept for validating the linear model.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from thz_bgsr.errors import InputError

# Distortion-to-signal ratio of the optimal quantizer for Gaussian input
BUSSGANG_UPSILON: dict[int, float] = {
    1: 0.3634,
    2: 0.1175,
    3: 0.03454,
    4: 0.009497,
    5: 0.002499,
}

# Optimal uniform step (in input standard deviations) for Gaussian input
GAUSSIAN_UNIFORM_STEP: dict[int, float] = {
    1: 1.596,
    2: 0.9957,
    3: 0.5860,
    4: 0.3352,
    5: 0.1881,
}


def bussgang_epsilon(bits: float) -> tuple[float, float]:
    """
    Quantization noise-to-signal ratio and Bussgang gain.

    Args:
        bits: ADC resolution, an integer >= 1 or math.inf

    Returns:
        (upsilon, eps) with eps = 1 - upsilon
    """
    if math.isinf(bits) and bits > 0:
        return 0.0, 1.0
    if bits < 1 or not float(bits).is_integer():
        raise InputError(f"ADC bits must be an integer >= 1 or inf, got {bits}")
    b = int(bits)
    if b in BUSSGANG_UPSILON:
        upsilon = BUSSGANG_UPSILON[b]
    else:
        upsilon = (math.pi * math.sqrt(3.0) / 2.0) * 2.0 ** (-2 * b)
    return upsilon, 1.0 - upsilon


@dataclass(frozen=True)
class QuantizationModel:
    """Linearized ADC: gain D = eps I plus distortion of relative power upsilon."""
    bits: float
    upsilon: float
    epsilon: float

    @classmethod
    def from_bits(cls, bits: float) -> "QuantizationModel":
        upsilon, eps = bussgang_epsilon(bits)
        return cls(bits=bits, upsilon=upsilon, epsilon=eps)

    @property
    def is_ideal(self) -> bool:
        return math.isinf(self.bits)

    def gain_matrix(self, size: int) -> NDArray[np.float64]:
        """D = eps I of the given size."""
        return self.epsilon * np.eye(size)


def _uniform_step(bits: int) -> float:
    if bits in GAUSSIAN_UNIFORM_STEP:
        return GAUSSIAN_UNIFORM_STEP[bits]
    # Fine-resolution limit: step^2 / 12 matches the closed-form distortion
    upsilon, _ = bussgang_epsilon(bits)
    return math.sqrt(12.0 * upsilon)


def _quantize_real(x: NDArray[np.float64], bits: int) -> NDArray[np.float64]:
    rms = float(np.sqrt(np.mean(x * x))) if x.size else 0.0
    if rms == 0.0:
        return np.zeros_like(x)
    step = _uniform_step(bits) * rms
    top = (2 ** (bits - 1) - 0.5) * step
    return np.clip(step * (np.floor(x / step) + 0.5), -top, top)


def uniform_quantizer(x: NDArray[np.complex128], bits: float) -> NDArray[np.complex128]:
    """
    Midrise uniform quantization of real and imaginary parts.

    The step is scaled to each component's RMS level. ``bits = inf`` passes the input
    through unchanged.
    """
    x = np.asarray(x, dtype=complex)
    if math.isinf(bits):
        return x.copy()
    if bits < 1 or not float(bits).is_integer():
        raise InputError(f"ADC bits must be an integer >= 1 or inf, got {bits}")
    b = int(bits)
    return _quantize_real(x.real, b) + 1j * _quantize_real(x.imag, b)


def distortion_ratio(bits: float, samples: int, rng: np.random.Generator) -> float:
    """Empirical E|Q(x) - x|^2 / E|x|^2 for circular Gaussian input."""
    x = (rng.standard_normal(samples) + 1j * rng.standard_normal(samples)) / np.sqrt(2.0)
    err = uniform_quantizer(x, bits) - x
    return float(np.sum(np.abs(err) ** 2) / np.sum(np.abs(x) ** 2))
