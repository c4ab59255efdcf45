"""
Normalized mean squared error.
"""

import math

import numpy as np
from numpy.typing import NDArray

from thz_bgsr.errors import InputError


def nmse(h_hat: NDArray[np.complex128], h_true: NDArray[np.complex128]) -> float:
    """sum_k ||H_hat[k] - H[k]||_F^2 / sum_k ||H[k]||_F^2."""
    h_hat, h_true = np.asarray(h_hat), np.asarray(h_true)
    if h_hat.shape != h_true.shape:
        raise InputError(f"Shape mismatch: estimate {h_hat.shape}, truth {h_true.shape}")
    energy = float(np.sum(np.abs(h_true) ** 2))
    if energy == 0.0:
        raise InputError("NMSE is undefined for an all-zero true channel")
    return float(np.sum(np.abs(h_hat - h_true) ** 2)) / energy


def to_db(value: float) -> float:
    """10 log10(value), -inf for zero."""
    return 10.0 * math.log10(value) if value > 0 else -math.inf


def nmse_db(h_hat: NDArray[np.complex128], h_true: NDArray[np.complex128]) -> float:
    return to_db(nmse(h_hat, h_true))
