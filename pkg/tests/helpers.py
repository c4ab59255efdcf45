"""Test helpers shared across modules."""

from pathlib import Path
from typing import Any

import numpy as np

CONFIGS_DIR = Path(__file__).parent.parent / "configs"

SMALL_SCENARIO: dict[str, Any] = {
    "num_users": 2,
    "tx_antennas_per_user": 2,
    "rx_antennas": 8,
    "tx_rf_chains": 1,
    "rx_rf_chains": 4,
    "subcarriers": 8,
    "pilot_blocks": 6,
    "pilots_per_block": 6,
    "delay_taps": 3,
    "nlos_clusters": 1,
    "diffuse_rays": 2,
    "grid_rx": 16,
    "grid_tx": 4,
    "data_vectors": 20,
}

# Harness-sized: a sweep point runs in well under a second
TINY_SCENARIO: dict[str, Any] = {
    "num_users": 2,
    "tx_antennas_per_user": 2,
    "rx_antennas": 4,
    "tx_rf_chains": 1,
    "rx_rf_chains": 2,
    "subcarriers": 4,
    "pilot_blocks": 4,
    "pilots_per_block": 2,
    "delay_taps": 3,
    "nlos_clusters": 1,
    "diffuse_rays": 2,
    "grid_rx": 8,
    "grid_tx": 2,
    "data_vectors": 10,
}


def random_complex(rng: np.random.Generator, *shape: int) -> np.ndarray:
    """Circular standard Gaussian array."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def unit_columns(xi: np.ndarray) -> np.ndarray:
    """Scale every column of every subcarrier slice to unit norm."""
    return xi / np.linalg.norm(xi, axis=0, keepdims=True)
