"""Shared fixtures: a small scenario and one drawn trial."""

import numpy as np
import pytest

from tests.helpers import SMALL_SCENARIO, TINY_SCENARIO
from thz_bgsr.channel import MultiUserChannel, generate_channel
from thz_bgsr.config import ScenarioConfig
from thz_bgsr.dictionary import SparsifyingDictionary, build_dictionary
from thz_bgsr.frontend import (
    MeasurementSet,
    PilotFrame,
    QuantizationModel,
    RFCodebook,
    draw_codebooks,
    draw_pilot_frame,
    synthesize_measurements,
)


@pytest.fixture
def small_cfg() -> ScenarioConfig:
    return ScenarioConfig(**SMALL_SCENARIO)


@pytest.fixture
def tiny_cfg() -> ScenarioConfig:
    return ScenarioConfig(**TINY_SCENARIO)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def channel(small_cfg: ScenarioConfig, rng: np.random.Generator) -> MultiUserChannel:
    return generate_channel(small_cfg, rng)


@pytest.fixture
def codebook(small_cfg: ScenarioConfig, rng: np.random.Generator) -> RFCodebook:
    return draw_codebooks(small_cfg, rng)


@pytest.fixture
def frame(small_cfg: ScenarioConfig, rng: np.random.Generator) -> PilotFrame:
    return draw_pilot_frame(small_cfg, rng)


@pytest.fixture
def dictionary(small_cfg: ScenarioConfig) -> SparsifyingDictionary:
    return build_dictionary(small_cfg)


@pytest.fixture
def measurements(
    small_cfg: ScenarioConfig,
    channel: MultiUserChannel,
    codebook: RFCodebook,
    frame: PilotFrame,
    rng: np.random.Generator,
) -> MeasurementSet:
    """Noisy 3-bit measurements of the small scenario."""
    return synthesize_measurements(
        channel,
        codebook,
        frame,
        QuantizationModel.from_bits(3),
        small_cfg.noise_var,
        rng,
    )
