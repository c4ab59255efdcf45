"""
Per-trial random streams.

Every trial owns independent child streams spawned from (master seed, trial index), so
results never depend on how trials are scheduled across workers. Streams are split by
concern: the channel and front-end draws stay fixed across an SNR sweep, which pairs the
sweep points on the same realizations.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class TrialStreams:
    """Independent generators of one trial."""
    channel: np.random.Generator
    frontend: np.random.Generator
    noise: np.random.Generator
    data_seed: np.random.SeedSequence

    def data_rng(self) -> np.random.Generator:
        """Fresh data-phase generator; every call replays the same symbols and noise."""
        return np.random.default_rng(self.data_seed)


def trial_seed_sequence(seed: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=seed, spawn_key=(trial,))


def trial_streams(seed: int, trial: int) -> TrialStreams:
    """Spawn the channel, front-end, noise and data streams of one trial."""
    channel, frontend, noise, data = trial_seed_sequence(seed, trial).spawn(4)
    return TrialStreams(
        channel=np.random.default_rng(channel),
        frontend=np.random.default_rng(frontend),
        noise=np.random.default_rng(noise),
        data_seed=data,
    )
