"""
Angle generation for multi-user scenarios.

Each user's AoAs and AoDs come from a two-component mixture around means drawn
uniformly on [-180, 180) degrees. Means are rejection-resampled until every pair is at
least ``min_separation_deg`` apart on the circle. Grid-aligned modes place angles on (or
within half a cell of) the dictionary grid instead.
"""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from thz_bgsr.channel.geometry import grid_cosines
from thz_bgsr.config.scenario import AngleDistribution, AngleMode, ScenarioConfig
from thz_bgsr.errors import ConfigError

logger = logging.getLogger(__name__)

MAX_SEPARATION_RETRIES = 1000
MIXTURE_COMPONENTS = 2


@dataclass(frozen=True)
class AngleMixture:
    """Two-component angular mixture of one user on one side of the link."""
    means_deg: NDArray[np.float64]
    weights: NDArray[np.float64]


@dataclass(frozen=True)
class UserAngles:
    """Per-path angles of one user (first path is the LoS path when present)."""
    aoa_deg: NDArray[np.float64]
    aod_deg: NDArray[np.float64]
    aoa_mixture: AngleMixture | None = None
    aod_mixture: AngleMixture | None = None


def wrap_degrees(angle: NDArray[np.float64] | float) -> NDArray[np.float64]:
    """Wrap to (-180, 180]."""
    wrapped = -((-np.asarray(angle, dtype=float) + 180.0) % 360.0 - 180.0)
    return np.asarray(wrapped)


def circular_separation(a: float, b: float) -> float:
    """Smallest angular distance between two directions, in degrees."""
    return float(abs(wrap_degrees(a - b)))


def paths_per_user(cfg: ScenarioConfig) -> int:
    """LoS path (optional) plus N_NLoS * N_ray diffuse rays."""
    return int(cfg.include_los) + cfg.nlos_clusters * cfg.diffuse_rays


def _draw_separated_means(count: int, min_sep: float, rng: np.random.Generator) -> NDArray[np.float64]:
    for _ in range(MAX_SEPARATION_RETRIES):
        means = rng.uniform(-180.0, 180.0, size=count)
        if all(
            circular_separation(means[i], means[j]) >= min_sep
            for i in range(count)
            for j in range(i + 1, count)
        ):
            return means
    raise ConfigError(
        f"Could not place {count} mixture means {min_sep} deg apart after "
        f"{MAX_SEPARATION_RETRIES} attempts; lower min_separation_deg or num_users",
        keys=("min_separation_deg", "num_users"),
    )


def _draw_from_mixture(
    mixture: AngleMixture,
    count: int,
    spread_deg: float,
    distribution: AngleDistribution,
    rng: np.random.Generator,
) -> NDArray[np.float64]:
    components = rng.choice(MIXTURE_COMPONENTS, size=count, p=mixture.weights)
    if distribution == AngleDistribution.LAPLACIAN:
        # Laplace scale b has standard deviation b * sqrt(2)
        jitter = rng.laplace(0.0, spread_deg / np.sqrt(2.0), size=count)
    else:
        jitter = rng.normal(0.0, spread_deg, size=count)
    return wrap_degrees(mixture.means_deg[components] + jitter)


def draw_gmm_angles(cfg: ScenarioConfig, rng: np.random.Generator) -> list[UserAngles]:
    """
    Draw per-user AoA/AoD lists from separated two-component mixtures.

    Args:
        cfg: Scenario (users, paths, spread, separation, kernel)
        rng: Random generator

    Returns:
        One UserAngles per user

    Raises:
        ConfigError: Separation cannot be met within the retry budget
    """
    users = cfg.num_users
    count = paths_per_user(cfg)
    total_means = users * MIXTURE_COMPONENTS

    sides: list[list[AngleMixture]] = []
    for _ in ("aoa", "aod"):
        means = _draw_separated_means(total_means, cfg.min_separation_deg, rng).reshape(
            users, MIXTURE_COMPONENTS
        )
        first = rng.uniform(0.0, 1.0, size=users)
        weights = np.stack([first, 1.0 - first], axis=1)
        sides.append([AngleMixture(means_deg=means[u], weights=weights[u]) for u in range(users)])

    result = []
    for u in range(users):
        aoa_mix, aod_mix = sides[0][u], sides[1][u]
        result.append(
            UserAngles(
                aoa_deg=_draw_from_mixture(aoa_mix, count, cfg.angle_spread_deg, cfg.angle_distribution, rng),
                aod_deg=_draw_from_mixture(aod_mix, count, cfg.angle_spread_deg, cfg.angle_distribution, rng),
                aoa_mixture=aoa_mix,
                aod_mixture=aod_mix,
            )
        )
    return result


def _grid_angles(size: int, count: int, off_grid: bool, rng: np.random.Generator) -> NDArray[np.float64]:
    cosines = grid_cosines(size)
    picks = cosines[rng.choice(size, size=count, replace=count > size)]
    if off_grid:
        picks = picks + rng.uniform(-1.0 / size, 1.0 / size, size=count)
    return np.degrees(np.arccos(np.clip(picks, -1.0, 1.0)))


def draw_grid_angles(cfg: ScenarioConfig, rng: np.random.Generator, off_grid: bool = False) -> list[UserAngles]:
    """
    Draw angles on the dictionary grid, optionally offset within half a grid cell.

    Offsets are uniform in the cosine domain, matching the grid's uniform cosines.
    """
    count = paths_per_user(cfg)
    return [
        UserAngles(
            aoa_deg=_grid_angles(cfg.grid_rx, count, off_grid, rng),
            aod_deg=_grid_angles(cfg.grid_tx, count, off_grid, rng),
        )
        for _ in range(cfg.num_users)
    ]


def draw_angles(cfg: ScenarioConfig, rng: np.random.Generator) -> list[UserAngles]:
    """Dispatch on ``cfg.angle_mode``."""
    if cfg.angle_mode == AngleMode.GMM:
        return draw_gmm_angles(cfg, rng)
    return draw_grid_angles(cfg, rng, off_grid=cfg.angle_mode == AngleMode.OFF_GRID)
