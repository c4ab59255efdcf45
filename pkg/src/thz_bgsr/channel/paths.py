"""
Path components of the multipath channel.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from thz_bgsr.channel.angles import UserAngles
from thz_bgsr.channel.losses import SPEED_OF_LIGHT
from thz_bgsr.channel.materials import MaterialProps
from thz_bgsr.config.scenario import ScenarioConfig
from thz_bgsr.errors import InputError

INCIDENCE_RANGE_DEG = (20.0, 70.0)


class PathKind(str, Enum):
    LOS = "los"
    NLOS = "nlos"


@dataclass(frozen=True)
class PathComponent:
    """
    One propagation path of one user.

    Attributes:
        kind: LoS or NLoS
        cluster_index: NLoS cluster z (0 for LoS)
        ray_index: Diffuse ray j within the cluster (0 for LoS)
        aoa_deg: Angle of arrival
        aod_deg: Angle of departure
        delay_s: Delay relative to the frame start, in [0, L T_s)
        distance_m: Travelled distance
        gain_phase_rad: Phase of the complex gain, in (-pi, pi]
        material: Reflecting material (NLoS only)
        incidence_deg: Incidence angle on the reflector (NLoS only)
    """
    kind: PathKind
    cluster_index: int
    ray_index: int
    aoa_deg: float
    aod_deg: float
    delay_s: float
    distance_m: float
    gain_phase_rad: float
    material: MaterialProps | None = None
    incidence_deg: float | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.aoa_deg) and math.isfinite(self.aod_deg)):
            raise InputError("Path angles must be finite")
        if self.delay_s < 0:
            raise InputError(f"Path delay must be >= 0, got {self.delay_s}")
        if self.distance_m <= 0:
            raise InputError(f"Path distance must be positive, got {self.distance_m}")
        if self.kind == PathKind.NLOS and (self.material is None or self.incidence_deg is None):
            raise InputError("NLoS paths need a material and an incidence angle")


def _draw_phase(rng: np.random.Generator) -> float:
    # pi - U[0, 2pi) lies in (-pi, pi]
    return float(math.pi - rng.uniform(0.0, 2.0 * math.pi))


def draw_paths(
    cfg: ScenarioConfig,
    angles: list[UserAngles],
    materials: list[MaterialProps],
    rng: np.random.Generator,
) -> list[list[PathComponent]]:
    """
    Attach delays, distances, phases and reflectors to drawn angles.

    LoS paths are frame-aligned (zero delay). NLoS delays are uniform on [0, (L-1) T_s]
    and lengthen the path by c * tau. Each cluster draws one material and one incidence
    angle uniform on [20, 70] degrees.

    Args:
        cfg: Scenario
        angles: Per-user angles, LoS first when ``cfg.include_los``
        materials: Reflector catalogue
        rng: Random generator

    Returns:
        Per-user path lists
    """
    if len(angles) != cfg.num_users:
        raise InputError(f"Expected angles for {cfg.num_users} users, got {len(angles)}")
    if cfg.nlos_clusters and not materials:
        raise InputError("NLoS clusters need at least one material")

    max_delay = (cfg.delay_taps - 1) * cfg.sampling_period
    users: list[list[PathComponent]] = []
    for user_angles in angles:
        aoa = iter(user_angles.aoa_deg.tolist())
        aod = iter(user_angles.aod_deg.tolist())
        paths: list[PathComponent] = []

        if cfg.include_los:
            paths.append(
                PathComponent(
                    kind=PathKind.LOS,
                    cluster_index=0,
                    ray_index=0,
                    aoa_deg=next(aoa),
                    aod_deg=next(aod),
                    delay_s=0.0,
                    distance_m=cfg.distance_m,
                    gain_phase_rad=_draw_phase(rng),
                )
            )

        for z in range(cfg.nlos_clusters):
            material = materials[int(rng.integers(len(materials)))]
            incidence = float(rng.uniform(*INCIDENCE_RANGE_DEG))
            for j in range(cfg.diffuse_rays):
                delay = float(rng.uniform(0.0, max_delay))
                paths.append(
                    PathComponent(
                        kind=PathKind.NLOS,
                        cluster_index=z,
                        ray_index=j,
                        aoa_deg=next(aoa),
                        aod_deg=next(aod),
                        delay_s=delay,
                        distance_m=cfg.distance_m + SPEED_OF_LIGHT * delay,
                        gain_phase_rad=_draw_phase(rng),
                        material=material,
                        incidence_deg=incidence,
                    )
                )
        users.append(paths)
    return users
