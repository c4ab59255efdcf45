"""
Angular grids with uniform directional cosines.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from thz_bgsr.channel.geometry import grid_cosines


@dataclass(frozen=True)
class AngularGrid:
    """G angles whose cosines are 2 (r - 1) / G - 1, r = 1..G."""
    cosines: NDArray[np.float64]

    @classmethod
    def uniform(cls, size: int) -> "AngularGrid":
        return cls(cosines=grid_cosines(size))

    @property
    def size(self) -> int:
        return int(self.cosines.size)

    @property
    def points(self) -> NDArray[np.float64]:
        """Grid angles in radians, in [0, pi]."""
        return np.arccos(self.cosines)

    @property
    def spacing(self) -> float:
        return 2.0 / self.size

    @property
    def default_offset(self) -> float:
        """Interpolation half-width pi / G used to scale derivative atoms."""
        return float(np.pi / self.size)


def build_angular_grids(grid_rx: int, grid_tx: int) -> tuple[AngularGrid, AngularGrid]:
    """Receive and per-user transmit grids."""
    return AngularGrid.uniform(grid_rx), AngularGrid.uniform(grid_tx)
