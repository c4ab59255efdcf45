"""
Array manifolds over a grid, on-grid and first-order Taylor (TBoD).
"""

import numpy as np
from numpy.typing import NDArray

from thz_bgsr.channel.geometry import steering_derivative, steering_matrix
from thz_bgsr.dictionary.grids import AngularGrid


def build_manifold(grid: AngularGrid, f_k: float, n: int, f_c: float) -> NDArray[np.complex128]:
    """(n, G) manifold, column r the steering vector at grid angle r."""
    return steering_matrix(grid.points, f_k, n, f_c)


def build_tbod(
    grid: AngularGrid,
    f_k: float,
    n: int,
    f_c: float,
    offset: float | None = None,
) -> NDArray[np.complex128]:
    """
    Taylor-augmented manifold [A, offset * dA/dphi].

    A path at phi_r + dphi is approximated by a(phi_r) + dphi * a'(phi_r), so the
    derivative column's coefficient divided by the base coefficient, times ``offset``,
    recovers dphi. Derivative columns are not normalized.

    Args:
        grid: Angular grid
        f_k: Subcarrier frequency
        n: Antenna count
        f_c: Carrier frequency
        offset: Derivative scale, |dphi| <= offset; defaults to pi / G

    Returns:
        (n, 2G) augmented manifold
    """
    scale = grid.default_offset if offset is None else offset
    base = steering_matrix(grid.points, f_k, n, f_c)
    deriv = scale * steering_derivative(grid.points, f_k, n, f_c)
    return np.concatenate([base, deriv], axis=1)
