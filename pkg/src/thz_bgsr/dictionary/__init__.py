"""
Angular grids, array manifolds and the multi-user sensing tensor.
"""

from thz_bgsr.dictionary.grids import AngularGrid, build_angular_grids
from thz_bgsr.dictionary.manifolds import build_manifold, build_tbod
from thz_bgsr.dictionary.sparsifying import (
    ColumnGroups,
    SparsifyingDictionary,
    build_dictionary,
    build_mu_dictionary,
    build_sensing_tensor,
    build_sensing_tensor_factored,
    derivative_weights,
    estimate_offsets,
    split_user_beamspace,
)

__all__ = [
    "AngularGrid",
    "build_angular_grids",
    "build_manifold",
    "build_tbod",
    "ColumnGroups",
    "SparsifyingDictionary",
    "build_dictionary",
    "build_mu_dictionary",
    "build_sensing_tensor",
    "build_sensing_tensor_factored",
    "derivative_weights",
    "estimate_offsets",
    "split_user_beamspace",
]
