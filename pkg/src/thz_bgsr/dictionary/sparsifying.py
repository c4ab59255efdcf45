"""
Kronecker sparsifying dictionaries and the stacked sensing tensor.

With vec column-major, vec(A_R H_b A_T^H) = (conj(A_T) kron A_R) vec(H_b); the
multi-user dictionary is the block diagonal of that product over users, one block per
user's N_Tu transmit antennas. Column (t, r) of user u sits at u * G_R' G_T' + t G_R' + r.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import block_diag

from thz_bgsr.channel.geometry import subcarrier_frequencies
from thz_bgsr.config.scenario import DictionaryFrequency, DictionaryMode, ScenarioConfig
from thz_bgsr.dictionary.grids import AngularGrid, build_angular_grids
from thz_bgsr.dictionary.manifolds import build_manifold, build_tbod
from thz_bgsr.errors import InputError

logger = logging.getLogger(__name__)


# Cap on the prior weight of a derivative atom relative to its base atom
MAX_DERIVATIVE_WEIGHT = 1.0 / 3.0


@dataclass(frozen=True)
class ColumnGroups:
    """
    Hyperparameters tied across dictionary columns.

    Column i has prior variance weights[i] * gamma[groups[i]], so a TBoD base atom and
    its derivative atoms switch on and off together.

    Attributes:
        groups: (columns,) group index of every column, 0..num_groups-1
        weights: (columns,) positive prior weight of every column
    """
    groups: NDArray[np.intp]
    weights: NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.groups.shape != self.weights.shape or self.groups.ndim != 1:
            raise InputError(f"groups {self.groups.shape} and weights {self.weights.shape} must be matching vectors")
        if np.any(self.weights <= 0):
            raise InputError("Column weights must be positive")

    @property
    def columns(self) -> int:
        return int(self.groups.size)

    @property
    def num_groups(self) -> int:
        return int(self.groups.max(initial=-1)) + 1

    def expand(self, group_gamma: NDArray[np.float64]) -> NDArray[np.float64]:
        """Per-column prior variances from per-group hyperparameters."""
        return self.weights * group_gamma[self.groups]

    def collapse(self, column_power: NDArray[np.float64]) -> NDArray[np.float64]:
        """Per-group mean of column_power / weights."""
        n = self.num_groups
        total = np.bincount(self.groups, weights=column_power / self.weights, minlength=n)
        return total / np.bincount(self.groups, minlength=n)

    def members(self, active_groups: NDArray[np.intp]) -> NDArray[np.intp]:
        """Columns belonging to any of ``active_groups``."""
        return np.flatnonzero(np.isin(self.groups, active_groups))


def derivative_weights(grid: AngularGrid, offset: float) -> NDArray[np.float64]:
    """
    Expected power of each derivative-atom coefficient relative to its base atom.

    A true cosine within half a cell of the grid point gives an angular offset of
    variance 1 / (3 G^2 sin^2 phi); dividing by the derivative scale squared gives the
    coefficient variance. Clipped to MAX_DERIVATIVE_WEIGHT near endfire.
    """
    sines = np.sqrt(np.clip(1.0 - grid.cosines**2, 0.0, None))
    spread = grid.size * sines * offset
    weights = np.full(grid.size, MAX_DERIVATIVE_WEIGHT)
    nonzero = spread > 0
    weights[nonzero] = np.minimum(MAX_DERIVATIVE_WEIGHT, 1.0 / (3.0 * spread[nonzero] ** 2))
    return weights


@dataclass
class SparsifyingDictionary:
    """
    Per-subcarrier receive and transmit manifolds of one scenario.

    Attributes:
        a_r: (N_R, G_R', K) receive manifold
        a_t: (U, N_Tu, G_T', K) transmit manifold of every user
        mode: On-grid or TBoD (G' = 2G)
        grid_rx: Receive grid
        grid_tx: Transmit grid
        frequencies: (K,) frequency each manifold slice was evaluated at
        carrier_hz: Carrier used for the steering phase scaling
        offset_rx: Derivative scale on the receive side (TBoD only)
        offset_tx: Derivative scale on the transmit side (TBoD only)
    """
    a_r: NDArray[np.complex128]
    a_t: NDArray[np.complex128]
    mode: DictionaryMode
    grid_rx: AngularGrid
    grid_tx: AngularGrid
    frequencies: NDArray[np.float64]
    carrier_hz: float
    offset_rx: float = 0.0
    offset_tx: float = 0.0

    @property
    def num_users(self) -> int:
        return int(self.a_t.shape[0])

    @property
    def subcarriers(self) -> int:
        return int(self.a_r.shape[2])

    @property
    def rx_columns(self) -> int:
        return int(self.a_r.shape[1])

    @property
    def tx_columns(self) -> int:
        return int(self.a_t.shape[2])

    @property
    def columns_per_user(self) -> int:
        return self.rx_columns * self.tx_columns

    @property
    def columns(self) -> int:
        return self.num_users * self.columns_per_user

    @cached_property
    def psi_mu(self) -> NDArray[np.complex128]:
        """(N_R * N_T, U * G_R' * G_T', K) block-diagonal Kronecker dictionary."""
        return build_mu_dictionary(list(self.a_t), self.a_r)

    def user_columns(self, u: int) -> slice:
        return slice(u * self.columns_per_user, (u + 1) * self.columns_per_user)

    def base_mask(self) -> NDArray[np.bool_]:
        """True for columns built from base atoms on both sides."""
        r_base = np.arange(self.rx_columns) < self.grid_rx.size
        t_base = np.arange(self.tx_columns) < self.grid_tx.size
        per_user = np.kron(t_base, r_base)
        return np.tile(per_user, self.num_users)

    def column_groups(self) -> ColumnGroups | None:
        """
        Tie every TBoD base atom to its derivative atoms; None for on-grid dictionaries.

        Group (u, t, r) holds the columns built from receive atom r or its derivative and
        transmit atom t or its derivative.
        """
        if self.mode != DictionaryMode.TBOD:
            return None
        g_r, g_t = self.grid_rx.size, self.grid_tx.size
        if self.rx_columns != 2 * g_r or self.tx_columns != 2 * g_t:
            raise InputError(f"TBoD manifolds must have 2G columns, got {self.rx_columns} and {self.tx_columns}")
        rx_group = np.arange(self.rx_columns) % g_r
        tx_group = np.arange(self.tx_columns) % g_t
        rx_weight = np.concatenate([np.ones(g_r), derivative_weights(self.grid_rx, self.offset_rx)])
        tx_weight = np.concatenate([np.ones(g_t), derivative_weights(self.grid_tx, self.offset_tx)])

        per_user_group = (tx_group[:, None] * g_r + rx_group[None, :]).ravel()
        per_user_weight = (tx_weight[:, None] * rx_weight[None, :]).ravel()
        offsets = np.repeat(np.arange(self.num_users) * g_r * g_t, self.columns_per_user)
        return ColumnGroups(
            groups=np.tile(per_user_group, self.num_users) + offsets,
            weights=np.tile(per_user_weight, self.num_users),
        )


def build_mu_dictionary(
    a_t: list[NDArray[np.complex128]],
    a_r: NDArray[np.complex128],
) -> NDArray[np.complex128]:
    """
    Block diagonal over users of conj(A_T,u[k]) kron A_R[k], for every k.

    Args:
        a_t: Per-user (N_Tu, G_T', K) manifolds
        a_r: (N_R, G_R', K) receive manifold

    Returns:
        (N_R * N_T, U * G_R' * G_T', K)
    """
    if not a_t:
        raise InputError("At least one user manifold is required")
    k = a_r.shape[2]
    if any(a.ndim != 3 or a.shape[2] != k for a in a_t):
        raise InputError(f"Every transmit manifold must be (N_Tu, G_T', {k})")

    slices = []
    for i in range(k):
        blocks = [np.kron(a[:, :, i].conj(), a_r[:, :, i]) for a in a_t]
        slices.append(block_diag(*blocks))
    return np.stack(slices, axis=-1)


def build_dictionary(
    cfg: ScenarioConfig,
    mode: DictionaryMode = DictionaryMode.ON_GRID,
) -> SparsifyingDictionary:
    """
    Manifolds on the scenario's grids for every subcarrier.

    With ``dictionary_frequency = carrier`` every subcarrier uses the manifold at f_c.
    """
    grid_rx, grid_tx = build_angular_grids(cfg.grid_rx, cfg.grid_tx)
    if cfg.dictionary_frequency == DictionaryFrequency.CARRIER:
        freqs = np.full(cfg.subcarriers, cfg.carrier_hz)
    else:
        freqs = subcarrier_frequencies(cfg)

    offset_rx = offset_tx = 0.0
    if mode == DictionaryMode.TBOD:
        offset_rx = grid_rx.default_offset if cfg.tbod_offset is None else cfg.tbod_offset
        offset_tx = grid_tx.default_offset if cfg.tbod_offset is None else cfg.tbod_offset

        def rx(f: float) -> NDArray[np.complex128]:
            return build_tbod(grid_rx, f, cfg.rx_antennas, cfg.carrier_hz, offset_rx)

        def tx(f: float) -> NDArray[np.complex128]:
            return build_tbod(grid_tx, f, cfg.tx_antennas_per_user, cfg.carrier_hz, offset_tx)
    else:

        def rx(f: float) -> NDArray[np.complex128]:
            return build_manifold(grid_rx, f, cfg.rx_antennas, cfg.carrier_hz)

        def tx(f: float) -> NDArray[np.complex128]:
            return build_manifold(grid_tx, f, cfg.tx_antennas_per_user, cfg.carrier_hz)

    a_r = np.stack([rx(f) for f in freqs], axis=-1)
    a_t_single = np.stack([tx(f) for f in freqs], axis=-1)
    a_t = np.broadcast_to(a_t_single, (cfg.num_users, *a_t_single.shape)).copy()
    logger.debug("Dictionary %s: A_R %s, A_T %s", mode.value, a_r.shape, a_t.shape)
    return SparsifyingDictionary(
        a_r=a_r,
        a_t=a_t,
        mode=mode,
        grid_rx=grid_rx,
        grid_tx=grid_tx,
        frequencies=np.asarray(freqs, dtype=float),
        carrier_hz=cfg.carrier_hz,
        offset_rx=offset_rx,
        offset_tx=offset_tx,
    )


def build_sensing_tensor(
    lambda_ops: NDArray[np.complex128],
    psi_mu: NDArray[np.complex128],
) -> NDArray[np.complex128]:
    """
    Xi_MU[:, :, k] = stack over m of Lambda_m[k] Psi_MU[k].

    Args:
        lambda_ops: (M, N_RF_R, N_R * N_T, K)
        psi_mu: (N_R * N_T, columns, K)

    Returns:
        (M * N_RF_R, columns, K)
    """
    if lambda_ops.ndim != 4 or psi_mu.ndim != 3:
        raise InputError("lambda_ops must be 4-D and psi_mu 3-D")
    m, n_rf, n, k = lambda_ops.shape
    if psi_mu.shape[0] != n or psi_mu.shape[2] != k:
        raise InputError(
            f"Operator shape {lambda_ops.shape} does not match dictionary shape {psi_mu.shape}"
        )
    xi = np.einsum("mink,nck->mick", lambda_ops, psi_mu)
    return xi.reshape(m * n_rf, psi_mu.shape[1], k)


def build_sensing_tensor_factored(
    transmit: NDArray[np.complex128],
    w_rf: NDArray[np.complex128],
    eps: float,
    dictionary: SparsifyingDictionary,
) -> NDArray[np.complex128]:
    """
    Same tensor as ``build_sensing_tensor`` without forming Lambda or Psi.

    Uses (s_u^T kron B)(conj(A_T,u) kron A_R) = (s_u^T conj(A_T,u)) kron (B A_R) with
    B = eps W^H.

    Args:
        transmit: (M, N_T, K) stacked precoded pilots
        w_rf: (M, N_R, N_RF_R) combiners
        eps: Bussgang gain
        dictionary: Manifolds

    Returns:
        (M * N_RF_R, columns, K)
    """
    blocks, n_t, k = transmit.shape
    users, n_tu = dictionary.num_users, dictionary.a_t.shape[1]
    if users * n_tu != n_t or k != dictionary.subcarriers:
        raise InputError(
            f"Transmit shape {transmit.shape} does not match {users} users x {n_tu} antennas, "
            f"{dictionary.subcarriers} subcarriers"
        )
    s = transmit.reshape(blocks, users, n_tu, k)
    left = np.einsum("muik,uitk->mutk", s, dictionary.a_t.conj())
    right = eps * np.einsum("mna,nrk->mark", w_rf.conj(), dictionary.a_r)
    xi = np.einsum("mutk,mark->mautrk", left, right)
    n_rf = w_rf.shape[2]
    return xi.reshape(blocks * n_rf, dictionary.columns, k)


def split_user_beamspace(
    h_b: NDArray[np.complex128],
    dictionary: SparsifyingDictionary,
    u: int,
) -> NDArray[np.complex128]:
    """
    User u's beamspace coefficients as (G_R', G_T', K) matrices.

    Args:
        h_b: (columns, K) stacked beamspace vector
    """
    block = h_b[dictionary.user_columns(u)]
    return block.reshape(dictionary.tx_columns, dictionary.rx_columns, -1).transpose(1, 0, 2)


def estimate_offsets(
    h_b: NDArray[np.complex128],
    dictionary: SparsifyingDictionary,
    support_threshold: float = 0.01,
) -> list[tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.bool_]]]:
    """
    Per-atom angular offsets from derivative-to-base coefficient ratios.

    dphi = offset * Re(c_deriv / c_base), averaged over subcarriers with energy weights.

    Args:
        h_b: (columns, K) estimated TBoD beamspace coefficients
        dictionary: TBoD dictionary
        support_threshold: Base atoms below this fraction of the user's peak energy are
            left at zero offset

    Returns:
        Per user (dphi_rx, dtheta_tx, active), each (G_R, G_T) in radians
    """
    if dictionary.mode != DictionaryMode.TBOD:
        raise InputError("Offsets can only be estimated from a TBoD dictionary")
    g_r, g_t = dictionary.grid_rx.size, dictionary.grid_tx.size
    result = []
    for u in range(dictionary.num_users):
        coeffs = split_user_beamspace(h_b, dictionary, u)
        base = coeffs[:g_r, :g_t]
        d_rx = coeffs[g_r:, :g_t]
        d_tx = coeffs[:g_r, g_t:]

        weight = np.abs(base) ** 2
        energy = weight.sum(axis=-1)
        active = energy > support_threshold * max(float(energy.max(initial=0.0)), np.finfo(float).tiny)
        safe = np.where(np.abs(base) > 0, base, 1.0)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio_r = np.sum(weight * np.real(d_rx / safe), axis=-1) / np.where(energy > 0, energy, 1.0)
            ratio_t = np.sum(weight * np.real(d_tx / safe), axis=-1) / np.where(energy > 0, energy, 1.0)
        dphi = np.where(active, dictionary.offset_rx * ratio_r, 0.0)
        dtheta = np.where(active, dictionary.offset_tx * ratio_t, 0.0)
        result.append((dphi, dtheta, active))
    return result
