"""Tests for angular grids, manifolds and the sparsifying dictionary."""

import math

import numpy as np
import pytest

from tests.helpers import random_complex
from thz_bgsr.channel import (
    MultiUserChannel,
    steering_derivative,
    steering_matrix,
    subcarrier_frequencies,
)
from thz_bgsr.config import DictionaryFrequency, DictionaryMode
from thz_bgsr.dictionary import (
    AngularGrid,
    ColumnGroups,
    build_angular_grids,
    build_dictionary,
    build_manifold,
    build_mu_dictionary,
    build_sensing_tensor,
    build_sensing_tensor_factored,
    build_tbod,
    derivative_weights,
    estimate_offsets,
    split_user_beamspace,
)
from thz_bgsr.errors import InputError
from thz_bgsr.estimators import reconstruct_channel
from thz_bgsr.frontend import QuantizationModel, synthesize_measurements

F_C = 0.65e12


class TestGrids:
    """Tests for AngularGrid."""

    def test_uniform_cosines(self):
        """Cosines start at -1 with step 2 / G."""
        grid = AngularGrid.uniform(8)
        np.testing.assert_allclose(grid.cosines, -1 + 2 * np.arange(8) / 8)
        assert grid.spacing == pytest.approx(0.25)
        assert grid.size == 8

    def test_points_in_range(self):
        """Grid angles lie in [0, pi]."""
        points = AngularGrid.uniform(16).points
        assert np.all((points >= 0) & (points <= math.pi))

    def test_default_offset(self):
        """Derivative atoms are scaled by pi / G."""
        assert AngularGrid.uniform(32).default_offset == pytest.approx(math.pi / 32)

    def test_build_angular_grids(self):
        """Receive and transmit grids get their own sizes."""
        rx, tx = build_angular_grids(64, 16)
        assert (rx.size, tx.size) == (64, 16)
        np.testing.assert_allclose(tx.cosines, AngularGrid.uniform(16).cosines)


class TestManifolds:
    """Tests for on-grid and TBoD manifolds."""

    def test_manifold_columns_unit_norm(self):
        """Every atom has unit norm."""
        a = build_manifold(AngularGrid.uniform(16), 0.67e12, 8, F_C)
        assert a.shape == (8, 16)
        np.testing.assert_allclose(np.linalg.norm(a, axis=0), 1.0)

    def test_broadside_atom_does_not_squint(self):
        """Only the cosine-zero atom is the same at every frequency."""
        grid = AngularGrid.uniform(8)
        low = build_manifold(grid, 0.6e12, 8, F_C)
        high = build_manifold(grid, 0.7e12, 8, F_C)
        broadside = int(np.flatnonzero(np.isclose(grid.cosines, 0.0))[0])
        np.testing.assert_allclose(low[:, broadside], high[:, broadside], atol=1e-12)
        others = [r for r in range(8) if r != broadside]
        assert not np.allclose(low[:, others], high[:, others])

    def test_tbod_layout(self):
        """TBoD is [A, offset * dA] with 2G columns."""
        grid = AngularGrid.uniform(8)
        tbod = build_tbod(grid, 0.66e12, 6, F_C)
        assert tbod.shape == (6, 16)
        np.testing.assert_allclose(tbod[:, :8], build_manifold(grid, 0.66e12, 6, F_C))
        expected = grid.default_offset * steering_derivative(grid.points, 0.66e12, 6, F_C)
        np.testing.assert_allclose(tbod[:, 8:], expected)

    def test_tbod_derivative_at_broadside(self):
        """At phi = pi/2 the derivative entry m is j pi m rho / sqrt(N)."""
        grid = AngularGrid(cosines=np.array([0.0]))
        f_k, n = 0.7e12, 4
        tbod = build_tbod(grid, f_k, n, F_C, offset=1.0)
        expected = 1j * math.pi * np.arange(n) * (f_k / F_C) / math.sqrt(n)
        np.testing.assert_allclose(tbod[:, 1], expected, atol=1e-12)


class TestSparsifyingDictionary:
    """Tests for the multi-user Kronecker dictionary."""

    def test_shapes(self, dictionary, small_cfg):
        """On-grid dictionaries have U * G_R * G_T columns."""
        assert dictionary.a_r.shape == (small_cfg.rx_antennas, small_cfg.grid_rx, small_cfg.subcarriers)
        assert dictionary.a_t.shape == (
            small_cfg.num_users, small_cfg.tx_antennas_per_user, small_cfg.grid_tx, small_cfg.subcarriers,
        )
        assert dictionary.columns == small_cfg.num_users * small_cfg.grid_rx * small_cfg.grid_tx
        assert dictionary.psi_mu.shape == (
            small_cfg.rx_antennas * small_cfg.total_tx_antennas, dictionary.columns, small_cfg.subcarriers,
        )
        assert dictionary.base_mask().all()

    def test_tbod_doubles_both_sides(self, small_cfg):
        """TBoD has G' = 2G on each side; a quarter of the columns are base atoms."""
        tbod = build_dictionary(small_cfg, DictionaryMode.TBOD)
        assert tbod.rx_columns == 2 * small_cfg.grid_rx
        assert tbod.tx_columns == 2 * small_cfg.grid_tx
        assert tbod.base_mask().sum() == small_cfg.num_users * small_cfg.grid_rx * small_cfg.grid_tx
        assert tbod.offset_rx == pytest.approx(math.pi / small_cfg.grid_rx)

    def test_explicit_tbod_offset(self, small_cfg):
        """tbod_offset overrides pi / G on both sides."""
        tbod = build_dictionary(small_cfg.with_updates(tbod_offset=0.01), DictionaryMode.TBOD)
        assert tbod.offset_rx == tbod.offset_tx == 0.01

    def test_carrier_frequency_mode(self, small_cfg):
        """The carrier mode evaluates every slice at f_c."""
        cfg = small_cfg.with_updates(dictionary_frequency=DictionaryFrequency.CARRIER)
        d = build_dictionary(cfg)
        np.testing.assert_allclose(d.frequencies, cfg.carrier_hz)
        np.testing.assert_allclose(d.a_r[:, :, 0], d.a_r[:, :, -1])

    def test_subcarrier_mode_squints(self, dictionary, small_cfg):
        """The default mode evaluates slice k at f_k."""
        np.testing.assert_allclose(dictionary.frequencies, subcarrier_frequencies(small_cfg))
        assert not np.allclose(dictionary.a_r[:, :, 0], dictionary.a_r[:, :, -1])

    def test_vec_identity(self, dictionary, small_cfg, rng):
        """Psi h_b is vec of A_R H_b A_T^H placed in the user's column block."""
        k, u = 3, 1
        h_user = random_complex(rng, small_cfg.grid_rx, small_cfg.grid_tx)
        h_b = np.zeros(dictionary.columns, dtype=complex)
        h_b[dictionary.user_columns(u)] = h_user.reshape(-1, order="F")

        a_r = dictionary.a_r[:, :, k]
        a_t = dictionary.a_t[u, :, :, k]
        expected = np.zeros((small_cfg.rx_antennas, small_cfg.total_tx_antennas), dtype=complex)
        n = small_cfg.tx_antennas_per_user
        expected[:, u * n:(u + 1) * n] = a_r @ h_user @ a_t.conj().T

        vec = dictionary.psi_mu[:, :, k] @ h_b
        np.testing.assert_allclose(vec.reshape(expected.shape, order="F"), expected, atol=1e-12)

    def test_split_user_beamspace(self, dictionary, small_cfg, rng):
        """Column u * G_R G_T + t G_R + r maps to entry (r, t) of user u."""
        h_b = random_complex(rng, dictionary.columns, small_cfg.subcarriers)
        block = split_user_beamspace(h_b, dictionary, 1)
        r, t = 5, 2
        index = dictionary.columns_per_user + t * dictionary.rx_columns + r
        np.testing.assert_array_equal(block[r, t], h_b[index])

    def test_mu_dictionary_needs_users(self, dictionary):
        """An empty user list is rejected."""
        with pytest.raises(InputError):
            build_mu_dictionary([], dictionary.a_r)


class TestColumnGroups:
    """Tests for tying TBoD base atoms to their derivatives."""

    def test_on_grid_has_no_groups(self, dictionary):
        """Every on-grid column keeps its own hyperparameter."""
        assert dictionary.column_groups() is None

    def test_tbod_groups_match_on_grid_count(self, small_cfg):
        """One group per on-grid atom, four columns each."""
        tbod = build_dictionary(small_cfg, DictionaryMode.TBOD)
        groups = tbod.column_groups()
        on_grid = small_cfg.num_users * small_cfg.grid_rx * small_cfg.grid_tx
        assert groups.columns == tbod.columns
        assert groups.num_groups == on_grid
        np.testing.assert_array_equal(np.bincount(groups.groups), np.full(on_grid, 4))

    def test_base_columns_have_unit_weight(self, small_cfg):
        """Base atoms carry the group hyperparameter unchanged; derivatives are damped."""
        tbod = build_dictionary(small_cfg, DictionaryMode.TBOD)
        groups = tbod.column_groups()
        base = tbod.base_mask()
        np.testing.assert_array_equal(groups.weights[base], 1.0)
        assert np.all(groups.weights[~base] < 1.0)
        assert len(np.unique(groups.groups[base])) == groups.num_groups

    def test_group_members_share_atoms(self, small_cfg):
        """Columns of one group come from the same grid points and user."""
        tbod = build_dictionary(small_cfg, DictionaryMode.TBOD)
        groups = tbod.column_groups()
        g_r, g_t = small_cfg.grid_rx, small_cfg.grid_tx
        u, t, r = 1, 2, 5
        members = groups.members(np.array([u * g_r * g_t + t * g_r + r]))
        per_user = tbod.columns_per_user
        expected = [
            u * per_user + tt * tbod.rx_columns + rr
            for tt in (t, t + g_t)
            for rr in (r, r + g_r)
        ]
        assert members.tolist() == sorted(expected)

    def test_collapse_inverts_expand(self, small_cfg, rng):
        """Collapsing expanded hyperparameters returns them."""
        groups = build_dictionary(small_cfg, DictionaryMode.TBOD).column_groups()
        hyper = rng.uniform(0.1, 2.0, groups.num_groups)
        np.testing.assert_allclose(groups.collapse(groups.expand(hyper)), hyper)

    def test_invalid_weights(self):
        """Weights must be positive and match the group vector."""
        with pytest.raises(InputError):
            ColumnGroups(groups=np.array([0, 0]), weights=np.array([1.0, 0.0]))
        with pytest.raises(InputError):
            ColumnGroups(groups=np.array([0, 1]), weights=np.array([1.0]))

    def test_derivative_weights(self):
        """Broadside weight is 1 / (3 pi^2) at the default scale; endfire is clipped."""
        grid = AngularGrid.uniform(8)
        weights = derivative_weights(grid, grid.default_offset)
        assert weights[0] == pytest.approx(1.0 / 3.0)
        assert weights[4] == pytest.approx(1.0 / (3.0 * math.pi**2))
        assert np.all(weights > 0)
        assert np.all(weights <= 1.0 / 3.0)


class TestSensingTensor:
    """Tests for the stacked sensing tensor."""

    def test_factored_matches_generic(self, measurements, codebook, dictionary):
        """The Kronecker-factored tensor equals Lambda Psi."""
        generic = build_sensing_tensor(measurements.lambda_ops, dictionary.psi_mu)
        factored = build_sensing_tensor_factored(
            measurements.transmit, codebook.w_rf, measurements.quant.epsilon, dictionary
        )
        np.testing.assert_allclose(factored, generic, atol=1e-12 * np.abs(generic).max())

    def test_shape_mismatch(self, measurements, small_cfg):
        """A dictionary for another array size is rejected."""
        other = build_dictionary(small_cfg.with_updates(rx_antennas=4, rx_rf_chains=2))
        with pytest.raises(InputError):
            build_sensing_tensor(measurements.lambda_ops, other.psi_mu)

    def test_noiseless_end_to_end(self, small_cfg, dictionary, codebook, frame, rng):
        """For an on-grid channel, y[:, k] = Xi[:, :, k] h_b[:, k] exactly."""
        h_b = np.zeros((dictionary.columns, small_cfg.subcarriers), dtype=complex)
        support = [3, 70, 120]
        h_b[support] = random_complex(rng, len(support), small_cfg.subcarriers)
        cfr = reconstruct_channel(h_b, dictionary)
        channel = MultiUserChannel(
            cfr=cfr, taps=np.fft.ifft(cfr, axis=-1), paths=[[], []],
            tx_antennas_per_user=small_cfg.tx_antennas_per_user,
        )
        quant = QuantizationModel.from_bits(3)
        ms = synthesize_measurements(channel, codebook, frame, quant, 0.1, rng, add_noise=False)
        xi = build_sensing_tensor_factored(ms.transmit, codebook.w_rf, quant.epsilon, dictionary)
        residual = ms.y_mu - np.einsum("rck,ck->rk", xi, h_b)
        assert np.linalg.norm(residual) < 1e-10 * np.linalg.norm(ms.y_mu)


class TestOffsets:
    """Tests for TBoD offset estimation."""

    def test_ratio_recovers_offset(self, small_cfg, rng):
        """Derivative-to-base ratios give the angular offsets of an active atom."""
        tbod = build_dictionary(small_cfg, DictionaryMode.TBOD)
        r, t = 5, 1
        dphi, dtheta = 0.3 * tbod.offset_rx, -0.2 * tbod.offset_tx
        base = random_complex(rng, small_cfg.subcarriers)

        h_b = np.zeros((tbod.columns, small_cfg.subcarriers), dtype=complex)
        g_r, g_t = small_cfg.grid_rx, small_cfg.grid_tx
        h_b[t * tbod.rx_columns + r] = base
        h_b[t * tbod.rx_columns + g_r + r] = base * dphi / tbod.offset_rx
        h_b[(g_t + t) * tbod.rx_columns + r] = base * dtheta / tbod.offset_tx

        offsets = estimate_offsets(h_b, tbod)
        est_phi, est_theta, active = offsets[0]
        assert est_phi[r, t] == pytest.approx(dphi)
        assert est_theta[r, t] == pytest.approx(dtheta)
        assert active.sum() == 1
        assert not offsets[1][2].any()

    def test_refined_reconstruction_is_exact(self, small_cfg, rng):
        """Refining with the recovered offsets resynthesizes the off-grid path."""
        tbod = build_dictionary(small_cfg, DictionaryMode.TBOD)
        r, t = 9, 2
        dphi, dtheta = 0.4 * tbod.offset_rx, 0.25 * tbod.offset_tx
        base = random_complex(rng, small_cfg.subcarriers)

        h_b = np.zeros((tbod.columns, small_cfg.subcarriers), dtype=complex)
        h_b[t * tbod.rx_columns + r] = base
        h_b[t * tbod.rx_columns + small_cfg.grid_rx + r] = base * dphi / tbod.offset_rx
        h_b[(small_cfg.grid_tx + t) * tbod.rx_columns + r] = base * dtheta / tbod.offset_tx

        phi = tbod.grid_rx.points[r] + dphi
        theta = tbod.grid_tx.points[t] + dtheta
        n = small_cfg.tx_antennas_per_user
        refined = reconstruct_channel(h_b, tbod, fold="refine")
        for k, f_k in enumerate(tbod.frequencies):
            a_r = steering_matrix([phi], f_k, small_cfg.rx_antennas, small_cfg.carrier_hz)
            a_t = steering_matrix([theta], f_k, n, small_cfg.carrier_hz)
            np.testing.assert_allclose(refined[:, :n, k], base[k] * a_r @ a_t.conj().T, atol=1e-12)
        np.testing.assert_array_equal(refined[:, n:], 0)

    def test_on_grid_dictionary_rejected(self, dictionary):
        """Offsets need derivative atoms."""
        with pytest.raises(InputError):
            estimate_offsets(np.zeros((dictionary.columns, dictionary.subcarriers)), dictionary)
