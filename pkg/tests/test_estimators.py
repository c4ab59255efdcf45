"""Tests for BGSR, GSMP, the per-subcarrier baselines and reconstruction."""

import numpy as np
import pytest

from tests.helpers import random_complex, unit_columns
from thz_bgsr.config import DictionaryMode
from thz_bgsr.dictionary import ColumnGroups, build_dictionary
from thz_bgsr.errors import InputError, NumericalError
from thz_bgsr.estimators import (
    bgsr_e_step,
    bgsr_em,
    bgsr_estimate,
    bgsr_m_step,
    cholesky_factor,
    cholesky_solve,
    gsmp_estimate,
    omp_estimate,
    omp_path,
    omp_per_subcarrier,
    posterior_covariance,
    reconstruct_channel,
    smv_sbl,
    smv_sbl_estimate,
)

PLANTED = [3, 17, 29]


@pytest.fixture
def planted(rng):
    """Random 20 x 40 sensing tensor over 6 subcarriers with a three-atom shared support."""
    rows, columns, k = 20, 40, 6
    xi = random_complex(rng, rows, columns, k) / np.sqrt(rows)
    h_b = np.zeros((columns, k), dtype=complex)
    h_b[PLANTED] = random_complex(rng, len(PLANTED), k) + 2.0
    noise_var = 1e-4
    y = np.einsum("rck,ck->rk", xi, h_b) + np.sqrt(noise_var) * random_complex(rng, rows, k)
    return xi, y, noise_var * np.eye(rows), h_b


class TestLinalg:
    """Tests for the jittered Cholesky helpers."""

    def test_solve(self, rng):
        """cholesky_solve inverts a well-conditioned Hermitian matrix."""
        a = random_complex(rng, 5, 5)
        a = a @ a.conj().T + np.eye(5)
        b = random_complex(rng, 5, 2)
        np.testing.assert_allclose(a @ cholesky_solve(a, b), b, atol=1e-10)

    def test_singular_psd_recovers_with_jitter(self):
        """A rank-one PSD matrix factors after adding jitter."""
        factor, lower = cholesky_factor(np.ones((3, 3)))
        assert lower
        assert np.all(np.isfinite(factor))

    def test_indefinite_raises_with_condition(self):
        """An indefinite matrix raises NumericalError carrying its condition number."""
        with pytest.raises(NumericalError) as exc_info:
            cholesky_factor(np.diag([1.0, -1.0]), what="test")
        assert exc_info.value.condition == pytest.approx(1.0)


class TestBGSRSteps:
    """Tests for the E- and M-steps."""

    def test_woodbury_matches_direct_inverse(self, rng):
        """The Woodbury posterior equals (Phi^H C_w^-1 Phi + Gamma^-1)^-1."""
        rows, columns = 6, 10
        phi = random_complex(rng, rows, columns)
        c_w = 0.3 * np.eye(rows)
        gamma = rng.uniform(0.5, 2.0, columns)
        y = random_complex(rng, rows)

        direct = np.linalg.inv(phi.conj().T @ np.linalg.inv(c_w) @ phi + np.diag(1.0 / gamma))
        np.testing.assert_allclose(posterior_covariance(phi, c_w, gamma), direct, atol=1e-10)

        sigma_diag, h_b = bgsr_e_step(phi[:, :, None], y[:, None], c_w, gamma)
        np.testing.assert_allclose(sigma_diag[:, 0], np.real(np.diag(direct)), atol=1e-10)
        expected_mean = direct @ phi.conj().T @ np.linalg.solve(c_w, y)
        np.testing.assert_allclose(h_b[:, 0], expected_mean, atol=1e-10)

    def test_identity_sensing_closed_form(self, rng):
        """With Xi = I and C_w = sigma^2 I the mean is gamma / (gamma + sigma^2) y."""
        n, noise_var = 4, 0.5
        gamma = np.array([0.5, 1.0, 2.0, 4.0])
        y = random_complex(rng, n, 1)
        sigma_diag, h_b = bgsr_e_step(np.eye(n)[:, :, None], y, noise_var * np.eye(n), gamma)
        shrink = gamma / (gamma + noise_var)
        np.testing.assert_allclose(h_b[:, 0], shrink * y[:, 0])
        np.testing.assert_allclose(sigma_diag[:, 0], shrink * noise_var)

    def test_zero_gamma_gives_zero_posterior(self, rng):
        """Pruned entries have zero mean and variance."""
        xi = random_complex(rng, 4, 6, 2)
        gamma = np.array([1.0, 0.0, 1.0, 0.0, 0.0, 1.0])
        sigma_diag, h_b = bgsr_e_step(xi, random_complex(rng, 4, 2), np.eye(4), gamma)
        assert np.all(h_b[gamma == 0] == 0)
        assert np.all(sigma_diag[gamma == 0] == 0)

    def test_negative_gamma_rejected(self, rng):
        """Hyperparameters must be nonnegative."""
        with pytest.raises(InputError):
            bgsr_e_step(random_complex(rng, 3, 3, 1), random_complex(rng, 3, 1), np.eye(3), -np.ones(3))

    def test_m_step(self):
        """gamma is the subcarrier average of variance plus squared mean."""
        sigma_diag = np.array([[1.0, 3.0], [0.0, 0.0]])
        h_b = np.array([[1.0, 1j], [2.0, 0.0]])
        np.testing.assert_allclose(bgsr_m_step(sigma_diag, h_b), [3.0, 2.0])


class TestBGSR:
    """Tests for the BGSR EM loop and estimator."""

    def test_recovers_planted_support(self, planted):
        """A three-atom shared support is recovered exactly at high SNR."""
        xi, y, c_w, h_b = planted
        state = bgsr_em(xi, y, c_w, eps_tol=1e-8, k_max=500)
        assert state.support().tolist() == PLANTED
        err = np.linalg.norm(state.h_b - h_b) / np.linalg.norm(h_b)
        assert err < 0.05

    def test_estimate_restricted_to_support(self, planted):
        """bgsr_estimate zeroes every coefficient outside the support."""
        xi, y, c_w, _ = planted
        output = bgsr_estimate(xi, y, c_w, eps_tol=1e-8, k_max=500)
        outside = np.setdiff1d(np.arange(xi.shape[1]), output.support)
        assert np.all(output.h_b_hat[outside] == 0)
        assert output.h_hat is None
        assert output.algorithm == "bgsr"

    def test_column_permutation_invariance(self, planted, rng):
        """Permuting dictionary columns permutes gamma and h_b the same way."""
        xi, y, c_w, _ = planted
        perm = rng.permutation(xi.shape[1])
        base = bgsr_em(xi, y, c_w, eps_tol=1e-12, k_max=15, prune_threshold=0.0)
        permuted = bgsr_em(xi[:, perm], y, c_w, eps_tol=1e-12, k_max=15, prune_threshold=0.0)
        np.testing.assert_allclose(permuted.gamma, base.gamma[perm], rtol=1e-6, atol=1e-12)
        np.testing.assert_allclose(permuted.h_b, base.h_b[perm], rtol=1e-6, atol=1e-10)

    def test_likelihood_nondecreasing_single_subcarrier(self, planted):
        """For K = 1 without pruning each EM step does not lower the marginal likelihood."""
        xi, y, c_w, _ = planted
        state = bgsr_em(
            xi[:, :, :1], y[:, :1], c_w, eps_tol=1e-12, k_max=30, prune_threshold=0.0, track_likelihood=True
        )
        ll = np.array(state.log_likelihood)
        assert ll.size == state.iterations
        assert np.all(np.diff(ll) >= -1e-8 * np.abs(ll[:-1]))

    def test_trace_records_gamma_change(self, planted):
        """One trace entry per iteration; stopping happens at eps_tol or k_max."""
        xi, y, c_w, _ = planted
        state = bgsr_em(xi, y, c_w, eps_tol=1e-8, k_max=3)
        assert state.iterations == len(state.trace) <= 3

    @pytest.mark.parametrize("eps_tol", [0.0, -1.0])
    def test_nonpositive_tolerance_rejected(self, planted, eps_tol):
        """eps_tol must be positive."""
        xi, y, c_w, _ = planted
        with pytest.raises(InputError):
            bgsr_em(xi, y, c_w, eps_tol=eps_tol)

    def test_shape_mismatch(self, planted):
        """y_mu and C_w must match the sensing tensor."""
        xi, y, c_w, _ = planted
        with pytest.raises(InputError):
            bgsr_em(xi, y[:-1], c_w)
        with pytest.raises(InputError):
            bgsr_em(xi, y, c_w[:-1, :-1])

    def test_subcarrier_permutation_invariance(self, planted, rng):
        """Reordering subcarriers leaves gamma unchanged and permutes h_b."""
        xi, y, c_w, _ = planted
        perm = rng.permutation(xi.shape[2])
        base = bgsr_em(xi, y, c_w, eps_tol=1e-12, k_max=15, prune_threshold=0.0)
        permuted = bgsr_em(xi[:, :, perm], y[:, perm], c_w, eps_tol=1e-12, k_max=15, prune_threshold=0.0)
        np.testing.assert_allclose(permuted.gamma, base.gamma, rtol=1e-8, atol=1e-14)
        np.testing.assert_allclose(permuted.h_b, base.h_b[:, perm], rtol=1e-6, atol=1e-10)

    def test_singleton_groups_match_untied(self, planted):
        """Unit-weight singleton groups reproduce the untied EM."""
        xi, y, c_w, _ = planted
        columns = xi.shape[1]
        singletons = ColumnGroups(groups=np.arange(columns), weights=np.ones(columns))
        untied = bgsr_em(xi, y, c_w, eps_tol=1e-8, k_max=40)
        tied = bgsr_em(xi, y, c_w, eps_tol=1e-8, k_max=40, groups=singletons)
        assert tied.iterations == untied.iterations
        np.testing.assert_allclose(tied.gamma, untied.gamma, rtol=1e-10, atol=1e-14)
        np.testing.assert_array_equal(tied.support(), untied.support())

    def test_tied_support_keeps_whole_groups(self, planted):
        """A selected group contributes every column, however small its weight."""
        xi, y, c_w, _ = planted
        columns = xi.shape[1]
        pairs = ColumnGroups(groups=np.arange(columns) // 2, weights=np.tile([1.0, 1e-3], columns // 2))
        state = bgsr_em(xi, y, c_w, eps_tol=1e-8, k_max=200, groups=pairs)
        support = state.support()
        assert set(PLANTED) <= set(support.tolist())
        assert np.all(np.bincount(support // 2, minlength=columns // 2) % 2 == 0)
        np.testing.assert_allclose(state.gamma, pairs.expand(state.group_gamma))

    def test_groups_must_cover_columns(self, planted):
        """Column groups must match the sensing tensor width."""
        xi, y, c_w, _ = planted
        with pytest.raises(InputError):
            bgsr_em(xi, y, c_w, groups=ColumnGroups(groups=np.arange(3), weights=np.ones(3)))

    def test_tbod_dictionary_ties_derivatives(self, small_cfg, measurements, codebook):
        """With a TBoD dictionary the support is a union of whole atom groups."""
        from thz_bgsr.dictionary import build_sensing_tensor_factored

        tbod = build_dictionary(small_cfg, DictionaryMode.TBOD)
        xi = build_sensing_tensor_factored(
            measurements.transmit, codebook.w_rf, measurements.quant.epsilon, tbod
        )
        output = bgsr_estimate(xi, measurements.y_mu, measurements.c_w, dictionary=tbod)
        groups = tbod.column_groups()
        counts = np.bincount(groups.groups[output.support], minlength=groups.num_groups)
        assert np.all((counts == 0) | (counts == 4))
        assert output.h_hat.shape == (small_cfg.rx_antennas, small_cfg.total_tx_antennas, small_cfg.subcarriers)


class TestGSMP:
    """Tests for group-sparse matching pursuit."""

    @pytest.fixture
    def xi(self, rng):
        return unit_columns(random_complex(rng, 32, 64, 4))

    def test_single_atom(self, xi, rng):
        """One shared atom is found and fitted exactly."""
        coeffs = np.exp(2j * np.pi * rng.uniform(size=4))
        y = xi[:, 7, :] * coeffs
        output = gsmp_estimate(xi, y, eps0=1e-12)
        assert output.support.tolist() == [7]
        np.testing.assert_allclose(output.h_b_hat[7], coeffs, atol=1e-10)
        assert not output.degenerate

    def test_two_atoms(self, xi, rng):
        """Two shared atoms are found on every subcarrier."""
        a = np.exp(2j * np.pi * rng.uniform(size=4))
        b = np.exp(2j * np.pi * rng.uniform(size=4))
        y = xi[:, 5, :] * a + xi[:, 40, :] * b
        output = gsmp_estimate(xi, y, eps0=1e-12)
        assert sorted(output.support.tolist()) == [5, 40]
        np.testing.assert_allclose(output.h_b_hat[40], b, atol=1e-10)

    def test_max_atoms_cap(self, xi, rng):
        """Selection stops at max_atoms."""
        y = random_complex(rng, 32, 4)
        output = gsmp_estimate(xi, y, eps0=1e-12, max_atoms=3)
        assert output.iterations == 3
        assert len(output.trace) == 3

    def test_residual_energy_trace_decreases(self, xi, rng):
        """The fitted residual energy never grows as atoms are added."""
        output = gsmp_estimate(xi, random_complex(rng, 32, 4), eps0=1e-12, max_atoms=8)
        assert np.all(np.diff(output.trace) <= 1e-10)

    def test_nonpositive_threshold_rejected(self, xi, rng):
        """eps0 must be positive."""
        with pytest.raises(InputError):
            gsmp_estimate(xi, random_complex(rng, 32, 4), eps0=0.0)


class TestBaselines:
    """Tests for per-subcarrier OMP and SBL."""

    def test_omp_residual_nonincreasing(self, rng):
        """Residual norms along an OMP path do not increase."""
        xi_k = random_complex(rng, 16, 40)
        path = omp_path(xi_k, random_complex(rng, 16), max_atoms=10, tol=0.0)
        assert len(path.support) == 10
        assert np.all(np.diff(path.residual_norms) <= 1e-10)

    def test_omp_zero_measurement(self, rng):
        """A zero measurement selects nothing."""
        path = omp_path(random_complex(rng, 8, 20), np.zeros(8), max_atoms=4, tol=0.0)
        assert path.support == []
        assert np.all(path.coefficients == 0)

    def test_omp_too_many_atoms(self, rng):
        """More atoms than rows is rejected."""
        with pytest.raises(InputError):
            omp_path(random_complex(rng, 4, 10), random_complex(rng, 4), max_atoms=5, tol=0.0)

    def test_omp_per_subcarrier_exact(self, rng):
        """A two-atom measurement is recovered exactly."""
        xi_k = unit_columns(random_complex(rng, 12, 30))
        truth = np.zeros(30, dtype=complex)
        truth[[5, 18]] = [1.0 - 0.5j, -2.0]
        h = omp_per_subcarrier(xi_k, xi_k @ truth, max_atoms=4, tol=1e-20)
        np.testing.assert_allclose(h, truth, atol=1e-10)

    def test_omp_estimate_per_subcarrier_support(self, rng):
        """OMP picks a different atom on each subcarrier when the channel differs."""
        xi = unit_columns(random_complex(rng, 16, 30, 2))
        y = np.stack([xi[:, 4, 0], xi[:, 21, 1]], axis=1)
        output = omp_estimate(xi, y, np.zeros((16, 16)), tol=1e-20)
        assert output.support.tolist() == [4, 21]
        assert output.h_b_hat[4, 0] == pytest.approx(1.0)
        assert output.h_b_hat[21, 1] == pytest.approx(1.0)

    def test_smv_sbl_is_bgsr_with_one_subcarrier(self, planted):
        """SBL on one subcarrier matches BGSR run on that subcarrier alone."""
        xi, y, c_w, _ = planted
        sbl = smv_sbl(xi[:, :, 2], y[:, 2], c_w)
        bgsr = bgsr_estimate(xi[:, :, 2:3], y[:, 2:3], c_w)
        np.testing.assert_allclose(sbl, bgsr.h_b_hat[:, 0])

    def test_smv_sbl_estimate_runs_each_subcarrier(self, planted):
        """The SBL estimator stacks independent per-subcarrier solutions."""
        xi, y, c_w, _ = planted
        output = smv_sbl_estimate(xi, y, c_w)
        assert output.algorithm == "sbl"
        np.testing.assert_allclose(output.h_b_hat[:, 1], smv_sbl(xi[:, :, 1], y[:, 1], c_w))


class TestReconstruct:
    """Tests for beamspace-to-CFR reconstruction."""

    def test_one_hot(self, dictionary, small_cfg):
        """A single coefficient maps to one rank-one block of its user."""
        u, r, t = 1, 6, 3
        h_b = np.zeros((dictionary.columns, dictionary.subcarriers), dtype=complex)
        h_b[u * dictionary.columns_per_user + t * dictionary.rx_columns + r] = 1.0
        cfr = reconstruct_channel(h_b, dictionary)
        n = small_cfg.tx_antennas_per_user
        for k in range(dictionary.subcarriers):
            expected = np.outer(dictionary.a_r[:, r, k], dictionary.a_t[u, :, t, k].conj())
            np.testing.assert_allclose(cfr[:, n:, k], expected, atol=1e-12)
        assert np.all(cfr[:, :n] == 0)

    def test_linear(self, dictionary, rng):
        """Reconstruction is linear in the coefficients."""
        shape = (dictionary.columns, dictionary.subcarriers)
        a, b = random_complex(rng, *shape), random_complex(rng, *shape)
        np.testing.assert_allclose(
            reconstruct_channel(2 * a + 1j * b, dictionary),
            2 * reconstruct_channel(a, dictionary) + 1j * reconstruct_channel(b, dictionary),
            atol=1e-10,
        )

    def test_matches_dictionary_product(self, dictionary, rng):
        """vec(H[k]) = Psi[k] h_b[:, k]."""
        h_b = random_complex(rng, dictionary.columns, dictionary.subcarriers)
        cfr = reconstruct_channel(h_b, dictionary)
        for k in range(dictionary.subcarriers):
            vec = dictionary.psi_mu[:, :, k] @ h_b[:, k]
            np.testing.assert_allclose(vec.reshape(cfr.shape[:2], order="F"), cfr[:, :, k], atol=1e-10)

    def test_refine_without_derivatives_is_linear(self, small_cfg, rng):
        """With zero derivative coefficients refinement changes nothing."""
        tbod = build_dictionary(small_cfg, DictionaryMode.TBOD)
        h_b = np.zeros((tbod.columns, tbod.subcarriers), dtype=complex)
        base = np.flatnonzero(tbod.base_mask())
        picked = rng.choice(base, size=4, replace=False)
        h_b[picked] = random_complex(rng, 4, tbod.subcarriers)
        np.testing.assert_allclose(
            reconstruct_channel(h_b, tbod, fold="refine"), reconstruct_channel(h_b, tbod), atol=1e-12
        )

    def test_refine_on_grid_is_linear(self, dictionary, rng):
        """On-grid dictionaries ignore the refine fold."""
        h_b = random_complex(rng, dictionary.columns, dictionary.subcarriers)
        np.testing.assert_array_equal(
            reconstruct_channel(h_b, dictionary, fold="refine"), reconstruct_channel(h_b, dictionary)
        )

    def test_wrong_shape(self, dictionary):
        """Coefficients must match the dictionary columns and subcarriers."""
        with pytest.raises(InputError):
            reconstruct_channel(np.zeros((3, dictionary.subcarriers)), dictionary)
