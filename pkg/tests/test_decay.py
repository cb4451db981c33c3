import math

import numpy as np
import pytest

from ramseylab import (
    CHAR_LOG_SCALE,
    DecayModel,
    DiscreteModes,
    DomainError,
    DynamicsKind,
    EnvCorrelation,
    OhmicSpectrum,
    TabulatedSpectrum,
    beta_coefficient,
    gamma_discrete,
    gamma_general,
    gamma_local,
    gamma_no_free_evolution,
    gamma_ohmic_closed,
    gamma_quadrature,
    gamma_short_time,
    log_characteristic_function,
    make_tmsv,
    ohmic_kernel_integral,
    to_covariance,
)

COSH3 = math.cosh(3.0)
SINH3 = math.sinh(3.0)
VACUUM = EnvCorrelation(a=1.0, c_plus=0.0, theta=0.0)
CORRELATED = EnvCorrelation(a=COSH3, c_plus=SINH3, theta=-1.0)
UNCORRELATED = EnvCorrelation(a=COSH3, c_plus=0.0, theta=0.0)
OHMIC = OhmicSpectrum(omega_c=1.0)


def random_physical_envs(rng, count, cp_frac_max=1.0):
    envs = []
    while len(envs) < count:
        a = float(rng.uniform(1.0, 20.0))
        cp = float(rng.uniform(0.0, a * cp_frac_max))
        theta = float(rng.uniform(-1.0, 1.0))
        env = EnvCorrelation(a=a, c_plus=cp, theta=theta)
        from ramseylab import validate_physicality

        if validate_physicality(env):
            envs.append(env)
    return envs


class TestBetaCoefficient:
    def test_no_evolution_yet(self):
        assert beta_coefficient(1.0, 1.0, 0.0, DynamicsKind.FULL) == 0.0

    def test_half_period_doubles(self):
        beta = beta_coefficient(1.0, 1.0, math.pi, DynamicsKind.FULL)
        assert beta == pytest.approx(2.0, abs=1e-15)

    def test_no_free_evolution_is_linear_in_t(self):
        assert beta_coefficient(2.0, 5.0, 0.5, DynamicsKind.NO_FREE_EVOLUTION) == -1.0j

    def test_zero_frequency_rejected_under_full(self):
        with pytest.raises(DomainError):
            beta_coefficient(1.0, 0.0, 1.0, DynamicsKind.FULL)

    def test_negative_time_rejected(self):
        with pytest.raises(DomainError):
            beta_coefficient(1.0, 1.0, -0.1, DynamicsKind.FULL)

    def test_aggregate_kinds_have_no_amplitude(self):
        with pytest.raises(DomainError):
            beta_coefficient(1.0, 1.0, 1.0, DynamicsKind.SHORT_TIME)


class TestGammaDiscrete:
    def test_zero_at_t0(self):
        modes = DiscreteModes(((0.7, 1.3), (0.2, 2.5)))
        assert gamma_discrete(make_tmsv(1.0), modes, 0.0) == 0.0

    def test_single_mode_half_period(self):
        # beta = 2, so the bracket is -8 * a * 2 * |beta|^2 = -64.
        modes = DiscreteModes(((1.0, 1.0),))
        assert gamma_discrete(VACUUM, modes, math.pi) == pytest.approx(-64.0, abs=1e-12)

    def test_perfectly_correlated_theta_one_cancels(self):
        env = EnvCorrelation(a=7.0, c_plus=7.0, theta=1.0)
        modes = DiscreteModes(((0.5, 0.8), (1.1, 2.0), (0.3, 4.4)))
        for t in (0.1, 1.0, math.pi, 10.0):
            assert gamma_discrete(env, modes, t) == pytest.approx(0.0, abs=1e-12)

    def test_empty_mode_list_rejected(self):
        with pytest.raises(DomainError):
            DiscreteModes(())

    def test_invalid_env_rejected(self):
        with pytest.raises(DomainError):
            gamma_discrete(EnvCorrelation(a=1.0, c_plus=0.5, theta=0.0),
                           DiscreteModes(((1.0, 1.0),)), 1.0)

    def test_nonpositive_for_random_envs(self):
        rng = np.random.default_rng(5)
        modes = DiscreteModes(((0.6, 0.9), (0.4, 3.0)))
        for env in random_physical_envs(rng, 30):
            for t in (0.2, 1.0, 4.0):
                assert gamma_discrete(env, modes, t) <= 1e-12

    def test_matches_characteristic_function_route(self):
        # Dual route: explicit bracket arithmetic vs the log characteristic
        # function at displacements (-2 beta, +2 beta), scale factor frozen.
        env = EnvCorrelation(a=3.0, c_plus=1.2, theta=0.4)
        modes = DiscreteModes(((0.8, 1.1), (0.5, 2.7)))
        sigma = to_covariance(env)
        for t in (0.3, 1.7):
            chi_sum = sum(
                log_characteristic_function(
                    sigma,
                    -2 * beta_coefficient(g, w, t, DynamicsKind.FULL),
                    +2 * beta_coefficient(g, w, t, DynamicsKind.FULL),
                )
                for g, w in modes.modes
            )
            assert gamma_discrete(env, modes, t) == pytest.approx(
                CHAR_LOG_SCALE * chi_sum, rel=1e-12
            )


class TestGammaGeneral:
    MODES = DiscreteModes(((0.9, 1.4), (0.3, 0.7)))
    ENV = EnvCorrelation(a=4.0, c_plus=2.0, theta=-0.6)

    def test_diagonal_elements_vanish(self):
        for n1 in (0, 1):
            for n2 in (0, 1):
                assert gamma_general(n1, n2, n1, n2, self.ENV, self.MODES, 1.3) == 0.0

    def test_coherence_element_equals_gamma_discrete(self):
        value = gamma_general(0, 1, 1, 0, self.ENV, self.MODES, 0.9)
        assert value == pytest.approx(gamma_discrete(self.ENV, self.MODES, 0.9), rel=1e-12)

    def test_transposed_coherence_element_equal(self):
        assert gamma_general(1, 0, 0, 1, self.ENV, self.MODES, 0.9) == pytest.approx(
            gamma_general(0, 1, 1, 0, self.ENV, self.MODES, 0.9), rel=1e-14
        )

    def test_matrix_zero_diagonal_and_swap_symmetric(self):
        t = 0.8
        pairs = [(0, 0), (0, 1), (1, 0), (1, 1)]
        matrix = np.array(
            [
                [
                    gamma_general(n1, n2, n1p, n2p, self.ENV, self.MODES, t)
                    for (n1p, n2p) in pairs
                ]
                for (n1, n2) in pairs
            ]
        )
        assert np.all(np.diag(matrix) == 0.0)
        assert np.allclose(matrix, matrix.T, rtol=1e-13, atol=0.0)
        assert np.all(matrix <= 1e-12)

    def test_bad_index_rejected(self):
        with pytest.raises(DomainError):
            gamma_general(0, 2, 1, 0, self.ENV, self.MODES, 1.0)


class TestGammaOhmicClosed:
    def test_vacuum_at_unit_time(self):
        assert gamma_ohmic_closed(VACUUM, 1.0, 1.0) == pytest.approx(
            -8.0 * math.log(2.0), abs=1e-12
        )

    def test_correlated_vs_uncorrelated_at_short_time(self):
        # Direct evaluation of the closed form at wc t = 0.1.
        assert gamma_ohmic_closed(CORRELATED, 1.0, 0.1) == pytest.approx(
            -0.027229106260358016, abs=1e-12
        )
        assert gamma_ohmic_closed(UNCORRELATED, 1.0, 0.1) == pytest.approx(
            -0.8014125422068422, abs=1e-12
        )

    def test_decoherence_free_line_is_exact_zero(self):
        env = EnvCorrelation(a=42.0, c_plus=42.0, theta=1.0)
        times = np.linspace(0.0, 10.0, 101)
        assert np.all(gamma_ohmic_closed(env, 1.0, times) == 0.0)

    def test_negative_time_rejected(self):
        with pytest.raises(DomainError):
            gamma_ohmic_closed(VACUUM, 1.0, -0.5)

    def test_zero_at_t0_and_nonpositive(self):
        rng = np.random.default_rng(17)
        times = np.linspace(0.0, 5.0, 200)
        for env in random_physical_envs(rng, 25):
            gamma = gamma_ohmic_closed(env, 1.0, times)
            assert gamma[0] == 0.0
            assert np.all(gamma <= 1e-12)

    def test_monotone_nonincreasing_for_physical_correlations(self):
        rng = np.random.default_rng(23)
        times = np.linspace(0.0, 6.0, 400)
        for env in random_physical_envs(rng, 25):
            gamma = gamma_ohmic_closed(env, 1.0, times)
            assert np.all(np.diff(gamma) <= 1e-12)

    def test_correlation_slows_decay_then_crosses(self):
        times = np.linspace(1e-3, 1.0, 150)
        corr = gamma_ohmic_closed(CORRELATED, 1.0, times)
        unc = gamma_ohmic_closed(UNCORRELATED, 1.0, times)
        assert np.all(corr >= unc)
        # The ordering flips at wc t = sqrt(2); bracket the sign change.
        delta = lambda t: gamma_ohmic_closed(CORRELATED, 1.0, t) - gamma_ohmic_closed(
            UNCORRELATED, 1.0, t
        )
        assert delta(1.0) > 0.0 > delta(3.0)


class TestGammaShortTime:
    def test_zero_at_t0(self):
        assert gamma_short_time(make_tmsv(0.3), 1.0, 0.0) == 0.0

    def test_pure_quartic_on_boundary(self):
        env = EnvCorrelation(a=10.0, c_plus=10.0, theta=-1.0)
        # quadratic coefficient vanishes; quartic is 4 a (1 - 7) = -240
        assert gamma_short_time(env, 1.0, 0.05) == pytest.approx(-240.0 * 0.05**4, rel=1e-13)

    def test_residual_against_closed_form_is_sixth_order(self):
        env = EnvCorrelation(a=5.0, c_plus=2.0, theta=0.5)
        r1 = abs(gamma_ohmic_closed(env, 1.0, 1e-2) - gamma_short_time(env, 1.0, 1e-2))
        r2 = abs(gamma_ohmic_closed(env, 1.0, 5e-3) - gamma_short_time(env, 1.0, 5e-3))
        assert r1 / r2 == pytest.approx(64.0, rel=0.05)

    def test_warns_beyond_trust_region(self):
        with pytest.warns(UserWarning):
            gamma_short_time(VACUUM, 1.0, 1.5)

    def test_nonpositive_within_trust_region(self):
        rng = np.random.default_rng(29)
        times = np.linspace(0.0, 1.0, 100)
        for env in random_physical_envs(rng, 25):
            assert np.all(gamma_short_time(env, 1.0, times) <= 1e-12)


class TestGammaLocalAndNoFree:
    def test_local_values(self):
        assert gamma_local(1.0, 1.0, 0.0) == 0.0
        assert gamma_local(1.0, 1.0, 0.1) == pytest.approx(-0.08, rel=1e-14)

    def test_local_matches_closed_form_at_short_times(self):
        for t in (0.01, 0.03, 0.05):
            closed = gamma_ohmic_closed(EnvCorrelation(a=2.0, c_plus=0.0, theta=0.0), 1.0, t)
            assert gamma_local(2.0, 1.0, t) == pytest.approx(closed, rel=0.01)

    def test_no_free_evolution_values(self):
        env = EnvCorrelation(a=10.0, c_plus=5.0, theta=0.0)
        assert gamma_no_free_evolution(env, 1.0, 0.1) == pytest.approx(-0.4, rel=1e-14)
        assert gamma_no_free_evolution(VACUUM, 1.0, 0.1) == gamma_local(1.0, 1.0, 0.1)

    def test_no_free_evolution_dfs_for_any_theta(self):
        for theta in (-1.0, -0.2, 0.5, 1.0):
            env = EnvCorrelation(a=6.0, c_plus=6.0, theta=theta)
            for t in (0.0, 0.5, 2.0, 10.0):
                assert gamma_no_free_evolution(env, 1.0, t) == 0.0


class TestQuadrature:
    def test_kernel_integral_matches_log_form(self):
        for omega_c, t in [(1.0, 0.1), (1.0, 1.0), (1.0, 2.0), (2.5, 0.7)]:
            value = ohmic_kernel_integral(omega_c, t)
            assert value == pytest.approx(math.log1p((omega_c * t) ** 2), abs=1e-10)

    def test_kernel_integral_at_unit_scales_is_ln2(self):
        assert ohmic_kernel_integral(1.0, 1.0) == pytest.approx(math.log(2.0), abs=1e-10)

    def test_zero_time(self):
        assert gamma_quadrature(CORRELATED, OHMIC, 0.0) == 0.0
        assert ohmic_kernel_integral(1.0, 0.0) == 0.0

    @pytest.mark.parametrize("env", [CORRELATED, UNCORRELATED])
    @pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 2.0])
    def test_calibrated_quadrature_matches_closed_form(self, env, t):
        assert abs(gamma_quadrature(env, OHMIC, t) - gamma_ohmic_closed(env, 1.0, t)) <= 1e-8

    def test_tabulated_ohmic_samples_recover_closed_form(self):
        grid = np.linspace(0.0, 40.0, 20001)
        spectrum = TabulatedSpectrum(
            frequencies=tuple(grid), densities=tuple(grid * np.exp(-grid))
        )
        env = EnvCorrelation(a=2.0, c_plus=1.0, theta=-0.5)
        for t in (0.3, 1.0):
            assert gamma_quadrature(env, spectrum, t) == pytest.approx(
                gamma_ohmic_closed(env, 1.0, t), abs=2e-3
            )

    def test_discrete_spectrum_rejected(self):
        with pytest.raises(DomainError):
            gamma_quadrature(VACUUM, DiscreteModes(((1.0, 1.0),)), 1.0)


class TestDecayModel:
    def test_local_quadratic_requires_uncorrelated_env(self):
        with pytest.raises(DomainError):
            DecayModel(DynamicsKind.LOCAL_QUADRATIC, make_tmsv(1.0), OHMIC)
        DecayModel(DynamicsKind.LOCAL_QUADRATIC, VACUUM, OHMIC)

    def test_short_time_requires_ohmic(self):
        with pytest.raises(DomainError):
            DecayModel(DynamicsKind.SHORT_TIME, VACUUM, DiscreteModes(((1.0, 1.0),)))

    def test_decoherence_free_flags(self):
        boundary = EnvCorrelation(a=3.0, c_plus=3.0, theta=1.0)
        assert DecayModel(DynamicsKind.FULL, boundary, OHMIC).is_decoherence_free
        assert not DecayModel(DynamicsKind.FULL, make_tmsv(1.0), OHMIC).is_decoherence_free
        nofree_env = EnvCorrelation(a=3.0, c_plus=3.0, theta=-0.4)
        assert DecayModel(
            DynamicsKind.NO_FREE_EVOLUTION, nofree_env, OHMIC
        ).is_decoherence_free
        assert not DecayModel(DynamicsKind.FULL, nofree_env, OHMIC).is_decoherence_free

    def test_curve_starts_at_full_coherence(self):
        model = DecayModel(DynamicsKind.FULL, make_tmsv(0.7), OHMIC)
        curve = model.curve(np.linspace(0.0, 3.0, 50))
        assert curve.times[0] == 0.0
        assert curve.gamma[0] == 0.0
        assert curve.coherence[0] == 1.0
        assert np.array_equal(curve.coherence, np.exp(curve.gamma))

    def test_dispatch_consistency_across_spectra(self):
        # A dense tabulated copy of the Ohmic density must agree with the
        # closed form under no-free-evolution dynamics too.
        grid = np.linspace(0.0, 60.0, 30001)
        tab = TabulatedSpectrum(frequencies=tuple(grid), densities=tuple(grid * np.exp(-grid)))
        env = EnvCorrelation(a=4.0, c_plus=1.0, theta=0.2)
        m_tab = DecayModel(DynamicsKind.NO_FREE_EVOLUTION, env, tab)
        assert m_tab.gamma(0.3) == pytest.approx(
            gamma_no_free_evolution(env, 1.0, 0.3), rel=1e-6
        )

    @pytest.mark.parametrize(
        "kind,env,spectrum",
        [
            (DynamicsKind.FULL, CORRELATED, OHMIC),
            (DynamicsKind.FULL, UNCORRELATED, DiscreteModes(((0.8, 1.2), (0.4, 3.1)))),
            (DynamicsKind.NO_FREE_EVOLUTION, CORRELATED, OHMIC),
            (DynamicsKind.SHORT_TIME, make_tmsv(0.4), OHMIC),
            (DynamicsKind.LOCAL_QUADRATIC, VACUUM, OHMIC),
        ],
    )
    def test_analytic_derivative_matches_finite_differences(self, kind, env, spectrum):
        model = DecayModel(kind, env, spectrum)
        for t in (0.05, 0.3, 0.9):
            h = 1e-7 * max(t, 1.0)
            numeric = (model.gamma(t + h) - model.gamma(t - h)) / (2 * h)
            assert model.gamma_derivative(t) == pytest.approx(numeric, rel=1e-5)

    def test_tabulated_derivative_tracks_closed_form(self):
        # The tabulated path falls back to finite differences; on a dense
        # Ohmic table it must track the closed-form derivative.
        grid = np.linspace(0.0, 40.0, 20001)
        tab = TabulatedSpectrum(frequencies=tuple(grid), densities=tuple(grid * np.exp(-grid)))
        env = EnvCorrelation(a=2.0, c_plus=1.0, theta=-0.5)
        m_tab = DecayModel(DynamicsKind.FULL, env, tab)
        m_closed = DecayModel(DynamicsKind.FULL, env, OHMIC)
        assert m_tab.gamma_derivative(0.4) == pytest.approx(
            m_closed.gamma_derivative(0.4), rel=1e-3
        )
