"""Acceptance suite: one test per primary criterion, stated tolerances pinned.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail line
per criterion.
"""

import math
import time
from contextlib import contextmanager

import mpmath as mp
import numpy as np
import pytest

from ramseylab import (
    DecayModel,
    DynamicsKind,
    EnvCorrelation,
    OhmicSpectrum,
    ProbeEnsemble,
    Strategy,
    dfs_check,
    fit_scaling_exponent,
    gamma_ohmic_closed,
    gamma_quadrature,
    gamma_short_time,
    logspace_int,
    make_tmsv,
    ohmic_kernel_integral,
    optimal_time,
    sweep_uncertainty,
    transition_probability,
    uncertainty_squared,
)

OHMIC = OhmicSpectrum(omega_c=1.0)


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"FAIL  {name}")
        raise
    print(f"PASS  {name}")


def fitted_slope(env, strategy, n_min, n_max, kind=DynamicsKind.FULL, t_cap=None):
    model = DecayModel(kind, env, OHMIC)
    table = sweep_uncertainty(model, strategy, logspace_int(n_min, n_max, 25),
                              total_time=1.0, t_cap=t_cap)
    return fit_scaling_exponent(table).slope


def test_zeno_scaling():
    with criterion("Zeno scaling: slope -0.75 +/- 0.02, runtime < 10 s"):
        start = time.perf_counter()
        slope = fitted_slope(EnvCorrelation(a=1.0, c_plus=0.0, theta=0.0),
                             Strategy.ENTANGLED, 100, 10**6)
        elapsed = time.perf_counter() - start
        assert abs(slope - (-0.75)) <= 0.02
        assert elapsed < 10.0


def test_super_zeno_scaling():
    with criterion("Super-Zeno scaling: slope -0.875 +/- 0.02, runtime < 10 s"):
        start = time.perf_counter()
        slope = fitted_slope(EnvCorrelation(a=10.0, c_plus=10.0, theta=-1.0),
                             Strategy.ENTANGLED, 100, 10**6)
        elapsed = time.perf_counter() - start
        assert abs(slope - (-0.875)) <= 0.02
        assert elapsed < 10.0


def test_standard_quantum_limit():
    with criterion("SQL: product-strategy slope -0.50 +/- 1e-6"):
        slope = fitted_slope(EnvCorrelation(a=1.0, c_plus=0.0, theta=0.0),
                             Strategy.PRODUCT, 10, 10**4)
        assert abs(slope - (-0.5)) <= 1e-6


def test_heisenberg_decoherence_free():
    with criterion("Heisenberg/DFS: max|gamma| <= 1e-12 and slope -1.0 +/- 1e-6"):
        grid = np.linspace(0.0, 3.0, 301)
        closed_dfs = DecayModel(
            DynamicsKind.FULL, EnvCorrelation(a=10.0, c_plus=10.0, theta=1.0), OHMIC
        )
        nofree_dfs = DecayModel(
            DynamicsKind.NO_FREE_EVOLUTION,
            EnvCorrelation(a=10.0, c_plus=10.0, theta=0.3),
            OHMIC,
        )
        assert dfs_check(closed_dfs, grid, 1e-12)
        assert dfs_check(nofree_dfs, grid, 1e-12)
        for model in (closed_dfs, nofree_dfs):
            table = sweep_uncertainty(model, Strategy.ENTANGLED,
                                      logspace_int(10, 10**4, 25),
                                      total_time=1.0, t_cap=1.0)
            assert abs(fit_scaling_exponent(table).slope - (-1.0)) <= 1e-6


def test_optimal_time_quadratic_cross_check():
    with criterion("Quadratic-limit optimal time matches 1/sqrt(32 N a) to 1e-8"):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(2, 10**6))
            a = float(rng.uniform(1.0, 50.0))
            model = DecayModel(DynamicsKind.LOCAL_QUADRATIC,
                               EnvCorrelation(a=a, c_plus=0.0, theta=0.0), OHMIC)
            ensemble = ProbeEnsemble(n=n, total_time=1.0, strategy=Strategy.ENTANGLED)
            t_root = optimal_time(model, ensemble)
            t_ref = 1.0 / math.sqrt(32.0 * n * a)
            assert abs(t_root - t_ref) / t_ref <= 1e-8


def test_short_time_taylor_consistency():
    with criterion("Short-time expansion residual order 6 +/- 0.5"):
        rng = np.random.default_rng(3)
        times = (1e-2, 5e-3, 2.5e-3)
        for _ in range(10):
            # generic draw: skip the measure-zero surface where the sixth-order
            # coefficient (-8a + 8c+(16 - 15 theta))/3 nearly vanishes and the
            # residual is dominated by the next order
            while True:
                a = float(rng.uniform(1.0, 20.0))
                cp = float(rng.uniform(0.0, a))
                theta = float(rng.uniform(-1.0, 1.0))
                if abs((-8.0 * a + 8.0 * cp * (16.0 - 15.0 * theta)) / 3.0) >= 5.0:
                    break
            env = EnvCorrelation(a=a, c_plus=cp, theta=theta)
            residuals = [
                abs(gamma_ohmic_closed(env, 1.0, t) - gamma_short_time(env, 1.0, t))
                for t in times
            ]
            order = 0.5 * (
                math.log2(residuals[0] / residuals[1])
                + math.log2(residuals[1] / residuals[2])
            )
            assert abs(order - 6.0) <= 0.5


def test_quadrature_oracle():
    with criterion("Quadrature: kernel integral and calibrated gamma match to 1e-8"):
        for t in (0.1, 1.0, 2.0):
            assert abs(ohmic_kernel_integral(1.0, t) - math.log1p(t * t)) <= 1e-8
        correlated = make_tmsv(1.5)
        uncorrelated = EnvCorrelation(a=math.cosh(3.0), c_plus=0.0, theta=0.0)
        for env in (correlated, uncorrelated):
            for t in (0.1, 0.5, 1.0, 2.0):
                assert abs(
                    gamma_quadrature(env, OHMIC, t) - gamma_ohmic_closed(env, 1.0, t)
                ) <= 1e-8


def test_correlation_slows_decay_with_crossing():
    with criterion("Correlated coherence above uncorrelated for wc t <= 1, "
                   "crossing in (1, 3), values at wc t = 0.1 within 1e-3"):
        correlated = EnvCorrelation(a=math.cosh(3.0), c_plus=math.sinh(3.0), theta=-1.0)
        uncorrelated = EnvCorrelation(a=math.cosh(3.0), c_plus=0.0, theta=0.0)
        grid = np.linspace(0.0, 3.0, 300)
        coh_corr = np.exp(gamma_ohmic_closed(correlated, 1.0, grid))
        coh_unc = np.exp(gamma_ohmic_closed(uncorrelated, 1.0, grid))
        short = grid <= 1.0
        assert np.all(coh_corr[short] >= coh_unc[short])
        diff = coh_corr - coh_unc
        inside = (grid > 1.0) & (grid < 3.0)
        assert np.any(diff[inside] > 0) and np.any(diff[inside] < 0)
        assert abs(math.exp(gamma_ohmic_closed(correlated, 1.0, 0.1)) - 0.973) <= 1e-3
        assert abs(math.exp(gamma_ohmic_closed(uncorrelated, 1.0, 0.1)) - 0.449) <= 1e-3


def test_cramer_rao_chain_identity():
    with criterion("Coincidence model through the Fisher/Cramer-Rao chain "
                   "reproduces the closed form to 1e-12 (1000 draws)"):
        mp.mp.dps = 40
        rng = np.random.default_rng(12)
        for _ in range(1000):
            n = int(rng.integers(1, 21))
            strategy = Strategy.ENTANGLED if rng.uniform() < 0.5 else Strategy.PRODUCT
            ensemble = ProbeEnsemble(n=n, total_time=50.0, strategy=strategy)
            m = ensemble.phase_multiplier
            t = float(rng.uniform(0.05, 3.0))
            gamma = -float(rng.uniform(0.0, 3.0))
            eps = float(rng.uniform(0.01, math.pi - 0.01)) / t

            def p_model(eps_var):
                return (1 + mp.exp(m * gamma) * mp.cos(m * eps_var * t)) / 2

            p_mp = p_model(mp.mpf(eps))
            # guard: the high-precision model agrees with the implementation
            assert abs(float(p_mp) - transition_probability(eps, t, gamma, ensemble)) < 1e-14
            dp = mp.diff(p_model, mp.mpf(eps))
            fisher = dp**2 / (p_mp * (1 - p_mp))
            if strategy is Strategy.PRODUCT:
                fisher *= n
            chain = float(t / (ensemble.total_time * fisher))
            closed = uncertainty_squared(eps, t, gamma, ensemble)
            assert abs(chain - closed) / closed <= 1e-12
