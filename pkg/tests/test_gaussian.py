import numpy as np
import pytest

from warbench.dynamics import AttritionParams, ForceState, TimeGrid
from warbench.gaussianstep import (
    conditional_moments,
    regularize_psd,
    simulate_gaussian_batch,
    simulate_gaussian_path,
)
from warbench.shocks import Copula, Marginals, StepShockModel, build_joint
from warbench import rng as rngmod

PARAMS = AttritionParams(0.1, 0.1)
STATE = ForceState(100, 100)


def enumeration_moments(state, params, pi, model, dt):
    """Exact mean/covariance of the unclamped one-step transition."""
    outcomes = [(0, 0), (1, 0), (0, 1), (1, 1)]
    probs = model.pmf()
    nexts = np.array(
        [
            [
                state.B - params.r * zr * state.R * dt,
                state.R - pi * params.b * zb * state.B * dt,
            ]
            for zb, zr in outcomes
        ]
    )
    mean = probs @ nexts
    centered = nexts - mean
    cov = (probs[:, None, None] * np.einsum("ij,ik->ijk", centered, centered)).sum(axis=0)
    return mean, cov


class TestConditionalMoments:
    def test_reference_example(self):
        model = build_joint(Marginals(0.5, 0.5), Copula("independence"))
        got = conditional_moments(STATE, PARAMS, 1.0, model, 1.0)
        np.testing.assert_allclose(got.mu, [95.0, 95.0], atol=1e-12)
        np.testing.assert_allclose(got.S, [[25.0, 0.0], [0.0, 25.0]], atol=1e-12)

    @pytest.mark.parametrize("p", [0.0, 1.0])
    def test_degenerate_shocks_kill_covariance(self, p):
        model = build_joint(Marginals(p, p), Copula("independence"))
        got = conditional_moments(STATE, PARAMS, 0.7, model, 1.0)
        np.testing.assert_allclose(got.S, np.zeros((2, 2)), atol=1e-12)

    def test_comonotone_positive_covariance(self):
        model = build_joint(Marginals(0.5, 0.5), Copula("frechet_upper"))
        pi, dt = 0.8, 0.5
        got = conditional_moments(STATE, PARAMS, pi, model, dt)
        expected = pi * PARAMS.b * PARAMS.r * STATE.B * STATE.R * 0.25 * dt**2
        assert got.S[0, 1] == pytest.approx(expected, rel=1e-12)
        assert got.S[0, 1] > 0

    def test_one_step_exactness_random_configs(self):
        rng = np.random.default_rng(42)
        copulas = [
            Copula("independence"),
            Copula("frechet_upper"),
            Copula("frechet_lower"),
            Copula("gaussian", 0.4),
            Copula("clayton", 1.3),
        ]
        for i in range(100):
            state = ForceState(*rng.uniform(10, 200, 2))
            params = AttritionParams(*rng.uniform(0, 0.2, 2))
            pi = rng.uniform(0, 1)
            dt = rng.uniform(0.05, 1.0)
            model = build_joint(Marginals(*rng.random(2)), copulas[i % len(copulas)])
            got = conditional_moments(state, params, pi, model, dt)
            mean, cov = enumeration_moments(state, params, pi, model, dt)
            np.testing.assert_allclose(got.mu, mean, atol=1e-12, rtol=1e-12)
            np.testing.assert_allclose(got.S, cov, atol=1e-12, rtol=1e-9)

    def test_role_swap_symmetry(self):
        model = build_joint(Marginals(0.3, 0.8), Copula("gaussian", -0.25))
        swapped = StepShockModel(model.q00, model.q01, model.q10, model.q11)
        a = conditional_moments(ForceState(120, 70), AttritionParams(0.04, 0.09), 1.0, model, 0.7)
        b = conditional_moments(ForceState(70, 120), AttritionParams(0.09, 0.04), 1.0, swapped, 0.7)
        np.testing.assert_allclose(a.mu, b.mu[::-1], atol=1e-12)
        np.testing.assert_allclose(a.S, b.S[::-1, ::-1].T, atol=1e-12)


class TestRegularization:
    def test_psd_untouched(self):
        S = np.array([[4.0, 1.0], [1.0, 2.0]])
        np.testing.assert_array_equal(regularize_psd(S), S)

    def test_negative_eigenvalue_lifted(self):
        S = np.array([[1.0, 2.0], [2.0, 1.0]])  # eigenvalues 3, -1
        fixed = regularize_psd(S)
        assert np.linalg.eigvalsh(fixed).min() >= 0


class TestGaussianSimulator:
    def test_degenerate_shocks_match_deterministic_path(self):
        model = build_joint(Marginals(1.0, 1.0), Copula("independence"))
        grid = TimeGrid(1.0, 6)
        traj = simulate_gaussian_path(STATE, PARAMS, 1.0, model, grid, rngmod.substream(0, 1))
        from warbench.dynamics import ShockRealization, propagate_path

        expected = propagate_path(STATE, PARAMS, 1.0, [ShockRealization(1, 1)] * 6, grid)
        _, bg, rg = traj.to_arrays()
        _, be, re_ = expected.to_arrays()
        np.testing.assert_allclose(bg, be, atol=1e-9)
        np.testing.assert_allclose(rg, re_, atol=1e-9)

    def test_deterministic_given_seed(self):
        model = build_joint(Marginals(0.6, 0.5), Copula("independence"))
        grid = TimeGrid(1.0, 5)
        a = simulate_gaussian_batch(STATE, PARAMS, 0.7, model, grid, 64, rngmod.substream(7, 1))
        b = simulate_gaussian_batch(STATE, PARAMS, 0.7, model, grid, 64, rngmod.substream(7, 1))
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])

    def test_one_step_sample_moments(self):
        model = build_joint(Marginals(0.5, 0.5), Copula("independence"))
        grid = TimeGrid(1.0, 1)
        n = 10**5
        B, R = simulate_gaussian_batch(
            STATE, PARAMS, 1.0, model, grid, n, rngmod.substream(123, 9)
        )
        sample = np.stack([B[:, 1], R[:, 1]], axis=1)
        target = conditional_moments(STATE, PARAMS, 1.0, model, 1.0)
        tol = 4.0 * np.sqrt(np.diag(target.S)) / np.sqrt(n)
        assert np.all(np.abs(sample.mean(axis=0) - target.mu) <= tol)
        cov = np.cov(sample.T)
        np.testing.assert_allclose(np.diag(cov), np.diag(target.S), rtol=0.05)

    def test_states_never_negative(self):
        model = build_joint(Marginals(0.9, 0.9), Copula("frechet_upper"))
        grid = TimeGrid(1.0, 30)
        B, R = simulate_gaussian_batch(
            ForceState(20, 20), AttritionParams(0.3, 0.3), 1.0, model, grid, 500,
            rngmod.substream(5, 5),
        )
        assert (B >= 0).all() and (R >= 0).all()

    def test_clamp_rare_for_small_steps(self):
        # With 3 sigma inside the positive orthant, clamping is (nearly) never active.
        model = build_joint(Marginals(0.5, 0.5), Copula("independence"))
        grid = TimeGrid(0.1, 10)
        B, R = simulate_gaussian_batch(
            STATE, PARAMS, 1.0, model, grid, 10**4, rngmod.substream(17, 3)
        )
        assert float(np.mean((B[:, 1:] == 0) | (R[:, 1:] == 0))) < 1e-3
