import numpy as np
import pytest

from conftest import make_scenario
from warbench.errors import EnumerationLimitError, ParameterError
from warbench.optimizer import (
    OptimizerSettings,
    build_worstcase_model,
    grid_sweep,
    optimize_allocation,
)

INTERIOR = dict(
    initial={"B0": 100.0, "R0": 115.0},
    attrition={"r": 0.10, "b": 0.10},
    preferences={"theta": [0.2, 0.0, 0.8], "zeta": 0.3, "b_min": 60.0},
    aversion={"mode": "tilt", "value": 0.002},
)


class TestOptimizeAllocation:
    def test_reserve_only_preference_hits_floor(self):
        sc = make_scenario(preferences={"theta": [0.0, 0.0, 1.0], "zeta": 0.05, "b_min": 60.0})
        report = optimize_allocation(sc)
        assert report.optimal_pi == sc.optimizer_settings().pi_floor

    def test_reserve_only_with_custom_floor(self):
        sc = make_scenario(
            preferences={"theta": [0.0, 0.0, 1.0], "zeta": 0.05, "b_min": 60.0},
            optimizer={"pi_floor": 0.15},
        )
        assert optimize_allocation(sc).optimal_pi == 0.15

    def test_single_prior_full_trust_difference_only(self):
        sc = make_scenario(
            preferences={"theta": [1.0, 0.0, 0.0], "zeta": 0.05, "b_min": 60.0},
            priors=[{"p_B": 0.7, "p_R": 0.5, "copula": {"kind": "independence"}}],
            weights=[1.0],
            aversion={"mode": "tilt", "value": 0.0},
        )
        report = optimize_allocation(sc)
        assert report.optimal_pi == pytest.approx(1.0, abs=0.02)

    def test_reference_scenario_matches_grid_argmax(self):
        sc = make_scenario()
        report = optimize_allocation(sc)
        best = max(grid_sweep(sc, 101), key=lambda p: p.objective)
        assert abs(report.optimal_pi - best.pi) <= 0.02

    def test_interior_optimum_matches_grid_argmax(self):
        sc = make_scenario(**INTERIOR)
        report = optimize_allocation(sc)
        best = max(grid_sweep(sc, 201), key=lambda p: p.objective)
        assert abs(report.optimal_pi - best.pi) <= 0.02

    def test_iterates_respect_projection(self):
        sc = make_scenario(optimizer={"pi_floor": 0.1, "max_iters": 300})
        report = optimize_allocation(sc)
        hist = np.array(report.history)
        assert (hist >= 0.1).all() and (hist <= 1.0).all()

    def test_deterministic_given_seed(self):
        sc = make_scenario(**INTERIOR)
        a = optimize_allocation(sc)
        b = optimize_allocation(sc)
        assert a.optimal_pi == b.optimal_pi
        assert a.objective == b.objective
        assert a.history == b.history

    def test_deadline_flags_budget(self):
        sc = make_scenario(**INTERIOR)
        report = optimize_allocation(sc, deadline_seconds=0.0)
        assert report.status == "budget_exceeded"
        assert report.n_iterations < sc.optimizer_settings().max_iters

    def test_radius_mode_round_trip(self):
        sc = make_scenario(aversion={"mode": "radius", "value": 2.0}, grid={"dt": 1.0, "n_steps": 4})
        report = optimize_allocation(sc)
        assert report.worstcase.eta == 2.0
        assert report.worstcase.weighted_kl_worstcase == pytest.approx(2.0, abs=1e-6)
        assert not report.worstcase.saturated

    def test_retilt_mode_runs(self):
        sc = make_scenario(optimizer={"retilt_every": 500, "max_iters": 600})
        report = optimize_allocation(sc)
        assert report.optimal_pi == pytest.approx(1.0, abs=0.02)


class TestWorstCaseModel:
    def test_path_backend_for_short_horizons(self):
        model, info = build_worstcase_model(make_scenario(), 0.7)
        assert info.backend == "path"
        assert len(info.per_step_pmf) == 6

    def test_iid_backend_for_long_horizons(self):
        sc = make_scenario(grid={"dt": 0.5, "n_steps": 14},
                           optimizer={"worstcase_mc_paths": 1024})
        model, info = build_worstcase_model(sc, 0.7)
        assert info.backend == "iid"
        rows = np.array(info.per_step_pmf)
        assert rows.shape == (14, 4)
        assert np.allclose(rows, rows[0])

    def test_forced_path_backend_refuses_past_cap(self):
        sc = make_scenario(grid={"dt": 0.5, "n_steps": 14},
                           optimizer={"worstcase_backend": "path"})
        with pytest.raises(EnumerationLimitError):
            build_worstcase_model(sc, 0.7)

    def test_zero_tilt_gives_barycenter_marginals(self):
        sc = make_scenario(aversion={"mode": "tilt", "value": 0.0})
        _, info = build_worstcase_model(sc, 0.7)
        rows = np.array(info.per_step_pmf)
        expected = np.tile(np.array(info.barycenter_pmf), (rows.shape[0], 1))
        np.testing.assert_allclose(rows, expected, atol=1e-12)
        assert info.weighted_kl_worstcase == pytest.approx(info.weighted_kl_barycenter, abs=1e-9)

    def test_tilt_increases_divergence(self):
        _, info = build_worstcase_model(make_scenario(), 0.7)
        assert info.weighted_kl_worstcase >= info.weighted_kl_barycenter - 1e-12


class TestGridSweep:
    def test_constant_objective(self):
        sc = make_scenario(
            attrition={"r": 0.0, "b": 0.0},
            preferences={"theta": [0.7, 0.3, 0.0], "zeta": 0.05, "b_min": 60.0},
        )
        points = grid_sweep(sc, 11)
        values = {p.objective for p in points}
        assert len(values) == 1

    def test_output_length_and_grid(self):
        sc = make_scenario()
        points = grid_sweep(sc, 25)
        assert len(points) == 25
        assert points[0].pi == sc.optimizer_settings().pi_floor
        assert points[-1].pi == 1.0

    def test_enumeration_backend_has_zero_stderr(self):
        points = grid_sweep(make_scenario(), 5)
        assert all(p.stderr == 0.0 for p in points)

    def test_mc_backend_past_enumeration_cap(self):
        sc = make_scenario(grid={"dt": 0.25, "n_steps": 14},
                           optimizer={"worstcase_mc_paths": 1024})
        points = grid_sweep(sc, 5)
        assert all(p.stderr > 0.0 for p in points)

    def test_needs_two_points(self):
        with pytest.raises(ParameterError):
            grid_sweep(make_scenario(), 1)


class TestOptimizerSettings:
    def test_domain_checks(self):
        with pytest.raises(ParameterError):
            OptimizerSettings(pi_init=0.0)
        with pytest.raises(ParameterError):
            OptimizerSettings(pi_floor=1.0)
        with pytest.raises(ParameterError):
            OptimizerSettings(a0=-1.0)
        with pytest.raises(ParameterError):
            OptimizerSettings(worstcase_backend="magic")
        with pytest.raises(ParameterError):
            OptimizerSettings(worstcase_mc_paths=10)
