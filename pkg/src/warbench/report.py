"""Run-result assembly shared by the CLI and the HTTP API.

Both surfaces call these functions with identical arguments, so a given
config + seed produces identical numeric results everywhere. Results are
plain JSON-ready dicts; every float round-trips exactly through
``json.dumps``/``loads``.
"""

from __future__ import annotations

from . import rng as rngmod
from .dynamics import simulate_bracken, simulate_classic_lanchester, classic_closed_form
from .optimizer import (
    OptimizationReport,
    WorstCaseInfo,
    build_worstcase_model,
    grid_sweep,
    optimize_allocation,
)
from .simulate import classic_overlay, fan_summary, simulate_batch

DEFAULT_SIM_PATHS = 1000


def worstcase_dict(info: WorstCaseInfo) -> dict:
    return {
        "backend": info.backend,
        "kappa": info.kappa,
        "eta": info.eta,
        "saturated": info.saturated,
        "barycenter": list(info.barycenter_pmf),
        "per_step_pmf": [list(row) for row in info.per_step_pmf],
        "weighted_kl": {
            "barycenter": info.weighted_kl_barycenter,
            "worstcase": info.weighted_kl_worstcase,
        },
        "search_converged": info.search_converged,
    }


def run_simulate(scenario, n_paths: int = DEFAULT_SIM_PATHS, pi: float | None = None):
    """Trajectory fan under the worst-case model at allocation ``pi``.

    Returns (result dict, SimulationBatch); the batch carries the raw
    paths for CSV emission.
    """
    if pi is None:
        pi = scenario.optimizer_settings().pi_init
    model, info = build_worstcase_model(scenario, pi)
    batch = simulate_batch(
        scenario, pi, model, n_paths, rngmod.substream(scenario.seed, rngmod.SIMULATE, 0)
    )
    result = {
        "kind": "simulate",
        "config_hash": scenario.config_hash(),
        "seed": scenario.seed,
        "pi": pi,
        "simulator": scenario.simulator,
        "paths": n_paths,
        "fan": fan_summary(batch),
        "classic_overlay": classic_overlay(scenario),
        "worstcase": worstcase_dict(info),
        "diagnostics": {"clamp_frequency": batch.clamp_frequency},
    }
    return result, batch


def run_classic(scenario) -> dict:
    """Deterministic baselines on the scenario grid: classic and power-law."""
    x0, params, grid = scenario.initial_state(), scenario.attrition(), scenario.grid()
    t, b_cl, r_cl = simulate_classic_lanchester(x0, params, grid).to_arrays()
    _, b_br, r_br = simulate_bracken(x0, scenario.bracken(), grid).to_arrays()
    b_cf, r_cf = classic_closed_form(x0, params, t)
    bracken = scenario.to_dict()["bracken"]
    return {
        "kind": "classic",
        "config_hash": scenario.config_hash(),
        "times": t.tolist(),
        "lanchester": {"B": b_cl.tolist(), "R": r_cl.tolist()},
        "bracken": {"B": b_br.tolist(), "R": r_br.tolist(), **bracken},
        "closed_form": {"B": b_cf.tolist(), "R": r_cf.tolist()},
    }


def run_aggregate(scenario, pi: float | None = None) -> dict:
    """Barycenter and tilted worst-case model with divergence diagnostics."""
    if pi is None:
        pi = scenario.optimizer_settings().pi_init
    _, info = build_worstcase_model(scenario, pi)
    return {
        "kind": "aggregate",
        "config_hash": scenario.config_hash(),
        "pi": pi,
        "barycenter": list(info.barycenter_pmf),
        "worstcase": worstcase_dict(info),
    }


def run_optimize(
    scenario,
    n_paths: int = DEFAULT_SIM_PATHS,
    deadline_seconds: float | None = None,
) -> dict:
    """Full allocation optimization plus a trajectory fan at the optimum."""
    report = optimize_allocation(scenario, deadline_seconds=deadline_seconds)
    model, _ = build_worstcase_model(scenario, scenario.optimizer_settings().pi_init)
    batch = simulate_batch(
        scenario,
        report.optimal_pi,
        model,
        n_paths,
        rngmod.substream(scenario.seed, rngmod.SIMULATE, 1),
    )
    return {
        "kind": "optimize",
        "config_hash": scenario.config_hash(),
        "seed": scenario.seed,
        "optimal_pi": report.optimal_pi,
        "objective": {"value": report.objective, "stderr": report.objective_stderr},
        "iterations": report.n_iterations,
        "converged": report.converged,
        "status": report.status,
        "history": list(report.history),
        "worstcase": worstcase_dict(report.worstcase),
        "fan": fan_summary(batch),
        "diagnostics": {
            "clamp_frequency": report.clamp_frequency,
            "fan_clamp_frequency": batch.clamp_frequency,
            "paths": n_paths,
        },
    }


def run_sweep(scenario, grid_points: int = 101) -> dict:
    """Objective vs allocation on an even grid under the worst-case model."""
    points = grid_sweep(scenario, grid_points)
    best = max(points, key=lambda p: p.objective)
    return {
        "kind": "sweep",
        "config_hash": scenario.config_hash(),
        "argmax_pi": best.pi,
        "points": [
            {"pi": p.pi, "objective": p.objective, "stderr": p.stderr} for p in points
        ],
    }
