"""Batch path simulation and trajectory-fan summaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aggregate import PathSpaceModel
from .dynamics import simulate_classic_lanchester
from .errors import InputError
from .gaussianstep import gaussian_step_batch
from .objective import draw_shock_paths
from .shocks import StepShockModel

QUANTILE_LEVELS = (0.05, 0.25, 0.75, 0.95)


@dataclass(frozen=True)
class SimulationBatch:
    """Full simulated ensemble: (n_paths, n_steps + 1) strength arrays."""

    times: np.ndarray
    B: np.ndarray
    R: np.ndarray
    clamp_frequency: float


def simulate_exact_batch(scenario, pi: float, model, n_paths: int, rng) -> SimulationBatch:
    """Exact-dynamics ensemble under a per-step or path shock model."""
    grid = scenario.grid()
    x0, params = scenario.initial_state(), scenario.attrition()
    shocks = draw_shock_paths(model, n_paths, grid.n_steps, rng)
    B = np.empty((n_paths, grid.n_steps + 1))
    R = np.empty((n_paths, grid.n_steps + 1))
    B[:, 0] = x0.B
    R[:, 0] = x0.R
    rdt = params.r * grid.dt
    bdt = pi * params.b * grid.dt
    clamped = 0
    for k in range(grid.n_steps):
        zb = shocks[:, k, 0]
        zr = shocks[:, k, 1]
        nB = B[:, k] - rdt * (zr * R[:, k])
        nR = R[:, k] - bdt * (zb * B[:, k])
        clamped += int((nB < 0).sum() + (nR < 0).sum())
        B[:, k + 1] = np.maximum(nB, 0.0)
        R[:, k + 1] = np.maximum(nR, 0.0)
    return SimulationBatch(
        grid.times(), B, R, clamped / (2 * n_paths * grid.n_steps)
    )


def simulate_gaussian_ensemble(scenario, pi: float, model, n_paths: int, rng) -> SimulationBatch:
    """Gaussian-approximation ensemble.

    A path model is reduced to its per-step marginals: the scheme only
    consumes per-step first and second moments.
    """
    grid = scenario.grid()
    x0, params = scenario.initial_state(), scenario.attrition()
    if isinstance(model, PathSpaceModel):
        step_models = [StepShockModel(*row) for row in model.per_step_marginals()]
    else:
        step_models = [model] * grid.n_steps
    B = np.empty((n_paths, grid.n_steps + 1))
    R = np.empty((n_paths, grid.n_steps + 1))
    B[:, 0] = x0.B
    R[:, 0] = x0.R
    clamped = 0
    for k, step_model in enumerate(step_models):
        B[:, k + 1], R[:, k + 1] = gaussian_step_batch(
            B[:, k], R[:, k], params, pi, step_model, grid.dt, rng
        )
        clamped += int((B[:, k + 1] == 0.0).sum() + (R[:, k + 1] == 0.0).sum())
    return SimulationBatch(
        grid.times(), B, R, clamped / (2 * n_paths * grid.n_steps)
    )


def simulate_batch(scenario, pi: float, model, n_paths: int, rng) -> SimulationBatch:
    """Simulate with the scenario's configured simulator (exact or gaussian)."""
    if n_paths < 1:
        raise InputError(f"need at least one path, got {n_paths}")
    if scenario.simulator == "exact":
        return simulate_exact_batch(scenario, pi, model, n_paths, rng)
    return simulate_gaussian_ensemble(scenario, pi, model, n_paths, rng)


def fan_summary(batch: SimulationBatch) -> dict:
    """Mean path and quantile fan per side, JSON-ready."""

    def side(values: np.ndarray) -> dict:
        qs = np.quantile(values, QUANTILE_LEVELS, axis=0)
        return {
            "mean": values.mean(axis=0).tolist(),
            "q05": qs[0].tolist(),
            "q25": qs[1].tolist(),
            "q75": qs[2].tolist(),
            "q95": qs[3].tolist(),
        }

    return {
        "times": batch.times.tolist(),
        "B": side(batch.B),
        "R": side(batch.R),
    }


def classic_overlay(scenario) -> dict:
    """Deterministic classic trajectory on the scenario grid (for charts)."""
    traj = simulate_classic_lanchester(
        scenario.initial_state(), scenario.attrition(), scenario.grid()
    )
    _, b, r = traj.to_arrays()
    return {"B": b.tolist(), "R": r.tolist()}
