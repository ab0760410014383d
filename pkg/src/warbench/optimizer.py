"""Worst-case allocation optimization.

Three stages: build the worst-case shock model from the prior set and
the aversion spec, fix the objective under that model, then run
projected stochastic gradient ascent on the allocation fraction with a
decaying learning rate. The worst-case model is built once at the
initial allocation (the tilt depends on the allocation through the
payoff); `retilt_every` optionally rebuilds it during the ascent.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import rng as rngmod
from .aggregate import (
    PathSpaceModel,
    PathTilter,
    PriorSet,
    barycenter,
    calibrate_aversion,
    iid_worstcase_model,
    weighted_kl,
)
from .errors import ParameterError
from .objective import (
    batch_path_grads,
    draw_shock_paths,
    make_path_payoff,
    objective_enumerate,
    objective_mc,
    reserve_term_deriv,
)
from .paths import MAX_ENUM_STEPS

if TYPE_CHECKING:  # pragma: no cover
    from .config import ScenarioConfig

#: Largest horizon the auto backend still enumerates (4^10 ~= 1e6 atoms).
AUTO_PATH_MAX_STEPS = 10


@dataclass(frozen=True)
class OptimizerSettings:
    """Knobs of the stochastic gradient ascent and worst-case construction."""

    pi_init: float = 0.5
    pi_floor: float = 0.0
    a0: float = 0.1
    tau: float = 50.0
    mc_paths: int = 256
    h: float = 1e-20
    tol: float = 1e-4
    window: int = 20
    max_iters: int = 2000
    retilt_every: int = 0
    worstcase_backend: str = "auto"
    worstcase_mc_paths: int = 4096

    def __post_init__(self):
        if not 0.0 < self.pi_init <= 1.0:
            raise ParameterError(f"pi_init must lie in (0, 1], got {self.pi_init}")
        if not 0.0 <= self.pi_floor < 1.0:
            raise ParameterError(f"pi_floor must lie in [0, 1), got {self.pi_floor}")
        for name in ("a0", "tau", "h", "tol"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("mc_paths", "window", "max_iters"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.retilt_every < 0:
            raise ParameterError(f"retilt_every must be >= 0, got {self.retilt_every}")
        if self.worstcase_backend not in ("auto", "path", "iid"):
            raise ParameterError(f"unknown worst-case backend {self.worstcase_backend!r}")
        if self.worstcase_mc_paths < 1000:
            raise ParameterError(
                f"worstcase_mc_paths must be >= 1000, got {self.worstcase_mc_paths}"
            )


@dataclass(frozen=True)
class WorstCaseInfo:
    """How the worst-case model was built and where it landed."""

    backend: str
    kappa: float
    eta: float | None
    saturated: bool
    barycenter_pmf: tuple[float, ...]
    per_step_pmf: tuple[tuple[float, ...], ...]
    weighted_kl_barycenter: float
    weighted_kl_worstcase: float
    search_converged: bool


@dataclass(frozen=True)
class OptimizationReport:
    """Result of the allocation search."""

    optimal_pi: float
    objective: float
    objective_stderr: float
    n_iterations: int
    converged: bool
    status: str
    history: tuple[float, ...]
    worstcase: WorstCaseInfo
    clamp_frequency: float


@dataclass(frozen=True)
class SweepPoint:
    pi: float
    objective: float
    stderr: float


def _resolve_backend(backend: str, n_steps: int) -> str:
    if backend == "auto":
        return "path" if n_steps <= AUTO_PATH_MAX_STEPS else "iid"
    return backend


def build_worstcase_model(
    scenario: "ScenarioConfig", pi: float
) -> tuple[object, WorstCaseInfo]:
    """Worst-case shock model for the scenario's aversion at allocation pi.

    Returns either an explicit path model (enumeration backend) or a
    per-step pmf (iid search backend), together with diagnostics.
    """
    grid = scenario.grid()
    priors = scenario.prior_set()
    settings = scenario.optimizer_settings()
    aversion = scenario.aversion()
    payoff = make_path_payoff(scenario, pi)
    backend = _resolve_backend(settings.worstcase_backend, grid.n_steps)

    bary = barycenter(priors)
    kl_bary = grid.n_steps * weighted_kl(bary.pmf(), priors)

    eta = None
    saturated = False
    if aversion.mode == "radius":
        # Radius calibration needs the exact path tilt, whatever backend
        # later consumes the resulting kappa.
        calib = calibrate_aversion(priors, aversion.value, payoff, grid)
        kappa, eta, saturated = calib.kappa, aversion.value, calib.saturated
    else:
        kappa = aversion.value

    if backend == "path":
        tilter = PathTilter(priors, payoff, grid)
        model = tilter.tilt(kappa)
        per_step = tuple(tuple(row) for row in model.per_step_marginals())
        kl_wc = model.weighted_kl_to(priors)
        info = WorstCaseInfo(
            backend, kappa, eta, saturated, tuple(bary.pmf()), per_step,
            kl_bary, kl_wc, True,
        )
        return model, info
    result = iid_worstcase_model(
        priors, kappa, payoff, grid,
        mc_paths=settings.worstcase_mc_paths, seed=scenario.seed,
    )
    pmf = tuple(result.model.pmf())
    kl_wc = grid.n_steps * weighted_kl(result.model.pmf(), priors)
    info = WorstCaseInfo(
        backend, kappa, eta, saturated, tuple(bary.pmf()),
        tuple(pmf for _ in range(grid.n_steps)), kl_bary, kl_wc,
        result.converged,
    )
    return result.model, info


def _estimate_objective(pi, model, scenario, settings) -> tuple[float, float]:
    if scenario.grid().n_steps <= MAX_ENUM_STEPS:
        return objective_enumerate(pi, model, scenario), 0.0
    rng = rngmod.substream(scenario.seed, rngmod.OBJECTIVE, 0)
    return objective_mc(pi, model, scenario, max(8192, 4 * settings.mc_paths), rng)


def optimize_allocation(
    scenario: "ScenarioConfig", deadline_seconds: float | None = None
) -> OptimizationReport:
    """Projected stochastic gradient ascent on the allocation fraction.

    Iterates pi <- clip(pi + a_l * g, [pi_floor, 1]) with learning rate
    a_l = a0 / (1 + l / tau) and g the Monte Carlo gradient under the
    fixed worst-case model. Stops when the trailing-window mean absolute
    iterate change drops below tol, the iteration cap is reached, or the
    optional compute deadline expires.
    """
    settings = scenario.optimizer_settings()
    grid = scenario.grid()
    started = time.monotonic()

    model, info = build_worstcase_model(scenario, settings.pi_init)
    reserve_deriv = reserve_term_deriv(scenario)

    pi = settings.pi_init
    history = [pi]
    changes: list[float] = []
    clamp_hits = 0
    clamp_total = 0
    status = "max_iterations"
    converged = False
    n_iter = 0

    for ell in range(1, settings.max_iters + 1):
        n_iter = ell
        if settings.retilt_every and ell % settings.retilt_every == 0:
            model, info = build_worstcase_model(scenario, pi)
        rng = rngmod.substream(scenario.seed, rngmod.OPTIMIZER, ell)
        shocks = draw_shock_paths(model, settings.mc_paths, grid.n_steps, rng)
        grads, flags = batch_path_grads(pi, shocks, scenario, settings.h)
        clamp_hits += int(flags.sum())
        clamp_total += len(flags)
        g = float(grads.mean()) + reserve_deriv
        alpha = settings.a0 / (1.0 + ell / settings.tau)
        new_pi = min(1.0, max(settings.pi_floor, pi + alpha * g))
        changes.append(abs(new_pi - pi))
        pi = new_pi
        history.append(pi)
        if len(changes) >= settings.window:
            if float(np.mean(changes[-settings.window:])) < settings.tol:
                status = "converged"
                converged = True
                break
        if deadline_seconds is not None and time.monotonic() - started > deadline_seconds:
            status = "budget_exceeded"
            break

    # Polyak tail average: the raw last iterate dithers at the Monte
    # Carlo noise level, the trailing mean does not.
    tail = max(settings.window, len(history) // 4)
    pi = min(1.0, max(settings.pi_floor, float(np.mean(history[-tail:]))))
    objective, stderr = _estimate_objective(pi, model, scenario, settings)
    return OptimizationReport(
        optimal_pi=pi,
        objective=objective,
        objective_stderr=stderr,
        n_iterations=n_iter,
        converged=converged,
        status=status,
        history=tuple(history),
        worstcase=info,
        clamp_frequency=clamp_hits / clamp_total if clamp_total else 0.0,
    )


def grid_sweep(
    scenario: "ScenarioConfig", grid_points: int, model=None
) -> list[SweepPoint]:
    """Objective on an even allocation grid under the fixed worst-case model.

    Uses the exact enumeration backend whenever the horizon allows it,
    otherwise seeded Monte Carlo; the model defaults to the same one the
    optimizer would build (at pi_init).
    """
    if grid_points < 2:
        raise ParameterError(f"grid_points must be >= 2, got {grid_points}")
    settings = scenario.optimizer_settings()
    if model is None:
        model, _ = build_worstcase_model(scenario, settings.pi_init)
    pis = np.linspace(settings.pi_floor, 1.0, grid_points)
    enumerable = scenario.grid().n_steps <= MAX_ENUM_STEPS
    points = []
    for i, pi in enumerate(pis):
        if enumerable:
            value, se = objective_enumerate(float(pi), model, scenario), 0.0
        else:
            rng = rngmod.substream(scenario.seed, rngmod.OBJECTIVE, 1000 + i)
            value, se = objective_mc(
                float(pi), model, scenario, max(4096, settings.mc_paths), rng
            )
        points.append(SweepPoint(float(pi), value, se))
    return points
