"""Multi-criteria payoff and its estimators.

The payoff blends three criteria with simplex weights theta: signed
quadratic profit of the terminal strength difference, the same profit of
the margin above a strength floor, and the exponentially weighted value
of the reserve held out of the battle.

Gradients with respect to the allocation fraction use complex-step
differentiation of the terminal-state functionals chained with the
analytic derivative of the profit function. The complex-step pass runs
on the unclamped dynamics: max(0, .) breaks analyticity, so paths where
clamping binds are flagged and contribute the unclamped surrogate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import _kernels as kernels
from .aggregate import PathSpaceModel
from .dynamics import ForceState, ShockRealization
from .errors import InputError, ParameterError
from .paths import decode_digits, digits_to_shocks, iter_chunks, n_paths, path_log_probs
from .shocks import StepShockModel, sample_shock_array

if TYPE_CHECKING:  # pragma: no cover
    from .config import ScenarioConfig


@dataclass(frozen=True)
class DecisionPreferences:
    """Criteria weights on the simplex, reserve sensitivity, strength floor."""

    theta: tuple[float, float, float]
    zeta: float
    b_min: float

    def __post_init__(self):
        th = np.array(self.theta, dtype=float)
        if th.shape != (3,):
            raise ParameterError("theta must have exactly three components")
        if (th < 0).any():
            raise ParameterError(f"theta components must be >= 0, got {self.theta}")
        if abs(th.sum() - 1.0) > 1e-9:
            raise ParameterError(f"theta must sum to 1, got sum {th.sum()!r}")
        if self.zeta <= 0:
            raise ParameterError(f"zeta must be > 0, got {self.zeta}")


def profit_phi(u):
    """Signed quadratic profit: u^2 for u >= 0, -u^2 otherwise."""
    u = np.asarray(u, dtype=float)
    out = np.where(u >= 0.0, u * u, -(u * u))
    return float(out) if out.ndim == 0 else out


def profit_phi_deriv(u):
    """Derivative of the signed quadratic profit: 2|u|."""
    u = np.asarray(u, dtype=float)
    out = 2.0 * np.abs(u)
    return float(out) if out.ndim == 0 else out


def reserve_value(u: float, zeta: float, horizon: float) -> float:
    """Value of reserve strength u held out until the horizon: e^(zeta*T) * u."""
    if u < 0:
        raise ParameterError(f"reserve strength must be >= 0, got {u}")
    return math.exp(zeta * horizon) * u


def terminal_functionals(x_t: ForceState, b_min: float) -> tuple[float, float]:
    """(psi1, psi2) = (B_T - R_T, B_T - B_min)."""
    return x_t.B - x_t.R, x_t.B - b_min


def _as_shock_array(shocks) -> np.ndarray:
    """Normalize a shock path to a uint8 (n_steps, 2) array."""
    if len(shocks) and isinstance(shocks[0], ShockRealization):
        arr = np.array([(z.z_B, z.z_R) for z in shocks], dtype=np.uint8)
    else:
        arr = np.asarray(shocks, dtype=np.uint8)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError(f"expected shock path of shape (n_steps, 2), got {arr.shape}")
    return arr


def path_payoff_values(pi: float, shocks: np.ndarray, scenario: "ScenarioConfig") -> np.ndarray:
    """Stochastic payoff term per path: theta1*phi(psi1) + theta2*phi(psi2).

    shocks is a uint8 array (n_paths, n_steps, 2); terminal states come
    from the clamped exact dynamics.
    """
    x0, params = scenario.initial_state(), scenario.attrition()
    prefs = scenario.preferences()
    b_t, r_t = kernels.propagate_terminal(
        x0.B, x0.R, params.r, params.b, pi, scenario.grid().dt, shocks
    )
    return prefs.theta[0] * profit_phi(b_t - r_t) + prefs.theta[1] * profit_phi(
        b_t - prefs.b_min
    )


def make_path_payoff(scenario: "ScenarioConfig", pi: float):
    """Vectorized path-payoff closure used by the aggregation machinery."""

    def payoff(shocks: np.ndarray) -> np.ndarray:
        return path_payoff_values(pi, shocks, scenario)

    return payoff


def reserve_term(pi: float, scenario: "ScenarioConfig") -> float:
    """Deterministic reserve contribution theta3 * e^(zeta*T) * (1-pi) * B0."""
    prefs = scenario.preferences()
    grid = scenario.grid()
    return prefs.theta[2] * reserve_value(
        (1.0 - pi) * scenario.initial_state().B, prefs.zeta, grid.horizon
    )


def reserve_term_deriv(scenario: "ScenarioConfig") -> float:
    """d/dpi of the reserve contribution (constant in pi)."""
    prefs = scenario.preferences()
    return -prefs.theta[2] * scenario.initial_state().B * math.exp(
        prefs.zeta * scenario.grid().horizon
    )


def draw_shock_paths(model, n_draws: int, n_steps: int, rng: np.random.Generator) -> np.ndarray:
    """Sample (n_draws, n_steps, 2) shock paths from a step or path model."""
    if isinstance(model, PathSpaceModel):
        if model.n_steps != n_steps:
            raise InputError(
                f"path model has {model.n_steps} steps, scenario has {n_steps}"
            )
        return digits_to_shocks(model.sample_digits(n_draws, rng))
    return sample_shock_array(model, n_draws, n_steps, rng)


def objective_mc(
    pi: float,
    model,
    scenario: "ScenarioConfig",
    n_paths_mc: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Monte Carlo estimate of the objective and its standard error.

    ``model`` is a per-step pmf or an explicit path model; the reserve
    term is deterministic and adds no variance.
    """
    if n_paths_mc < 1:
        raise ParameterError(f"need at least one path, got {n_paths_mc}")
    shocks = draw_shock_paths(model, n_paths_mc, scenario.grid().n_steps, rng)
    values = path_payoff_values(pi, shocks, scenario)
    se = float(values.std(ddof=1) / math.sqrt(n_paths_mc)) if n_paths_mc > 1 else 0.0
    return float(values.mean()) + reserve_term(pi, scenario), se


def objective_enumerate(pi: float, model, scenario: "ScenarioConfig") -> float:
    """Exact objective by summation over all 4^N shock paths."""
    grid = scenario.grid()
    if isinstance(model, PathSpaceModel):
        if model.n_steps != grid.n_steps:
            raise InputError(
                f"path model has {model.n_steps} steps, scenario has {grid.n_steps}"
            )
        total = model.expectation_of(make_path_payoff(scenario, pi))
        return total + reserve_term(pi, scenario)
    pmf = model.pmf()
    log_pmf = np.full(4, -np.inf)
    with np.errstate(divide="ignore"):
        log_pmf[pmf > 0] = np.log(pmf[pmf > 0])
    total = 0.0
    for start, stop in iter_chunks(n_paths(grid.n_steps)):
        digits = decode_digits(np.arange(start, stop), grid.n_steps)
        probs = np.exp(path_log_probs(digits, log_pmf))
        total += float(np.dot(probs, path_payoff_values(pi, digits_to_shocks(digits), scenario)))
    return total + reserve_term(pi, scenario)


def batch_path_grads(
    pi: float, shocks: np.ndarray, scenario: "ScenarioConfig", h: float = 1e-20
) -> tuple[np.ndarray, np.ndarray]:
    """Per-path gradient of the stochastic payoff term, plus clamp flags.

    Complex-step derivatives of psi1, psi2 on the unclamped dynamics,
    chained with phi'(u) = 2|u|. The bool flags mark paths whose real
    part went negative somewhere (clamping would bind there, so their
    contribution is the unclamped surrogate).
    """
    if h <= 0:
        raise ParameterError(f"complex-step size must be > 0, got {h}")
    x0, params = scenario.initial_state(), scenario.attrition()
    prefs = scenario.preferences()
    b_c, r_c, flags = kernels.propagate_terminal_cstep(
        x0.B, x0.R, params.r, params.b, pi, h, scenario.grid().dt, shocks
    )
    psi1 = b_c.real - r_c.real
    psi2 = b_c.real - prefs.b_min
    dpsi1 = (b_c.imag - r_c.imag) / h
    dpsi2 = b_c.imag / h
    grads = prefs.theta[0] * profit_phi_deriv(psi1) * dpsi1 + prefs.theta[
        1
    ] * profit_phi_deriv(psi2) * dpsi2
    return grads, flags


def complex_step_grad(
    pi: float, shocks, scenario: "ScenarioConfig", h: float = 1e-20
) -> float:
    """Gradient of the stochastic payoff term along one fixed shock path."""
    arr = _as_shock_array(shocks)[None, :, :]
    grads, _ = batch_path_grads(pi, arr, scenario, h)
    return float(grads[0])


def stochastic_grad(
    pi: float,
    model,
    scenario: "ScenarioConfig",
    n_paths_mc: int,
    rng: np.random.Generator,
    h: float = 1e-20,
) -> float:
    """MC gradient estimate: mean path gradient plus the reserve derivative."""
    if n_paths_mc < 1:
        raise ParameterError(f"need at least one path, got {n_paths_mc}")
    shocks = draw_shock_paths(model, n_paths_mc, scenario.grid().n_steps, rng)
    grads, _ = batch_path_grads(pi, shocks, scenario, h)
    return float(grads.mean()) + reserve_term_deriv(scenario)
