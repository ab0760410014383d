"""Discrete-time blue/red attrition dynamics.

One-step and multi-step propagation of force strengths under realized
Bernoulli shocks, plus the two deterministic baselines: the classic
aimed-fire square-law model and its power-law generalization.

All propagators clamp strengths at zero componentwise after each step;
with nonnegative rates a side that reaches zero stays there (its own
update only subtracts and it stops inflicting losses).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, ParameterError


@dataclass(frozen=True)
class ForceState:
    """Blue/red strength pair at one time step (force units, >= 0)."""

    B: float
    R: float

    def __post_init__(self):
        if self.B < 0 or self.R < 0:
            raise ParameterError(f"force strengths must be >= 0, got ({self.B}, {self.R})")

    def as_array(self) -> np.ndarray:
        return np.array([self.B, self.R], dtype=float)


@dataclass(frozen=True)
class AttritionParams:
    """Attrition rates per unit time: ``r`` red->blue, ``b`` blue->red."""

    r: float
    b: float

    def __post_init__(self):
        if self.r < 0 or self.b < 0:
            raise ParameterError(f"attrition rates must be >= 0, got r={self.r}, b={self.b}")


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid with step ``dt`` and ``n_steps`` steps."""

    dt: float
    n_steps: int

    def __post_init__(self):
        if self.dt <= 0:
            raise ParameterError(f"dt must be > 0, got {self.dt}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise ParameterError(f"n_steps must be an integer >= 1, got {self.n_steps}")

    @property
    def horizon(self) -> float:
        return self.n_steps * self.dt

    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt


@dataclass(frozen=True)
class ShockRealization:
    """One realized shock pair; each component is exactly 0 or 1."""

    z_B: int
    z_R: int

    def __post_init__(self):
        if self.z_B not in (0, 1) or self.z_R not in (0, 1):
            raise InputError(f"shock components must be 0 or 1, got ({self.z_B}, {self.z_R})")


@dataclass(frozen=True)
class BrackenParams:
    """Power-law attrition exponents plus base rates.

    The classic aimed-fire model is recovered for p_exp=1, q_exp=0.
    """

    attrition: AttritionParams
    p_exp: float = 1.0
    q_exp: float = 0.0

    def __post_init__(self):
        if self.p_exp <= 0:
            raise ParameterError(f"exponent p must be > 0, got {self.p_exp}")
        if self.q_exp < 0:
            raise ParameterError(f"exponent q must be >= 0, got {self.q_exp}")


@dataclass(frozen=True)
class Trajectory:
    """Propagated path: states, matching time stamps, allocation used."""

    states: tuple[ForceState, ...]
    times: tuple[float, ...]
    allocation: float

    def __post_init__(self):
        if len(self.states) != len(self.times):
            raise InputError("states and times must have equal length")

    def to_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(times, B, R) as float arrays."""
        t = np.array(self.times, dtype=float)
        b = np.array([s.B for s in self.states], dtype=float)
        r = np.array([s.R for s in self.states], dtype=float)
        return t, b, r

    @property
    def terminal(self) -> ForceState:
        return self.states[-1]


def step_stochastic(
    state: ForceState,
    params: AttritionParams,
    pi: float,
    z: ShockRealization,
    dt: float,
) -> ForceState:
    """Advance one step under a realized shock pair.

    Both components are updated from the same pre-step state:
    B' = max(0, B - r*z_R*R*dt) and R' = max(0, R - pi*b*z_B*B*dt).
    """
    if dt <= 0:
        raise ParameterError(f"dt must be > 0, got {dt}")
    if not 0.0 <= pi <= 1.0:
        raise ParameterError(f"allocation fraction must lie in [0, 1], got {pi}")
    b_new = state.B - (params.r * dt) * (z.z_R * state.R)
    r_new = state.R - (pi * params.b * dt) * (z.z_B * state.B)
    return ForceState(max(0.0, b_new), max(0.0, r_new))


def build_step_matrix(
    params: AttritionParams, pi: float, z: ShockRealization, dt: float
) -> np.ndarray:
    """One-step transition matrix M(z) = I + A(z).

    A(z) has zero diagonal and off-diagonals -r*z_R*dt (top right) and
    -pi*b*z_B*dt (bottom left); applying M(z) to the state vector equals
    :func:`step_stochastic` before clamping.
    """
    if dt <= 0:
        raise ParameterError(f"dt must be > 0, got {dt}")
    if not 0.0 <= pi <= 1.0:
        raise ParameterError(f"allocation fraction must lie in [0, 1], got {pi}")
    return np.array(
        [
            [1.0, -params.r * z.z_R * dt],
            [-pi * params.b * z.z_B * dt, 1.0],
        ]
    )


def propagate_path(
    x0: ForceState,
    params: AttritionParams,
    pi: float,
    shocks: list[ShockRealization] | tuple[ShockRealization, ...],
    grid: TimeGrid,
) -> Trajectory:
    """Propagate a full path under a known shock sequence.

    Iterates :func:`step_stochastic`; wherever clamping never activates
    this equals the ordered product of the step matrices applied to x0
    (matrices act on the left, in chronological order).
    """
    if len(shocks) != grid.n_steps:
        raise InputError(f"expected {grid.n_steps} shocks, got {len(shocks)}")
    states = [x0]
    for z in shocks:
        states.append(step_stochastic(states[-1], params, pi, z, grid.dt))
    return Trajectory(tuple(states), tuple(grid.times().tolist()), pi)


def classic_closed_form(
    x0: ForceState, params: AttritionParams, t: np.ndarray | float
) -> tuple[np.ndarray, np.ndarray]:
    """Exact solution of the classic aimed-fire ODE pair.

    B(t) = B0*cosh(sqrt(r*b)*t) - R0*sqrt(r/b)*sinh(sqrt(r*b)*t) and the
    symmetric expression for R(t). Requires strictly positive rates.
    Values are the raw analytic continuation (may go negative past
    annihilation); callers choose their own stopping rule.
    """
    if params.r <= 0 or params.b <= 0:
        raise ParameterError("closed form requires strictly positive rates")
    t = np.asarray(t, dtype=float)
    w = math.sqrt(params.r * params.b)
    ch, sh = np.cosh(w * t), np.sinh(w * t)
    b_t = x0.B * ch - x0.R * math.sqrt(params.r / params.b) * sh
    r_t = x0.R * ch - x0.B * math.sqrt(params.b / params.r) * sh
    return b_t, r_t


def simulate_classic_lanchester(
    x0: ForceState, params: AttritionParams, grid: TimeGrid
) -> Trajectory:
    """Forward-Euler trajectory of the classic aimed-fire model.

    Matches the discretization used by the stochastic propagator with all
    shocks on and pi = 1; :func:`classic_closed_form` serves as the
    validation oracle.
    """
    if params.r <= 0 or params.b <= 0:
        raise ParameterError("classic model requires strictly positive rates")
    states = [x0]
    b, r = x0.B, x0.R
    for _ in range(grid.n_steps):
        b_new = max(0.0, b - params.r * r * grid.dt)
        r_new = max(0.0, r - params.b * b * grid.dt)
        b, r = b_new, r_new
        states.append(ForceState(b, r))
    return Trajectory(tuple(states), tuple(grid.times().tolist()), 1.0)


def simulate_bracken(x0: ForceState, bracken: BrackenParams, grid: TimeGrid) -> Trajectory:
    """Forward-Euler trajectory of the power-law generalized model.

    dB = -r * R^p * B^q * dt and symmetrically for R. Zero is absorbing:
    0^q is taken as 1 for q = 0, but the opponent factor R^p (p > 0)
    already kills the decrement of an annihilated side.
    """
    params = bracken.attrition
    p, q = bracken.p_exp, bracken.q_exp
    states = [x0]
    b, r = x0.B, x0.R
    for _ in range(grid.n_steps):
        b_new = max(0.0, b - params.r * r**p * b**q * grid.dt)
        r_new = max(0.0, r - params.b * b**p * r**q * grid.dt)
        b, r = b_new, r_new
        states.append(ForceState(b, r))
    return Trajectory(tuple(states), tuple(grid.times().tolist()), 1.0)
