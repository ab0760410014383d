"""Two-moment Gaussian approximation of one-step combat transitions.

The conditional distribution of the next state given the current one is
approximated by a bivariate normal whose mean and covariance match the
exact four-outcome transition (the approximation error is distributional
shape only, never the first two moments).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import AttritionParams, ForceState, TimeGrid, Trajectory
from .errors import ParameterError
from .shocks import StepShockModel, cross_moment


@dataclass(frozen=True)
class GaussianStepParams:
    """Mean vector and central second-moment matrix of one transition."""

    mu: np.ndarray
    S: np.ndarray

    def __post_init__(self):
        if self.mu.shape != (2,) or self.S.shape != (2, 2):
            raise ParameterError("mu must be a 2-vector and S a 2x2 matrix")


def _moments(b, r, params, pi, e_b, e_r, e_br, dt):
    m_b = b - params.r * r * e_r * dt
    m_r = r - pi * params.b * b * e_b * dt
    var_b = params.r**2 * r**2 * (e_r - e_r**2) * dt**2
    var_r = pi**2 * params.b**2 * b**2 * (e_b - e_b**2) * dt**2
    cov = pi * params.b * params.r * b * r * (e_br - e_b * e_r) * dt**2
    return m_b, m_r, var_b, var_r, cov


def conditional_moments(
    state: ForceState,
    params: AttritionParams,
    pi: float,
    shock_model: StepShockModel,
    dt: float,
) -> GaussianStepParams:
    """Exact conditional mean and covariance of the one-step transition.

    With e_B = p_B, e_R = p_R and e_BR the cross moment of the shock law:

        m_B  = B - r*R*e_R*dt          Var_B = r^2 R^2 (e_R - e_R^2) dt^2
        m_R  = R - pi*b*B*e_B*dt       Var_R = pi^2 b^2 B^2 (e_B - e_B^2) dt^2
        Cov  = pi*b*r*B*R*(e_BR - e_B*e_R) dt^2
    """
    if dt <= 0:
        raise ParameterError(f"dt must be > 0, got {dt}")
    if not 0.0 <= pi <= 1.0:
        raise ParameterError(f"allocation fraction must lie in [0, 1], got {pi}")
    m_b, m_r, var_b, var_r, cov = _moments(
        state.B, state.R, params, pi, shock_model.p_B, shock_model.p_R,
        cross_moment(shock_model), dt,
    )
    return GaussianStepParams(
        np.array([m_b, m_r]), np.array([[var_b, cov], [cov, var_r]])
    )


def regularize_psd(S: np.ndarray) -> np.ndarray:
    """Shift a 2x2 symmetric matrix onto the PSD cone if rounding pushed it off."""
    tr = S[0, 0] + S[1, 1]
    det = S[0, 0] * S[1, 1] - S[0, 1] * S[1, 0]
    lam_min = 0.5 * (tr - np.sqrt(max(tr * tr - 4.0 * det, 0.0)))
    if lam_min < 0.0:
        S = S + (-lam_min + 1e-12) * np.eye(2)
    return S


def _batch_cholesky(var_b, var_r, cov):
    """Componentwise Cholesky factors of 2x2 covariance batches.

    Negative eigenvalues from rounding are lifted by the regularization
    shift; zero-variance components short-circuit to zero factors.
    """
    tr = var_b + var_r
    det = var_b * var_r - cov * cov
    lam_min = 0.5 * (tr - np.sqrt(np.maximum(tr * tr - 4.0 * det, 0.0)))
    shift = np.where(lam_min < 0.0, -lam_min + 1e-12, 0.0)
    var_b = var_b + shift
    var_r = var_r + shift
    l11 = np.sqrt(var_b)
    safe = l11 > 0.0
    l21 = np.where(safe, cov / np.where(safe, l11, 1.0), 0.0)
    l22 = np.sqrt(np.maximum(var_r - l21 * l21, 0.0))
    return l11, l21, l22


def gaussian_step_batch(
    b: np.ndarray,
    r: np.ndarray,
    params: AttritionParams,
    pi: float,
    shock_model: StepShockModel,
    dt: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Advance a batch of states one step by a moment-matched normal draw.

    Draws via the analytic 2x2 Cholesky factor of each path's covariance
    and clamps at zero; zero-variance components collapse to the mean.
    """
    m_b, m_r, var_b, var_r, cov = _moments(
        b, r, params, pi, shock_model.p_B, shock_model.p_R,
        cross_moment(shock_model), dt,
    )
    l11, l21, l22 = _batch_cholesky(
        np.asarray(var_b, dtype=float), np.asarray(var_r, dtype=float),
        np.asarray(cov, dtype=float),
    )
    g1 = rng.standard_normal(len(b))
    g2 = rng.standard_normal(len(b))
    b_next = np.maximum(m_b + l11 * g1, 0.0)
    r_next = np.maximum(m_r + l21 * g1 + l22 * g2, 0.0)
    return b_next, r_next


def simulate_gaussian_batch(
    x0: ForceState,
    params: AttritionParams,
    pi: float,
    shock_model: StepShockModel,
    grid: TimeGrid,
    n_paths: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Simulate n_paths trajectories under the moment-matched Gaussian scheme.

    Per step: conditional moments from each path's current state, one
    bivariate normal draw, clamp at zero. Returns (B, R) arrays of shape
    (n_paths, n_steps + 1).
    """
    B = np.empty((n_paths, grid.n_steps + 1))
    R = np.empty((n_paths, grid.n_steps + 1))
    B[:, 0] = x0.B
    R[:, 0] = x0.R
    for k in range(grid.n_steps):
        B[:, k + 1], R[:, k + 1] = gaussian_step_batch(
            B[:, k], R[:, k], params, pi, shock_model, grid.dt, rng
        )
    return B, R


def simulate_gaussian_path(
    x0: ForceState,
    params: AttritionParams,
    pi: float,
    shock_model: StepShockModel,
    grid: TimeGrid,
    rng: np.random.Generator,
) -> Trajectory:
    """Single-path convenience wrapper around :func:`simulate_gaussian_batch`."""
    B, R = simulate_gaussian_batch(x0, params, pi, shock_model, grid, 1, rng)
    states = tuple(ForceState(float(b), float(r)) for b, r in zip(B[0], R[0]))
    return Trajectory(states, tuple(grid.times().tolist()), pi)
