"""Joint Bernoulli shock laws built from marginals and a copula.

The per-step shock pair Z = (Z_B, Z_R) has Bernoulli marginals with
success probabilities p_B, p_R and a dependence structure given by a
bivariate copula C. The joint pmf over the four outcomes follows from
the copula evaluated at the single point (1 - p_B, 1 - p_R):

    q00 = C(1 - p_B, 1 - p_R)
    q10 = (1 - p_R) - q00
    q01 = (1 - p_B) - q00
    q11 = 1 - q00 - q10 - q01

Outcome order everywhere in the package is (z_B, z_R) in
``[(0, 0), (1, 0), (0, 1), (1, 1)]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .dynamics import ShockRealization
from .errors import InputError, ParameterError

#: Outcome order shared by pmf vectors, samplers and enumerators.
OUTCOMES = ((0, 0), (1, 0), (0, 1), (1, 1))

COPULA_KINDS = ("independence", "frechet_upper", "frechet_lower", "gaussian", "clayton")

# Gauss-Legendre rule for the correlation integral of the bivariate
# normal CDF; 96 points leave the quadrature error far below 1e-13 for
# |rho| <= 0.99.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(96)


def _bivariate_normal_cdf(x: float, y: float, rho: float) -> float:
    """P(X <= x, Y <= y) for standard normals with correlation rho.

    Uses the identity d Phi2 / d rho = bivariate density, integrating the
    density in rho from 0 (where Phi2 factorizes) to the target value.
    Absolute error is well below the 1e-10 needed here.
    """
    if rho == 0.0:
        return float(ndtr(x) * ndtr(y))
    t = 0.5 * rho * (_GL_NODES + 1.0)
    one_minus_t2 = 1.0 - t * t
    dens = np.exp(-(x * x - 2.0 * t * x * y + y * y) / (2.0 * one_minus_t2))
    dens /= 2.0 * np.pi * np.sqrt(one_minus_t2)
    integral = 0.5 * rho * float(np.dot(_GL_WEIGHTS, dens))
    return float(ndtr(x) * ndtr(y)) + integral


@dataclass(frozen=True)
class Marginals:
    """Marginal attrition-realization probabilities, both in [0, 1]."""

    p_B: float
    p_R: float

    def __post_init__(self):
        for name, p in (("p_B", self.p_B), ("p_R", self.p_R)):
            if not 0.0 <= p <= 1.0:
                raise ParameterError(f"{name} must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class Copula:
    """Bivariate copula, one of five supported families.

    Parameters
    ----------
    kind : str
        One of ``independence``, ``frechet_upper`` (comonotone),
        ``frechet_lower`` (countermonotone), ``gaussian``, ``clayton``.
    param : float, optional
        Correlation rho in (-1, 1) for ``gaussian``; alpha > 0 for
        ``clayton``; ignored otherwise.
    """

    kind: str
    param: float | None = None

    def __post_init__(self):
        if self.kind not in COPULA_KINDS:
            raise ParameterError(f"unknown copula kind {self.kind!r}, expected one of {COPULA_KINDS}")
        if self.kind == "gaussian":
            if self.param is None or not -1.0 < self.param < 1.0:
                raise ParameterError(f"gaussian copula needs rho in (-1, 1), got {self.param}")
        elif self.kind == "clayton":
            if self.param is None or self.param <= 0.0:
                raise ParameterError(f"clayton copula needs alpha > 0, got {self.param}")

    def cdf(self, u: float, v: float) -> float:
        """C(u, v) for u, v in [0, 1]."""
        if not (0.0 <= u <= 1.0 and 0.0 <= v <= 1.0):
            raise InputError(f"copula arguments must lie in [0, 1], got ({u}, {v})")
        # Uniform-margin boundary identities hold for every family.
        if u == 0.0 or v == 0.0:
            return 0.0
        if u == 1.0:
            return v
        if v == 1.0:
            return u
        if self.kind == "independence":
            return u * v
        if self.kind == "frechet_upper":
            return min(u, v)
        if self.kind == "frechet_lower":
            return max(u + v - 1.0, 0.0)
        if self.kind == "gaussian":
            return _bivariate_normal_cdf(float(ndtri(u)), float(ndtri(v)), self.param)
        # clayton
        a = self.param
        la, lb = -a * np.log(u), -a * np.log(v)
        if max(la, lb) > 700.0:  # u^-a would overflow; -1 is negligible there
            return float(np.exp(-np.logaddexp(la, lb) / a))
        return float((u**-a + v**-a - 1.0) ** (-1.0 / a))


@dataclass(frozen=True)
class StepShockModel:
    """Joint pmf of one step's shock pair over the four outcomes."""

    q00: float
    q10: float
    q01: float
    q11: float

    def __post_init__(self):
        probs = (self.q00, self.q10, self.q01, self.q11)
        for name, q in zip(("q00", "q10", "q01", "q11"), probs):
            if not -1e-12 <= q <= 1.0 + 1e-12:
                raise ParameterError(f"{name} must lie in [0, 1], got {q}")
        total = sum(probs)
        if abs(total - 1.0) > 1e-9:
            raise ParameterError(f"pmf must sum to 1, got {total}")

    def pmf(self) -> np.ndarray:
        """pmf vector in outcome order, tiny negative roundoff clamped."""
        return np.maximum(np.array([self.q00, self.q10, self.q01, self.q11]), 0.0)

    @property
    def p_B(self) -> float:
        return self.q10 + self.q11

    @property
    def p_R(self) -> float:
        return self.q01 + self.q11


def build_joint(marginals: Marginals, copula: Copula) -> StepShockModel:
    """Joint shock pmf from Bernoulli marginals coupled by a copula."""
    q00 = copula.cdf(1.0 - marginals.p_B, 1.0 - marginals.p_R)
    q10 = (1.0 - marginals.p_R) - q00
    q01 = (1.0 - marginals.p_B) - q00
    q11 = 1.0 - q00 - q10 - q01
    return StepShockModel(q00, q10, q01, q11)


def cross_moment(model: StepShockModel) -> float:
    """E[Z_B * Z_R]; for binary shocks this is just q11."""
    return model.q11


def sample_outcome_indices(model: StepShockModel, shape, rng: np.random.Generator) -> np.ndarray:
    """Outcome indices (0..3 in OUTCOMES order) drawn iid from the pmf."""
    cum = np.cumsum(model.pmf())
    u = rng.random(shape)
    return np.minimum(np.searchsorted(cum, u, side="right"), 3).astype(np.uint8)


def indices_to_shocks(idx: np.ndarray) -> np.ndarray:
    """Map outcome indices to a uint8 shock array with trailing dim (z_B, z_R)."""
    table = np.array(OUTCOMES, dtype=np.uint8)
    return table[idx]


def sample_shock_array(
    model: StepShockModel, n_paths: int, n_steps: int, rng: np.random.Generator
) -> np.ndarray:
    """(n_paths, n_steps, 2) uint8 array of iid shock realizations."""
    return indices_to_shocks(sample_outcome_indices(model, (n_paths, n_steps), rng))


def sample_shock(model: StepShockModel, rng: np.random.Generator) -> ShockRealization:
    """Draw a single shock pair; identical stream state gives an identical draw."""
    idx = int(sample_outcome_indices(model, (), rng))
    z_b, z_r = OUTCOMES[idx]
    return ShockRealization(z_b, z_r)
