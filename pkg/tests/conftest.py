import numpy as np
import pytest

from warbench.config import scenario_from_dict


def make_scenario(**overrides):
    """Scenario from partial overrides on the reference defaults."""
    return scenario_from_dict(overrides)


@pytest.fixture
def reference():
    return make_scenario()


@pytest.fixture
def small_grid_scenario():
    """Reference scenario shortened to a 4-step horizon (fast enumeration)."""
    return make_scenario(grid={"dt": 1.0, "n_steps": 4})


def random_simplex(rng: np.random.Generator, size: int, dim: int = 4) -> np.ndarray:
    return rng.dirichlet(np.ones(dim), size=size)
