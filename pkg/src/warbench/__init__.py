"""Robust force-allocation workbench for stochastic attrition combat dynamics.

Aggregates expert shock models into a worst-case evaluation measure,
simulates the resulting combat dynamics, and finds the allocation
fraction maximizing a multi-criteria payoff by stochastic gradient
ascent.
"""

__version__ = "0.1.0"

from .aggregate import (
    AversionSpec,
    CalibrationResult,
    IIDWorstCaseResult,
    PathSpaceModel,
    PriorSet,
    barycenter,
    calibrate_aversion,
    iid_worstcase_model,
    kl_divergence,
    tilted_path_model,
    weighted_kl,
)
from .config import ScenarioConfig, parse_config, reference_scenario, scenario_from_dict
from .dynamics import (
    AttritionParams,
    BrackenParams,
    ForceState,
    ShockRealization,
    TimeGrid,
    Trajectory,
    build_step_matrix,
    classic_closed_form,
    propagate_path,
    simulate_bracken,
    simulate_classic_lanchester,
    step_stochastic,
)
from .errors import (
    ConfigError,
    EnumerationLimitError,
    InputError,
    ParameterError,
    WarbenchError,
)
from .gaussianstep import (
    GaussianStepParams,
    conditional_moments,
    simulate_gaussian_batch,
    simulate_gaussian_path,
)
from .objective import (
    DecisionPreferences,
    complex_step_grad,
    objective_enumerate,
    objective_mc,
    profit_phi,
    profit_phi_deriv,
    reserve_value,
    stochastic_grad,
    terminal_functionals,
)
from .optimizer import (
    OptimizationReport,
    OptimizerSettings,
    build_worstcase_model,
    grid_sweep,
    optimize_allocation,
)
from .shocks import (
    Copula,
    Marginals,
    StepShockModel,
    build_joint,
    cross_moment,
    sample_shock,
)
