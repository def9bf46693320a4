"""Optimal sequential signal precisions for tracking a Gaussian-process state.

An agent tracks a latent Gaussian state over a fixed schedule of times. At
each time it may buy a noisy observation whose precision it chooses, paying
a constant price per unit of precision; the per-step loss is posterior
variance plus spending. This package provides the exact posterior algebra,
the closed-form one-step-optimal and discount-aware precision rules, exact
path simulation, brute-force verifiers for every closed form, and the
``gp-acquire`` command-line tool.
"""

from .errors import ConfigError, NumericalError, SingularSystemError
from .oracle import ScalarMinResult, ValueIterationResult, minimize_psi, value_iterate
from .posterior import (
    PosteriorSummary,
    ResidualVariance,
    SignalHistory,
    SignalRecord,
    gram_plus_noise,
    posterior_at,
    posterior_variance_at,
    residual_variance_brownian,
    residual_variance_general,
    residual_variance_markov,
    residual_variance_markov_closed,
)
from .processes import (
    BrownianParams,
    LinearParams,
    OUParams,
    ProcessSpec,
    TimeGrid,
    ou_general_cov,
    prior_cov,
    prior_mean,
    sample_path,
    sample_paths,
)
from .simulation import (
    RunResult,
    Scenario,
    default_query_grid,
    discounted_objective,
    monte_carlo_action_loss,
    run_scenario,
)
from .strategies import (
    CostParams,
    PlanningSolution,
    StrategyStep,
    StrategyTrajectory,
    brownian_myopic_trajectory,
    forward_looking_trajectory,
    generic_myopic_trajectory,
    myopic_precision,
    myopic_trajectory,
    ou_myopic_trajectory,
    solve_planning_V,
    steady_state_myopic,
)

__version__ = "0.1.0"

__all__ = [
    "BrownianParams",
    "ConfigError",
    "CostParams",
    "LinearParams",
    "NumericalError",
    "OUParams",
    "PlanningSolution",
    "PosteriorSummary",
    "ProcessSpec",
    "ResidualVariance",
    "RunResult",
    "ScalarMinResult",
    "Scenario",
    "SignalHistory",
    "SignalRecord",
    "SingularSystemError",
    "StrategyStep",
    "StrategyTrajectory",
    "TimeGrid",
    "ValueIterationResult",
    "brownian_myopic_trajectory",
    "default_query_grid",
    "discounted_objective",
    "forward_looking_trajectory",
    "generic_myopic_trajectory",
    "gram_plus_noise",
    "minimize_psi",
    "monte_carlo_action_loss",
    "myopic_precision",
    "myopic_trajectory",
    "ou_general_cov",
    "ou_myopic_trajectory",
    "posterior_at",
    "posterior_variance_at",
    "prior_cov",
    "prior_mean",
    "residual_variance_brownian",
    "residual_variance_general",
    "residual_variance_markov",
    "residual_variance_markov_closed",
    "run_scenario",
    "sample_path",
    "sample_paths",
    "solve_planning_V",
    "steady_state_myopic",
    "value_iterate",
]
