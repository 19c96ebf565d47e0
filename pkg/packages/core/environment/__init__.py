from packages.core.environment.model import (
    EnvironmentModel,
    environment_document,
    environment_from_document,
    load_environment,
)
from packages.core.environment.matrices import (
    env_mean_array,
    env_mean_matrix,
    two_step_array,
    two_step_mean_matrix,
)
from packages.core.environment.bounds import markov_env_lower_bound, markov_env_lower_bound_graph

__all__ = [
    "EnvironmentModel",
    "environment_document",
    "environment_from_document",
    "load_environment",
    "env_mean_array",
    "env_mean_matrix",
    "two_step_array",
    "two_step_mean_matrix",
    "markov_env_lower_bound",
    "markov_env_lower_bound_graph",
]
