"""Rank-based Brownian particle systems: stationary gap laws, sampling and verification."""

from ._core import (
    BoundError,
    ConfigError,
    DriftSpec,
    SimulationError,
    StabilityError,
    ValidationError,
    a_lower_bound,
    approximant,
    finite_stationary_rates,
    general_solution_residual,
    infinite_rates,
    ks_exponential,
    sample_gaps,
    simulate_stationary,
    singularity_statistic,
    stability_check,
    verify,
)

__all__ = [
    "BoundError",
    "ConfigError",
    "DriftSpec",
    "SimulationError",
    "StabilityError",
    "ValidationError",
    "a_lower_bound",
    "approximant",
    "finite_stationary_rates",
    "general_solution_residual",
    "infinite_rates",
    "ks_exponential",
    "sample_gaps",
    "simulate_stationary",
    "singularity_statistic",
    "stability_check",
    "verify",
]
