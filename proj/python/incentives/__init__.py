"""Implementability, optimal contracts and information orders under noisy monitoring."""

from ._core import (
    AssumptionError,
    Belief,
    Contract,
    ContractFamily,
    DegenerateExperimentError,
    Error,
    Experiment,
    InputError,
    NotImplementableError,
    PosteriorCost,
    PosteriorDistribution,
    PseudoInverse,
    SolverError,
    UnsupportedError,
    agent_best_response,
    binary_k_compare,
    binary_rent_profile,
    blackwell_compare,
    check_implementable,
    check_implementable_corner,
    check_unique_implementable,
    colspace_compare,
    column_space_residual,
    cone_compare,
    demo,
    entropy_cost,
    expected_payment,
    experiment_from_posteriors,
    first_best_contract,
    has_full_row_rank,
    has_uniform_random_noise,
    is_bayes_plausible,
    k_dominance_sufficient,
    marginal_cost_matrix,
    numerical_rank,
    optimal_contract,
    posteriors,
    pseudo_inverse,
    quadratic_cost,
    synthesize_family,
    total_cost,
    verify_contract,
)

__version__ = "0.1.0"
