"""Negative-dimension Bose-Einstein occupancy model: weights, solvers,
exact ensemble sampling, corpus rank curves and two-point fitting."""

from ._core import (
    BudgetError,
    ConvergenceError,
    DomainError,
    EncodingError,
    __version__,
    alpha_grid,
    alpha_sweep,
    boltzmann_shell_ratio,
    concentration_report,
    condensate_fraction,
    count_variants,
    cumulative,
    exact_log_partition,
    fit_curve,
    frequency_dictionary,
    frequency_spectrum,
    inverted_rank_curve,
    log_zeta,
    log_zeta_d2,
    occupation,
    partition_saddle,
    planck_density,
    pole_indices,
    rank_model_neg1,
    sample_variants,
    solve_beta_nu,
    solve_nu,
    tokenize,
    weight,
    weight_sequence,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
