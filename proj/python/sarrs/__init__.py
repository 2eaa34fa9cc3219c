"""Sparse reduced-rank multivariate regression."""

from sarrs._core import (  # noqa: F401
    InputError,
    NumericalError,
    bsw_fit,
    default_lambda,
    estimate_sigma,
    evaluate,
    generate_scenario,
    group_threshold,
    init_low_rank,
    init_sparse,
    kkt_certificate,
    lambda_grid_max,
    operator_norm,
    penalty_value,
    projection_onto_column_space,
    sarrs_fit,
    schatten_norm_sq,
    solve_gpls,
    sparse_riesz_constants,
    split_responses,
    subspace_overlap,
    thin_svd,
)

__all__ = [
    "InputError",
    "NumericalError",
    "bsw_fit",
    "default_lambda",
    "estimate_sigma",
    "evaluate",
    "generate_scenario",
    "group_threshold",
    "init_low_rank",
    "init_sparse",
    "kkt_certificate",
    "lambda_grid_max",
    "operator_norm",
    "penalty_value",
    "projection_onto_column_space",
    "sarrs_fit",
    "schatten_norm_sq",
    "solve_gpls",
    "sparse_riesz_constants",
    "split_responses",
    "subspace_overlap",
    "thin_svd",
]

__version__ = "0.1.0"
