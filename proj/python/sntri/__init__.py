"""Symmetric nonnegative trifactorization A = B C B^T.

Thin wrapper over the C++ core. All matrices are numpy float arrays;
factor pairs come back as (b, c) tuples or inside result dicts.
"""

from ._sntri import (
    DimensionError,
    DomainError,
    ParseError,
    __version__,
    boolean_rank,
    bounds,
    certify,
    complete,
    completion_lower_bound,
    edm_factor,
    edm_matrix,
    example_ids,
    fit,
    inertia,
    numerical_rank,
    optimize_similarity,
    perturb,
    rank2_factor,
    run_example,
    verify,
)

__all__ = [
    "DimensionError",
    "DomainError",
    "ParseError",
    "__version__",
    "boolean_rank",
    "bounds",
    "certify",
    "complete",
    "completion_lower_bound",
    "edm_factor",
    "edm_matrix",
    "example_ids",
    "fit",
    "inertia",
    "numerical_rank",
    "optimize_similarity",
    "perturb",
    "rank2_factor",
    "run_example",
    "verify",
]
