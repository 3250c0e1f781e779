"""Poisson hyperplane tessellations: typical faces and small-face shapes."""

from ._phtess import (
    SamplerAbort,
    StatsError,
    canonical_phi,
    change_of_variables_check,
    count_k_faces,
    phi_functional,
    poisson_gof,
    sample_directions,
    sample_hyperplanes,
    sample_typical,
    sample_xi,
    simplex_of_tuple,
    simulate,
    weighted_ks,
)

__all__ = [
    "SamplerAbort",
    "StatsError",
    "canonical_phi",
    "change_of_variables_check",
    "count_k_faces",
    "phi_functional",
    "poisson_gof",
    "sample_directions",
    "sample_hyperplanes",
    "sample_typical",
    "sample_xi",
    "simplex_of_tuple",
    "simulate",
    "weighted_ks",
]
