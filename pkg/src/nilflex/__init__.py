"""Exact symplectically harmonic Betti numbers of nilpotent Lie algebras."""

from .algebra import KForm, NilpotentLieAlgebra, build_algebra, direct_sum, parse_spec, wedge
from .catalog import FOUR_DIM, SIX_DIM, by_structure
from .cohomology import CohomologyRing, compute_cohomology
from .harmonic import FixedSymplecticForm, harmonic_profile, identity_suite, product_star_check
from .linalg import Matrix
from .pipeline import emit, run_entry, verify_all
from .poly import MultiPoly
from .symplectic import (
    build_family,
    explore_ranks,
    flexibility_certificate,
    harmonic_betti_via_rank,
    segment_rank_check,
)

__all__ = [
    "KForm", "NilpotentLieAlgebra", "build_algebra", "direct_sum", "parse_spec", "wedge",
    "FOUR_DIM", "SIX_DIM", "by_structure", "CohomologyRing", "compute_cohomology",
    "FixedSymplecticForm", "harmonic_profile", "identity_suite", "product_star_check",
    "Matrix", "emit", "run_entry", "verify_all", "MultiPoly", "build_family", "explore_ranks",
    "flexibility_certificate", "harmonic_betti_via_rank", "segment_rank_check",
]
