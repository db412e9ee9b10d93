"""Graded Betti tables of curves embedded by complete series of degree >= 2g+1."""

from .curves import (CurveModel, LineBundleSpec, ModelInvalidError,
                     SectionBasis, build_curve, curve_descriptors,
                     curve_from_json, make_bundle, multiply_monomial,
                     rational_curve, riemann_roch_selfcheck, section_basis)
from .koszul import (BettiEntry, BettiTable, KoszulContext, WedgeIndex,
                     betti_table, build_differential, koszul_dim, wedge_rank,
                     wedge_unrank)
from .linalg import (Certification, IntegerSparseMatrix, PrimeModulus,
                     RankPolicy, RankResult, rank_consensus, rank_exact,
                     rank_mod_p, sample_primes)
from .theorems import (DerivedBundleDim, Expectation, ExpectationKind, Status,
                       VerificationReport, difference_value, predict,
                       vandermonde_check, verify_context, verify_table)

__version__ = "0.1.0"

__all__ = [
    "BettiEntry", "BettiTable", "Certification", "CurveModel",
    "DerivedBundleDim", "Expectation", "ExpectationKind",
    "IntegerSparseMatrix", "KoszulContext", "LineBundleSpec",
    "ModelInvalidError", "PrimeModulus", "RankPolicy", "RankResult",
    "SectionBasis", "Status", "VerificationReport", "WedgeIndex",
    "betti_table", "build_curve", "build_differential", "curve_descriptors",
    "curve_from_json", "difference_value", "koszul_dim", "make_bundle",
    "multiply_monomial", "predict", "rank_consensus", "rank_exact",
    "rank_mod_p", "rational_curve", "riemann_roch_selfcheck",
    "sample_primes", "section_basis", "vandermonde_check", "verify_context",
    "verify_table", "wedge_rank", "wedge_unrank",
]
