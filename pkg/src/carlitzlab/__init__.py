"""Carlitz module arithmetic, Bernoulli-Carlitz numbers and L-series checks over F_q[x]."""

from .algebra import Frac, Poly, enumerate_irreducibles, enumerate_monic, make_field, parse_element, valuation
from .bcnum import bc, bc_value, conjecture_scan, divisibility_bound_deg1, divisibility_bound_deg2, measure_valuation
from .carlitz import CarlitzCache, cache_for, carlitz_cache
from .kernels import BACKEND
from .lseries import explicit_rhs, pellarin_trunc, zeta_trunc
from .reports import IdentityReport

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CarlitzCache", "Frac", "IdentityReport", "Poly", "bc", "bc_value", "cache_for", "carlitz_cache",
    "conjecture_scan", "divisibility_bound_deg1", "divisibility_bound_deg2", "enumerate_irreducibles",
    "enumerate_monic", "explicit_rhs", "make_field", "measure_valuation", "parse_element", "pellarin_trunc",
    "valuation", "zeta_trunc",
]
