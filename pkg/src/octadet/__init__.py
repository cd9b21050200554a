"""Exact determinantal identities over commutative rings.

Minors, division-free characteristic polynomials, sums over the
hyperoctahedral group and the closed-form finite free convolutions they
reduce to, plus a seeded harness that checks every identity exactly.
"""

__version__ = "0.1.0"

from .combi import Parity, Permutation, Subset, all_permutations, subsets_of_size
from .freeconv import conv_add_rhs, conv_mult_rhs, conv_rect_rhs
from .hyperoct import GroupElement, conv_add_lhs, conv_mult_lhs, conv_rect_lhs, enumerate_group, four_set_table
from .errors import DomainError, GuardError, OctadetError, RingSpecError
from .matrices import CharPolyCoeffs, Matrix, charpoly, det_berkowitz, det_leibniz, minor, principal_minor_sum
from .rings import Integers, IntegersMod, Poly, RingElement, nat_scale, ring_from_spec
from .verify import SuiteConfig, replay, run_suite

__all__ = [
    "__version__",
    "CharPolyCoeffs",
    "DomainError",
    "GroupElement",
    "GuardError",
    "Integers",
    "IntegersMod",
    "Matrix",
    "OctadetError",
    "Parity",
    "Permutation",
    "Poly",
    "RingElement",
    "RingSpecError",
    "SuiteConfig",
    "Subset",
    "all_permutations",
    "charpoly",
    "conv_add_lhs",
    "conv_add_rhs",
    "conv_mult_lhs",
    "conv_mult_rhs",
    "conv_rect_lhs",
    "conv_rect_rhs",
    "det_berkowitz",
    "det_leibniz",
    "enumerate_group",
    "four_set_table",
    "minor",
    "nat_scale",
    "principal_minor_sum",
    "replay",
    "ring_from_spec",
    "run_suite",
    "subsets_of_size",
]
