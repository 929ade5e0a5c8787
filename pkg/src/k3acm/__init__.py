"""Numerical theory of ACM line bundles on K3 surfaces with a given Néron–Severi lattice."""
from .acm import (ACMVerdict, OutOfScope, acm_by_twist_vanishing, classify_dp9, classify_general,
                  classify_genus2, classify_quartic, classify_quartic_class)
from .enumeration import SliceQuery, enumerate_slice, enumerate_up_to_degree, orthogonal_slice_gram
from .extensions import (ExtensionPlan, HilbertPoly, ext1_dim, family_plan, hilbert_poly, hom_vanishing,
                         plan_from_blocks, reduced_hilbert_equal, semistable_certificate)
from .geometry import (chi, degree_bound_check, h1_status, hodge_index_check, is_ample,
                       is_base_point_free_numeric, is_effective, is_nef, is_neg2_curve, is_one_connected,
                       is_very_ample_numeric)
from .lattice import (LatticeError, LatticeSpec, NotTwoElementary, TwoElementaryInvariants, is_even,
                      load_lattice, pair, self_int, signature, smith_invariants, two_elementary_invariants)
from .nikulin import build_dp9, builtin, classify_rank_a, fixed_locus, invariant_degree_constraints
from .truth import ThreeValued, Truth

__version__ = "0.1.0"
