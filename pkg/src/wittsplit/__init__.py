"""Exact truncated Witt-vector arithmetic and Frobenius-splitting decisions
over small prime fields, with the product-splitting calculus and curve-level
height computations that go with them."""

__version__ = "0.1.0"

from .algebra import (FiniteAlgebra, algebra_from_presentation, base_field,
                      galois_field, is_reduced, tensor_algebra)
from .cartier import (BoxProduct, CartierModule, box_product,
                      compare_box_with_witt, mv_extend, witt_as_cartier)
from .cech import coboundary_solve, cubic_height
from .curves import (PlaneCurve, abelian_height, am_height_cy,
                     classification_lookup, count_points, hasse_invariant,
                     p_rank_elliptic, product_height_report, scan_smooth_cubics)
from .errors import WittsplitError
from .identities import identity_suite
from .product import (build_product_splitting, nonsplit_tensor_certificate,
                      verify_quasi_splitting)
from .splitting import (HeightReport, NonSplitCertificate, SplittingWitness,
                        height_artinian, is_f_split, is_quasi_f_split)
from .witt import WittRing, WittVector, check_exact_sequences, wbar_space

__all__ = [
    "FiniteAlgebra", "algebra_from_presentation", "base_field", "galois_field",
    "is_reduced", "tensor_algebra",
    "BoxProduct", "CartierModule", "box_product", "compare_box_with_witt",
    "mv_extend", "witt_as_cartier",
    "coboundary_solve", "cubic_height",
    "PlaneCurve", "abelian_height", "am_height_cy", "classification_lookup",
    "count_points", "hasse_invariant", "p_rank_elliptic",
    "product_height_report", "scan_smooth_cubics",
    "WittsplitError", "identity_suite",
    "build_product_splitting", "nonsplit_tensor_certificate",
    "verify_quasi_splitting",
    "HeightReport", "NonSplitCertificate", "SplittingWitness",
    "height_artinian", "is_f_split", "is_quasi_f_split",
    "WittRing", "WittVector", "check_exact_sequences", "wbar_space",
]
