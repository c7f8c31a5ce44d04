"""Exact C^r continuity conditions for Bernstein polynomials on simplotope grids.

Simplotopes are products of simplices (squares, prisms, cubes, ...).  This
package evaluates tensor-product Bernstein polynomials on them, builds
circumscribed simplices, raises and lowers degrees, and generates the linear
conditions that make two adjacent patches join with C^r smoothness, together
with an independent symbolic checker.  All arithmetic is exact.
"""

from .bernstein import (
    BNet,
    SimplexPolynomial,
    TensorPolynomial,
    de_casteljau,
    directional_derivative,
    domain_points,
    eval_basis,
    eval_tensor_basis,
    mixed_derivative,
)
from .circumscribe import (
    CircumscribedPair,
    CircumscribedSimplex,
    UnsupportedPair,
    circumscribe_pair,
    extract_bnet,
    standard_circumscribe,
)
from .continuity import (
    CoefficientRef,
    ConditionSet,
    DegreeMismatch,
    LinearCondition,
    NotCospatial,
    assemble_smoothness_matrix,
    choose_direction,
    mixed_conditions,
    simplex_conditions,
)
from .degree_ops import lower, lower_local, raise_, raise_local
from .geometry import (
    Simplex,
    Simplotope,
    barycentric,
    detect_shared_facet,
    direction_coords,
    facet_of,
    is_oof_cospatial,
)
from .multiindex import enumerate_blocked, enumerate_indices, multinomial
from .verify import (
    VerificationReport,
    check_conditions,
    conditioned_coefficients,
    expand_to_monomials,
    nullspace_equivalence,
    sample_facet,
)

__version__ = "0.1.0"

__all__ = [
    "BNet",
    "CircumscribedPair",
    "CircumscribedSimplex",
    "CoefficientRef",
    "ConditionSet",
    "DegreeMismatch",
    "LinearCondition",
    "NotCospatial",
    "Simplex",
    "SimplexPolynomial",
    "Simplotope",
    "TensorPolynomial",
    "UnsupportedPair",
    "VerificationReport",
    "assemble_smoothness_matrix",
    "barycentric",
    "check_conditions",
    "choose_direction",
    "circumscribe_pair",
    "conditioned_coefficients",
    "de_casteljau",
    "detect_shared_facet",
    "direction_coords",
    "directional_derivative",
    "domain_points",
    "enumerate_blocked",
    "enumerate_indices",
    "eval_basis",
    "eval_tensor_basis",
    "expand_to_monomials",
    "extract_bnet",
    "facet_of",
    "is_oof_cospatial",
    "lower",
    "lower_local",
    "mixed_conditions",
    "mixed_derivative",
    "multinomial",
    "nullspace_equivalence",
    "raise_",
    "raise_local",
    "sample_facet",
    "simplex_conditions",
    "standard_circumscribe",
]
