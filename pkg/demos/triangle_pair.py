"""
Two triangles sharing an edge
=============================

Generate the C^1 conditions of two cubic triangle patches, draw random
coefficients that satisfy them and check the joint with the symbolic oracle.
"""

from simplotope import Simplex, simplex_conditions
from simplotope.bernstein import SimplexPolynomial
from simplotope.verify import check_conditions, conditioned_coefficients

left = Simplex([(-3, 1), (0, 3), (0, 0)])
right = Simplex([(0, 3), (0, 0), (3, 2)])

# transversal direction: the left edge v0 - v1
cs = simplex_conditions(left, right, degree=3, r=1, u=(-3, -2))
for cond in cs.conditions:
    print("  ".join(f"{'+' if w > 0 else ''}{w} {ref.patch}{ref.index[0]}" for ref, w in cond.terms))

values = conditioned_coefficients(cs, seed=1)


def patch(simplex, pid):
    coeffs = {ref.index[0]: v for ref, v in values.items() if ref.patch == pid}
    return SimplexPolynomial(simplex, 3, coeffs)


report = check_conditions(patch(left, "P"), patch(right, "Q"), cs, samples=25)
print("oracle:", "pass" if report.passed else "FAIL", f"({report.checks} checks)")
