"""
A square next to a triangle
===========================

Mixed pairs go through the circumscribed simplices.  ``mode="sound"`` keeps
the degree factors of both sides; ``mode="literal"`` lowers the right patch
and drops them, which gives a weight of 1/3 instead of 1/2 and fails the
oracle.
"""

from fractions import Fraction

from simplotope import Simplotope, mixed_conditions
from simplotope.verify import check_conditions, conditioned_coefficients, polynomials_from_values

square = Simplotope((0, 0), [[(-1, 0)], [(0, 1)]])
triangle = Simplotope((0, 0), [[], [(0, 1), (1, Fraction(1, 3))]])

print("directional coordinates in the triangle:", ", ".join(map(str, triangle.direction_split((-1, 0))[1])))

for mode in ("sound", "literal"):
    cs = mixed_conditions(square, triangle, (2, 2), 1, mode=mode)
    row = cs.conditions[4]
    print(f"\n{mode}:")
    for ref, w in row.terms:
        print(f"  {str(w):>5}  {ref.patch} {ref.index}")
    p, q = polynomials_from_values(cs, conditioned_coefficients(cs, seed=0), [square, triangle])
    report = check_conditions(p, q, cs, samples=25)
    print("  oracle:", "pass" if report.passed else f"fail, max discrepancy {report.max_discrepancy}")
