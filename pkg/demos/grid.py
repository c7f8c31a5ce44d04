"""
A small grid and a four-dimensional pair
========================================

Assemble the smoothness matrix of three squares in a row, then push a
(2,2) | (1,3) pair in four dimensions through the same pipeline.
"""

import time

import sympy

from simplotope import Simplotope, assemble_smoothness_matrix, mixed_conditions
from simplotope.verify import check_conditions, conditioned_coefficients, polynomials_from_values

squares = [Simplotope((x, 0), [[(1, 0)], [(0, 1)]]) for x in range(3)]
m = assemble_smoothness_matrix([(s, (2, 2)) for s in squares], "auto", 2, ids=["a", "b", "c"])
rows, cols = m.shape
r = sympy.Matrix(m.dense()).rank()
print(f"smoothness matrix {rows} x {cols}, rank {r}")
print("dimension of the C^2 spline space:", cols - r)

# four dimensions: a triangle x triangle next to a segment x tetrahedron
e, f, g, normal = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)
p = Simplotope((0, 0, 0, 0), [[e, (1, 1, 0, 2)], [f, g]])
q = Simplotope((0, 0, 0, 0), [[e], [f, g, (0, 1, 2, -3)]])

start = time.perf_counter()
cs = mixed_conditions(p, q, (2, 2), 1)
pp, qq = polynomials_from_values(cs, conditioned_coefficients(cs, seed=0), [p, q])
report = check_conditions(pp, qq, cs, samples=25)
print(f"4D pair: {len(cs)} conditions, oracle {'pass' if report.passed else 'FAIL'}, {time.perf_counter() - start:.2f}s")
