"""Independent verification of continuity conditions.

Polynomials are expanded into monomials in the ambient coordinates with
sympy (no De Casteljau, no degree operators), differentiated symbolically and
compared exactly at random rational points of the shared facet.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence, Union

import sympy
from sympy import Poly, QQ

from ._exact import Vector, fmt, rank, rref, to_vector
from .bernstein import SimplexPolynomial, TensorPolynomial, mixed_derivative
from .continuity import CoefficientRef, ConditionSet
from .geometry import SharedFacetInfo, Simplotope, detect_shared_facet
from .multiindex import enumerate_blocked, mfactorial

__all__ = [
    "ConditionViolation",
    "VerificationReport",
    "expand_to_monomials",
    "to_poly",
    "sample_facet",
    "random_rational",
    "conditioned_coefficients",
    "random_solution",
    "check_conditions",
    "nullspace_equivalence",
    "polynomials_from_values",
]


class ConditionViolation(AssertionError):
    """Coefficients handed to the checker do not satisfy the condition set."""


def random_rational(rng: random.Random, num: int = 9, den: int = 5) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


# -- monomial expansion -------------------------------------------------------------

def _symbols(n: int):
    return sympy.symbols(f"x0:{n}")


def _affine_block_coords(s: Simplotope, xs) -> list[list[Poly]]:
    """Per-block barycentric coordinates as affine polynomials in the ambient variables."""
    gens = xs
    lam_rows = s._edges_inverse.rows
    shifted = [Poly(x - sympy.Rational(b.numerator, b.denominator), *gens, domain=QQ) for x, b in zip(xs, s.base)]
    lam = []
    for row in lam_rows:
        acc = Poly(0, *gens, domain=QQ)
        for w, sx in zip(row, shifted):
            if w:
                acc += sx * sympy.Rational(w.numerator, w.denominator)
        lam.append(acc)
    out, pos = [], 0
    one = Poly(1, *gens, domain=QQ)
    for nu_i in s.nu:
        part = lam[pos:pos + nu_i]
        pos += nu_i
        first = one
        for p in part:
            first -= p
        out.append([first, *part])
    return out


def to_poly(poly: Union[SimplexPolynomial, TensorPolynomial]) -> Poly:
    """Monomial form of a Bernstein polynomial as a sympy ``Poly`` over QQ."""
    if isinstance(poly, SimplexPolynomial):
        s = Simplotope.from_simplex(poly.simplex)
        coeffs = {(k,): c for k, c in poly.coefficients.items()}
        degrees = (poly.degree,)
    else:
        s, coeffs, degrees = poly.simplotope, poly.coefficients, poly.degrees
    xs = _symbols(s.ambient_dim)
    blocks = _affine_block_coords(s, xs)
    total = Poly(0, *xs, domain=QQ)
    power_cache: dict = {}

    def power(i, j, e):
        key = (i, j, e)
        if key not in power_cache:
            power_cache[key] = blocks[i][j] ** e
        return power_cache[key]

    for kb, c in coeffs.items():
        if not c:
            continue
        term = Poly(sympy.Rational(c.numerator, c.denominator), *xs, domain=QQ)
        for i, (ki, di) in enumerate(zip(kb, degrees)):
            term *= sympy.Rational(factorial(di), mfactorial(ki))
            for j, e in enumerate(ki):
                if e and len(ki) > 1:
                    term *= power(i, j, e)
        total += term
    return total


def expand_to_monomials(poly: Union[SimplexPolynomial, TensorPolynomial]) -> dict[tuple[int, ...], Fraction]:
    """``{exponent tuple: coefficient}`` of the polynomial in ambient coordinates."""
    p = to_poly(poly)
    return {m: Fraction(int(c.numerator), int(c.denominator)) for m, c in p.terms() if c}


def _directional(p: Poly, u: Sequence[Fraction]) -> Poly:
    gens = p.gens
    out = Poly(0, *gens, domain=QQ)
    for g, ui in zip(gens, u):
        if ui:
            out += p.diff(g) * sympy.Rational(ui.numerator, ui.denominator)
    return out


def _eval(p: Poly, point: Sequence[Fraction]) -> Fraction:
    val = Fraction(0)
    for mon, c in p.terms():
        term = Fraction(int(c.numerator), int(c.denominator))
        for x, e in zip(point, mon):
            if e:
                term *= x**e
        val += term
    return val


# -- sampling -----------------------------------------------------------------------

def _random_simplex_weights(rng: random.Random, size: int, interior: bool) -> list[Fraction]:
    lo = 1 if interior else 0
    raw = [rng.randint(lo, 12) for _ in range(size)]
    if sum(raw) == 0:
        raw[0] = 1
    total = sum(raw)
    return [Fraction(x, total) for x in raw]


def sample_facet(facet: Simplotope, count: int, seed: int | None = None, *, interior: bool = True) -> list[Vector]:
    """``count`` reproducible random rational points of a simplotope (e.g. a shared facet).

    Points are strictly interior unless ``interior=False``.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        coords = [_random_simplex_weights(rng, n + 1, interior) for n in facet.nu]
        pts.append(facet.point(coords))
    return pts


def _facet_simplotope(info: SharedFacetInfo, p: Simplotope) -> Simplotope:
    """The shared facet as a simplotope in the caller's frame of ``p``."""
    blocks = []
    for i in range(p.ell):
        verts = list(p.block_vertices(i))
        if i == info.oof_block_left:
            del verts[info.oof_vertex_left]
        ref = verts[0]
        blocks.append((ref, [tuple(a - b for a, b in zip(v, ref)) for v in verts[1:]]))
    base = list(p.base)
    for ref, _ in blocks:
        base = [a + b for a, b in zip(base, ref)]
    return Simplotope(base, [b for _, b in blocks])


# -- linear algebra over condition sets ----------------------------------------------------

def random_solution(
    rows: Sequence[Sequence[Fraction]],
    ncols: int,
    rng: random.Random,
    order: Sequence[int] | None = None,
) -> list[Fraction]:
    """Random exact solution of ``A x = 0``.

    Columns listed first in ``order`` are preferred as pivots (dependent
    variables); all free variables get random rationals.
    """
    order = list(order) if order is not None else list(range(ncols))
    if not rows:
        return [random_rational(rng) for _ in range(ncols)]
    permuted = [[row[c] for c in order] for row in rows]
    red, pivots = rref(permuted, ncols)
    values = [Fraction(0)] * ncols
    pivot_set = set(pivots)
    for j in range(ncols):
        if j not in pivot_set:
            values[j] = random_rational(rng)
    for row, pc in zip(red, pivots):
        values[pc] = -sum((row[j] * values[j] for j in range(ncols) if j != pc and row[j]), Fraction(0))
    out = [Fraction(0)] * ncols
    for j, c in enumerate(order):
        out[c] = values[j]
    return out


def conditioned_coefficients(cs: ConditionSet, seed: int | None = None) -> dict[CoefficientRef, Fraction]:
    """Random coefficients on both patches satisfying ``cs``.

    The second patch's coefficients are solved for; the first patch's are
    random wherever possible.
    """
    rng = random.Random(seed)
    refs = cs.refs()
    second = cs.patches()[1]
    order = [i for i, r in enumerate(refs) if r.patch == second] + [i for i, r in enumerate(refs) if r.patch != second]
    sol = random_solution(cs.matrix(refs), len(refs), rng, order)
    return dict(zip(refs, sol))


def nullspace_equivalence(a: ConditionSet, b: ConditionSet) -> bool:
    """True when two condition sets have the same exact row space."""
    cols = sorted({ref for cs in (a, b) for cond in cs.conditions for ref, _ in cond.terms})
    ma, mb = a.matrix(cols), b.matrix(cols)
    ra, rb = rank(ma, len(cols)), rank(mb, len(cols))
    return ra == rb and rank(ma + mb, len(cols)) == ra


# -- checking ------------------------------------------------------------------------------

@dataclass
class VerificationReport:
    """Outcome of :func:`check_conditions`; ``passed`` iff the largest discrepancy is zero."""

    passed: bool
    conditions_satisfied: bool
    samples: int
    orders: tuple[int, ...]
    checks: int
    max_discrepancy: Fraction
    failures: list = field(default_factory=list)
    pair: tuple[str, str] = ("P", "Q")
    seed: int | None = None

    def to_json(self) -> dict:
        return {
            "pair": list(self.pair),
            "passed": self.passed,
            "conditions_satisfied": self.conditions_satisfied,
            "orders": list(self.orders),
            "samples": self.samples,
            "checks": self.checks,
            "max_discrepancy": fmt(self.max_discrepancy),
            "seed": self.seed,
            "failures": [
                {
                    "point": [fmt(x) for x in f["point"]],
                    "order": f["order"],
                    "directions": [[fmt(x) for x in d] for d in f["directions"]],
                    "route": f["route"],
                    "lhs": fmt(f["lhs"]),
                    "rhs": fmt(f["rhs"]),
                }
                for f in self.failures[:20]
            ],
        }


def _as_simplotope(poly) -> Simplotope:
    if isinstance(poly, SimplexPolynomial):
        return Simplotope.from_simplex(poly.simplex)
    return poly.simplotope


def _coeff_values(poly, pid: str) -> dict[CoefficientRef, Fraction]:
    if isinstance(poly, SimplexPolynomial):
        return {CoefficientRef(pid, (k,)): c for k, c in poly.coefficients.items()}
    return {CoefficientRef(pid, k): c for k, c in poly.coefficients.items()}


def check_conditions(
    p_poly: Union[SimplexPolynomial, TensorPolynomial],
    q_poly: Union[SimplexPolynomial, TensorPolynomial],
    cs: ConditionSet,
    samples: int = 25,
    seed: int | None = 0,
    *,
    require_conditions: bool = True,
    tangent_directions: int | None = None,
) -> VerificationReport:
    """Compare all mixed derivatives of order ``<= r`` of the two patches on the shared facet.

    Directions: the condition direction ``u`` plus ``r`` random combinations
    of ``u`` with facet-tangent vectors (``tangent_directions`` overrides the
    count); every multiset of at most ``r`` of them is checked.  Each
    derivative is computed twice, by symbolic differentiation of the monomial
    expansion and by De Casteljau, and both routes must agree within and
    across patches.

    Raises :class:`ConditionViolation` if the coefficients break ``cs`` and
    ``require_conditions`` is set.
    """
    rng = random.Random(seed)
    pid, qid = cs.patches()
    values = {**_coeff_values(p_poly, pid), **_coeff_values(q_poly, qid)}
    satisfied = all(cond.evaluate(values) == 0 for cond in cs.conditions)
    if not satisfied and require_conditions:
        raise ConditionViolation("coefficients do not satisfy the condition set")

    ps, qs = _as_simplotope(p_poly), _as_simplotope(q_poly)
    info = detect_shared_facet(ps, qs)
    if info is None:
        raise ValueError("patches do not share a facet")
    facet = _facet_simplotope(info, ps)
    pts = sample_facet(facet, samples, rng.randrange(2**31))

    r = cs.order
    u = to_vector(cs.direction)
    tangents = facet.direction_space()
    k = r if tangent_directions is None else tangent_directions
    dirs = [u]
    for _ in range(k):
        d = list(u)
        for t in tangents:
            c = random_rational(rng)
            d = [a + c * b for a, b in zip(d, t)]
        dirs.append(tuple(d))

    fp, fq = to_poly(p_poly), to_poly(q_poly)
    failures = []
    checks = 0
    worst = Fraction(0)
    for order in range(r + 1):
        for combo in itertools.combinations_with_replacement(range(len(dirs)), order):
            vecs = [dirs[c] for c in combo]
            dp, dq = fp, fq
            for v in vecs:
                dp = _directional(dp, v)
                dq = _directional(dq, v)
            for x in pts:
                a, b = _eval(dp, x), _eval(dq, x)
                a_dc = mixed_derivative(p_poly, vecs, x)
                b_dc = mixed_derivative(q_poly, vecs, x)
                checks += 1
                for route, lhs, rhs in (("across", a, b), ("left", a, a_dc), ("right", b, b_dc)):
                    if lhs != rhs:
                        worst = max(worst, abs(lhs - rhs))
                        failures.append(
                            {"point": x, "order": order, "directions": vecs, "route": route, "lhs": lhs, "rhs": rhs}
                        )
    return VerificationReport(
        passed=worst == 0,
        conditions_satisfied=satisfied,
        samples=len(pts),
        orders=tuple(range(r + 1)),
        checks=checks,
        max_discrepancy=worst,
        failures=failures,
        pair=(pid, qid),
        seed=seed,
    )


def polynomials_from_values(
    cs: ConditionSet,
    values: Mapping[CoefficientRef, Fraction],
    shapes: Sequence[Simplotope],
) -> tuple[TensorPolynomial, TensorPolynomial]:
    """Build the two tensor polynomials of a condition set from a coefficient assignment."""
    out = []
    for pid, s, (nu, delta) in zip(cs.patches(), shapes, cs.metadata["shapes"]):
        coeffs = {k: values[CoefficientRef(pid, k)] for k in enumerate_blocked(nu, delta)}
        out.append(TensorPolynomial(s, tuple(delta), coeffs))
    return out[0], out[1]
