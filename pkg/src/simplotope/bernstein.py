"""Bernstein polynomials on simplices and simplotopes.

Evaluation, domain points (B-nets), De Casteljau iteration and directional
derivatives, all in exact rational arithmetic.

The scalar degree ``d`` is used for the domain points of a simplex,
``q = sum_j (k_j / d) v_j``; a per-vertex degree ``d_j`` would not define a
point of the simplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Mapping, Sequence, Union

from ._exact import Vector, fmt, to_fraction, to_vector
from .geometry import Simplex, Simplotope
from .multiindex import (
    BlockedMultiIndex,
    MultiIndex,
    enumerate_blocked,
    enumerate_indices,
    multinomial,
)

__all__ = [
    "SimplexPolynomial",
    "TensorPolynomial",
    "BNet",
    "eval_basis",
    "eval_tensor_basis",
    "domain_points",
    "de_casteljau",
    "de_casteljau_block",
    "directional_derivative",
    "mixed_derivative",
]


def eval_basis(k: Sequence[int], d: int, b: Sequence) -> Fraction:
    """``B_k^d(b) = d!/k! * b^k``.

    >>> eval_basis((2, 0, 1, 1), 4, [Fraction(1, 4)] * 4)
    Fraction(3, 64)
    """
    if len(k) != len(b):
        raise ValueError(f"index length {len(k)} does not match point length {len(b)}")
    out = multinomial(d, k)
    for kj, bj in zip(k, b):
        if kj:
            out *= to_fraction(bj) ** kj
    return out


def eval_tensor_basis(kb: Sequence[Sequence[int]], delta: Sequence[int], a: Sequence[Sequence]) -> Fraction:
    """Product over blocks of :func:`eval_basis`."""
    if not len(kb) == len(delta) == len(a):
        raise ValueError("blocked index, degree vector and coordinates differ in block count")
    out = Fraction(1)
    for ki, di, ai in zip(kb, delta, a):
        out *= eval_basis(ki, di, ai)
    return out


def _basis_table(d: int, b: Sequence[Fraction]) -> dict[MultiIndex, Fraction]:
    return {k: eval_basis(k, d, b) for k in enumerate_indices(len(b), d)}


# -- B-nets -------------------------------------------------------------------

@dataclass(frozen=True)
class BNet:
    """Indices paired with their domain points, in enumeration order."""

    entries: tuple[tuple[tuple, Vector], ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def as_dict(self) -> dict:
        return dict(self.entries)

    def points(self) -> list[Vector]:
        return [p for _, p in self.entries]

    def to_json(self, render_float: bool = False) -> list[dict]:
        out = []
        for idx, p in self.entries:
            item = {"index": _json_index(idx), "point": [fmt(x) for x in p]}
            if render_float:
                item["point_float"] = [float(x) for x in p]
            out.append(item)
        return out


def _json_index(idx):
    if idx and isinstance(idx[0], tuple):
        return [list(b) for b in idx]
    return list(idx)


def domain_points(shape: Union[Simplex, Simplotope], degree) -> BNet:
    """B-net of a simplex at degree ``d`` or of a simplotope at degrees ``delta``.

    A positive-dimensional block of degree zero contributes its centroid.
    """
    if isinstance(shape, Simplex):
        d = int(degree)
        if d < 0:
            raise ValueError(f"negative degree {d}")
        verts = shape.vertices
        if d == 0:
            return BNet((((0,) * len(verts), shape.centroid()),))
        entries = []
        for k in enumerate_indices(len(verts), d):
            entries.append((k, shape.point([Fraction(kj, d) for kj in k])))
        return BNet(tuple(entries))
    if isinstance(shape, Simplotope):
        delta = tuple(int(x) for x in degree)
        if len(delta) != shape.ell:
            raise ValueError(f"degree vector has {len(delta)} entries for {shape.ell} blocks")
        if any(x < 0 for x in delta):
            raise ValueError(f"negative degree in {delta}")
        entries = []
        for kb in enumerate_blocked(shape.nu, delta):
            coords = []
            for ki, di, n in zip(kb, delta, shape.nu):
                if di == 0:
                    coords.append(tuple(Fraction(1, n + 1) for _ in ki))
                else:
                    coords.append(tuple(Fraction(x, di) for x in ki))
            entries.append((kb, shape.point(coords)))
        return BNet(tuple(entries))
    raise TypeError(f"expected Simplex or Simplotope, got {type(shape).__name__}")


# -- De Casteljau ---------------------------------------------------------------

def _degree_of(coeffs: Mapping[MultiIndex, Fraction]) -> int:
    norms = {sum(k) for k in coeffs}
    if len(norms) != 1:
        raise ValueError("coefficient keys have mixed norms")
    return norms.pop()


def de_casteljau(coeffs: Mapping[MultiIndex, Fraction], s: Sequence, r: int) -> dict[MultiIndex, Fraction]:
    """``r`` steps of ``c_k <- sum_j s_j c_{k+e_j}``.

    With barycentric ``s`` and ``r = d`` the single result is the value of the
    polynomial at ``s``.
    """
    d = _degree_of(coeffs)
    s = to_vector(s)
    slots = len(next(iter(coeffs)))
    if len(s) != slots:
        raise ValueError(f"direction has {len(s)} entries for {slots} vertices")
    if r < 0 or r > d:
        raise ValueError(f"iteration count {r} outside 0..{d}")
    cur = dict(coeffs)
    for step in range(1, r + 1):
        nxt = {}
        for k in enumerate_indices(slots, d - step):
            acc = Fraction(0)
            for j, sj in enumerate(s):
                if sj:
                    acc += sj * cur[k[:j] + (k[j] + 1,) + k[j + 1:]]
            nxt[k] = acc
        cur = nxt
    return cur


def de_casteljau_block(coeffs: Mapping[BlockedMultiIndex, Fraction], block: int, s: Sequence, r: int = 1) -> dict:
    """De Casteljau steps acting on one block of a blocked coefficient map."""
    s = to_vector(s)
    cur = dict(coeffs)
    for _ in range(r):
        some = next(iter(cur))
        if len(s) != len(some[block]):
            raise ValueError(f"direction has {len(s)} entries for a block with {len(some[block])} vertices")
        if sum(some[block]) == 0:
            raise ValueError("block degree exhausted")
        targets = set()
        for kb in cur:
            ki = kb[block]
            for j, x in enumerate(ki):
                if x:
                    targets.add(kb[:block] + (ki[:j] + (x - 1,) + ki[j + 1:],) + kb[block + 1:])
        nxt = {}
        for key in sorted(targets, reverse=True):
            ki = key[block]
            acc = Fraction(0)
            for j, sj in enumerate(s):
                if sj:
                    acc += sj * cur[key[:block] + (ki[:j] + (ki[j] + 1,) + ki[j + 1:],) + key[block + 1:]]
            nxt[key] = acc
        cur = nxt
    return cur


# -- polynomials -----------------------------------------------------------------

@dataclass(frozen=True)
class SimplexPolynomial:
    """Bernstein-Bezier polynomial of degree ``degree`` on a simplex."""

    simplex: Simplex
    degree: int
    coefficients: Mapping[MultiIndex, Fraction]

    def __post_init__(self):
        keys = enumerate_indices(len(self.simplex.vertices), self.degree)
        if set(self.coefficients) != set(keys):
            raise ValueError("coefficient keys must be exactly the enumeration for the simplex and degree")
        object.__setattr__(self, "coefficients", {k: to_fraction(self.coefficients[k]) for k in keys})

    @classmethod
    def from_values(cls, simplex: Simplex, degree: int, values: Sequence) -> "SimplexPolynomial":
        keys = enumerate_indices(len(simplex.vertices), degree)
        return cls(simplex, degree, dict(zip(keys, values, strict=True)))

    def evaluate_barycentric(self, b: Sequence) -> Fraction:
        return de_casteljau(self.coefficients, b, self.degree)[(0,) * len(b)]

    def __call__(self, point: Sequence) -> Fraction:
        return self.evaluate_barycentric(self.simplex.barycentric(point))

    def derivative(self, u: Sequence, r: int = 1) -> "SimplexPolynomial":
        """``r``-th derivative along ``u`` as a polynomial of degree ``d - r``."""
        s = self.simplex.direction_coords(u)
        c = de_casteljau(self.coefficients, s, r)
        scale = Fraction(factorial(self.degree), factorial(self.degree - r))
        return SimplexPolynomial(self.simplex, self.degree - r, {k: scale * v for k, v in c.items()})

    def bnet(self) -> BNet:
        return domain_points(self.simplex, self.degree)


@dataclass(frozen=True)
class TensorPolynomial:
    """Tensor-product Bernstein polynomial of degrees ``degrees`` on a simplotope."""

    simplotope: Simplotope
    degrees: tuple[int, ...]
    coefficients: Mapping[BlockedMultiIndex, Fraction]

    def __post_init__(self):
        degrees = tuple(int(x) for x in self.degrees)
        object.__setattr__(self, "degrees", degrees)
        keys = enumerate_blocked(self.simplotope.nu, degrees)
        if set(self.coefficients) != set(keys):
            raise ValueError("coefficient keys must be exactly enumerate_blocked(nu, delta)")
        object.__setattr__(self, "coefficients", {k: to_fraction(self.coefficients[k]) for k in keys})

    @classmethod
    def from_values(cls, simplotope: Simplotope, degrees: Sequence[int], values: Sequence) -> "TensorPolynomial":
        keys = enumerate_blocked(simplotope.nu, degrees)
        return cls(simplotope, tuple(degrees), dict(zip(keys, values, strict=True)))

    def evaluate_coords(self, a: Sequence[Sequence]) -> Fraction:
        return _eval_blocked(self.coefficients, self.degrees, a)

    def __call__(self, point: Sequence) -> Fraction:
        return self.evaluate_coords(self.simplotope.coords(point))

    def derivative_terms(self, directions: Sequence[Sequence]) -> dict[tuple[int, ...], dict]:
        """Mixed derivative along ``directions`` as a sum of tensor coefficient maps.

        Returns ``{degrees: coefficients}``.  Each direction is split into
        per-block directional coordinates and the product rule applied.
        """
        terms = {self.degrees: dict(self.coefficients)}
        for u in directions:
            split = self.simplotope.direction_split(u)
            nxt: dict = {}
            for deg, coeffs in terms.items():
                for i, si in enumerate(split):
                    if deg[i] == 0 or not any(si):
                        continue
                    c = de_casteljau_block(coeffs, i, si, 1)
                    new_deg = deg[:i] + (deg[i] - 1,) + deg[i + 1:]
                    acc = nxt.setdefault(new_deg, {k: Fraction(0) for k in c})
                    for k, v in c.items():
                        acc[k] += deg[i] * v
            terms = nxt
        return terms

    def bnet(self) -> BNet:
        return domain_points(self.simplotope, self.degrees)


def _eval_blocked(coeffs: Mapping[BlockedMultiIndex, Fraction], degrees: Sequence[int], a: Sequence[Sequence]) -> Fraction:
    a = [to_vector(ai) for ai in a]
    tables = [_basis_table(d, ai) for d, ai in zip(degrees, a)]
    total = Fraction(0)
    for kb, c in coeffs.items():
        if c:
            total += c * prod((t[k] for t, k in zip(tables, kb)), start=Fraction(1))
    return total


Polynomial = Union[SimplexPolynomial, TensorPolynomial]


def mixed_derivative(poly: Polynomial, directions: Sequence[Sequence], at: Sequence) -> Fraction:
    """Value at ``at`` of the derivative along each vector in ``directions`` in turn."""
    if isinstance(poly, SimplexPolynomial):
        b = poly.simplex.barycentric(at)
        cur = poly
        for u in directions:
            cur = cur.derivative(u, 1)
        return cur.evaluate_barycentric(b)
    if isinstance(poly, TensorPolynomial):
        a = poly.simplotope.coords(at)
        terms = poly.derivative_terms(directions)
        return sum((_eval_blocked(c, deg, a) for deg, c in terms.items()), Fraction(0))
    raise TypeError(f"expected a polynomial, got {type(poly).__name__}")


def directional_derivative(poly: Polynomial, u: Sequence, r: int, at: Sequence) -> Fraction:
    """``r``-th derivative of ``poly`` along ``u`` evaluated at the point ``at``."""
    if r < 0:
        raise ValueError(f"negative order {r}")
    if isinstance(poly, SimplexPolynomial) and r > poly.degree:
        poly.simplex.direction_coords(u)
        return Fraction(0)
    return mixed_derivative(poly, [u] * r, at)
