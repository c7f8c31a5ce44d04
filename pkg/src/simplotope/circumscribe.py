"""Circumscribed simplices of simplotopes.

A simplotope of type ``nu`` with ``l`` blocks is a slice of an
``m``-simplex, ``m = |nu| + l - 1``: the vertices of the simplex are
partitioned into groups ``V_i`` (one per block, ``nu_i + 1`` vertices each)
and the slice is ``{b : sum_{j in V_i} b_j = alpha_i}``.  The standard
construction lifts vertex ``w_ij`` of block ``i`` to

    [x0 + l w_ij ; e_i]   for i < l,      [x0 + l w_lj ; -1]   for i = l,

with ``alpha_i = 1/l``.  The pair construction uses ``0`` instead of ``-1`` for
the last block, so that two facet-sharing simplotopes give two simplices
sharing a facet; the simplotope then sits at auxiliary offset ``(1/l, ..., 1/l)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._exact import Vector, fmt, to_vector
from .bernstein import BNet, domain_points
from .geometry import GeometryError, SharedFacetInfo, Simplex, Simplotope, detect_shared_facet
from .multiindex import split

__all__ = [
    "CircumscribedSimplex",
    "CircumscribedPair",
    "UnsupportedPair",
    "standard_circumscribe",
    "circumscribe_pair",
    "extract_bnet",
]


class UnsupportedPair(GeometryError):
    """The pair cannot be brought into the block normal form."""


@dataclass(frozen=True)
class CircumscribedSimplex:
    """An ``m``-simplex whose slice at weights ``alpha`` is ``source``.

    Vertices are ordered block by block; ``partition[i]`` lists the vertex
    positions of block ``i``.  ``offset`` is the auxiliary part of every point
    of the ``alpha``-slice.
    """

    simplex: Simplex
    partition: tuple[tuple[int, ...], ...]
    weights: tuple[Fraction, ...]
    source: Simplotope
    offset: Vector

    @property
    def nu(self) -> tuple[int, ...]:
        return tuple(len(p) - 1 for p in self.partition)

    @property
    def m(self) -> int:
        return self.simplex.dim

    def lift(self, point: Sequence) -> Vector:
        """Source point -> point of the simplex on the ``alpha``-slice."""
        return (*to_vector(point), *self.offset)

    def lift_direction(self, u: Sequence) -> Vector:
        """Source direction -> direction inside the slice (``l`` times ``u`` in the first coordinates)."""
        ell = len(self.partition)
        return (*(ell * x for x in to_vector(u)), *(Fraction(0) for _ in self.offset))

    def slice_coords(self, b: Sequence[Fraction]) -> tuple[tuple[Fraction, ...], ...]:
        """Barycentric coordinates of the simplex -> per-block coordinates on the source."""
        out = []
        for part in self.partition:
            chunk = [b[t] for t in part]
            total = sum(chunk, Fraction(0))
            if total == 0:
                raise GeometryError("block weight is zero; point is not on a proper slice")
            out.append(tuple(x / total for x in chunk))
        return tuple(out)

    def to_source(self, point: Sequence) -> Vector:
        """Map a point of any proper slice back onto the source simplotope."""
        return self.source.point(self.slice_coords(self.simplex.barycentric(point)))

    def recover_vertices(self) -> list[Vector]:
        """Vertices of the ``alpha``-slice, mapped back by dropping auxiliary coordinates.

        The slice points are built from the simplex vertices alone, so this is
        an independent check of the construction.
        """
        n = self.source.ambient_dim
        verts = self.simplex.vertices
        out = []
        for choice in self.source.choices():
            p = [Fraction(0)] * len(verts[0])
            for i, j in enumerate(choice):
                v = verts[self.partition[i][j]]
                for t, x in enumerate(v):
                    p[t] += self.weights[i] * x
            if tuple(p[n:]) != self.offset:
                raise GeometryError("slice vertex left the auxiliary offset")
            out.append(tuple(p[:n]))
        return out

    def tensor_bnet(self, delta: Sequence[int]) -> BNet:
        """B-net of degrees ``delta`` read off the simplex B-net, in source coordinates."""
        total = sum(delta)
        raw = extract_bnet(domain_points(self.simplex, total), delta, self.nu)
        return BNet(tuple((k, self.to_source(p)) for k, p in raw))

    def to_json(self, render_float: bool = False) -> dict:
        out = {
            "vertices": [[fmt(x) for x in v] for v in self.simplex.vertices],
            "partition": [list(p) for p in self.partition],
            "alpha": [fmt(a) for a in self.weights],
            "offset": [fmt(x) for x in self.offset],
        }
        if render_float:
            out["vertices_float"] = [[float(x) for x in v] for v in self.simplex.vertices]
        return out


def _lift_blocks(s: Simplotope, aux) -> tuple[list[Vector], tuple[tuple[int, ...], ...]]:
    ell = s.ell
    verts, parts, pos = [], [], 0
    for i in range(ell):
        part = []
        for w in s.block_vertices(i):
            verts.append((*(b + ell * x for b, x in zip(s.base, w)), *aux(i)))
            part.append(pos)
            pos += 1
        parts.append(tuple(part))
    return verts, tuple(parts)


def standard_circumscribe(p: Simplotope) -> CircumscribedSimplex:
    ell = p.ell

    def aux(i):
        if i < ell - 1:
            return tuple(Fraction(int(t == i)) for t in range(ell - 1))
        return tuple(Fraction(-1) for _ in range(ell - 1))

    verts, parts = _lift_blocks(p, aux)
    simplex = Simplex(verts)
    assert simplex.dim == p.dim + ell - 1
    return CircumscribedSimplex(
        simplex=simplex,
        partition=parts,
        weights=tuple(Fraction(1, ell) for _ in range(ell)),
        source=p,
        offset=tuple(Fraction(0) for _ in range(ell - 1)),
    )


def _pair_circumscribe(p: Simplotope) -> CircumscribedSimplex:
    ell = p.ell

    def aux(i):
        return tuple(Fraction(int(t == i)) for t in range(ell - 1))

    verts, parts = _lift_blocks(p, aux)
    return CircumscribedSimplex(
        simplex=Simplex(verts),
        partition=parts,
        weights=tuple(Fraction(1, ell) for _ in range(ell)),
        source=p,
        offset=tuple(Fraction(1, ell) for _ in range(ell - 1)),
    )


@dataclass(frozen=True)
class CircumscribedPair:
    """Circumscribed simplices of a normalized pair sharing ``m - 1`` vertices.

    ``left`` and ``right`` are built on the block normal form of ``info``
    (``left.source`` / ``right.source`` are the normalized simplotopes).
    """

    left: CircumscribedSimplex
    right: CircumscribedSimplex
    shared_vertices: tuple[tuple[int, int], ...]
    oof_vertex_left: int
    oof_vertex_right: int
    info: SharedFacetInfo


def circumscribe_pair(p: Simplotope, q: Simplotope, info: SharedFacetInfo | None = None) -> CircumscribedPair:
    if info is None:
        info = detect_shared_facet(p, q)
    if info is None:
        raise GeometryError("simplotopes do not share a facet")
    nf = info.normal
    if nf is None:
        raise UnsupportedPair("the out-of-facet simplices meet in a common facet factor; no block normal form")
    left = _pair_circumscribe(nf.simplotope("left"))
    right = _pair_circumscribe(nf.simplotope("right"))
    lv, rv = left.simplex.vertices, right.simplex.vertices
    r_pos = {v: i for i, v in enumerate(rv)}
    shared = tuple((i, r_pos[v]) for i, v in enumerate(lv) if v in r_pos)
    oof_l = [i for i, v in enumerate(lv) if v not in r_pos]
    oof_r = [j for j, v in enumerate(rv) if v not in set(lv)]
    if len(shared) != left.m or len(oof_l) != 1 or len(oof_r) != 1:
        raise GeometryError("circumscribed simplices do not share a facet")
    return CircumscribedPair(left, right, shared, oof_l[0], oof_r[0], info)


def extract_bnet(bnet: BNet, delta: Sequence[int], nu: Sequence[int]) -> BNet:
    """Entries of a simplex B-net at degree ``|delta|`` whose block sums equal ``delta``.

    Indices are returned blocked; points are left in the simplex's space.
    """
    if any(d < 0 for d in delta):
        raise ValueError(f"negative degree in {tuple(delta)}")
    sizes = [n + 1 for n in nu]
    total = sum(delta)
    out = []
    for k, pt in bnet:
        if sum(k) != total:
            raise ValueError(f"B-net degree {sum(k)} does not match |delta| = {total}")
        kb = split(k, sizes)
        if all(sum(ki) == di for ki, di in zip(kb, delta)):
            out.append((kb, pt))
    return BNet(tuple(out))
