"""Exact affine geometry of simplices and simplotopes.

A :class:`Simplotope` is stored as a base point plus, per factor simplex, the
displacement vectors of its non-base vertices (the base vertex of every block
is the zero displacement).  Vertices of the product are addressed by a
*choice* tuple ``(j_1, ..., j_l)`` picking one vertex per block.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from ._exact import Vector, _frac, _qq, nullspace, rank, to_vector, vadd, vsub

__all__ = [
    "GeometryError",
    "DegenerateError",
    "NotInAffineHull",
    "Simplex",
    "Simplotope",
    "NormalBlock",
    "NormalForm",
    "SharedFacetInfo",
    "Cospatiality",
    "barycentric",
    "direction_coords",
    "detect_shared_facet",
    "is_oof_cospatial",
    "cospatiality",
    "facet_of",
    "span_intersection",
]


class GeometryError(ValueError):
    pass


class DegenerateError(GeometryError):
    """Vertices are affinely dependent."""


class NotInAffineHull(GeometryError):
    """A point (or vector) is outside the affine hull (or direction space)."""


class _LeftInverse:
    """Exact left inverse of a full-column-rank matrix given by its columns."""

    def __init__(self, columns: Sequence[Vector], ambient: int):
        self.columns = [tuple(c) for c in columns]
        self.ambient = ambient
        k = len(self.columns)
        if k == 0:
            self.rows: list[list[Fraction]] = []
            return
        if rank([list(c) for c in self.columns], ambient) < k:
            raise DegenerateError("edge vectors are linearly dependent")
        e = DomainMatrix([[_qq(self.columns[j][i]) for j in range(k)] for i in range(ambient)], (ambient, k), QQ)
        et = e.transpose()
        left = (et * e).inv() * et
        self.rows = [[_frac(x) for x in r] for r in left.to_list()]

    def __call__(self, v: Sequence[Fraction]) -> list[Fraction]:
        lam = [sum((r[i] * v[i] for i in range(self.ambient) if v[i]), Fraction(0)) for r in self.rows]
        # reconstruct to reject vectors outside the column space
        recon = [Fraction(0)] * self.ambient
        for lj, col in zip(lam, self.columns):
            if lj:
                for i, x in enumerate(col):
                    recon[i] += lj * x
        if any(a != b for a, b in zip(recon, v)):
            raise NotInAffineHull("vector is not in the span of the edge vectors")
        return lam


@dataclass(frozen=True)
class Simplex:
    """Convex hull of affinely independent rational vertices."""

    vertices: tuple[Vector, ...]

    def __init__(self, vertices: Iterable[Iterable]):
        verts = tuple(to_vector(v) for v in vertices)
        if not verts:
            raise DegenerateError("a simplex needs at least one vertex")
        if len({len(v) for v in verts}) != 1:
            raise GeometryError("vertices have inconsistent ambient dimension")
        object.__setattr__(self, "vertices", verts)
        self._edges_inverse  # validates affine independence

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @cached_property
    def _edges_inverse(self) -> _LeftInverse:
        v0 = self.vertices[0]
        return _LeftInverse([vsub(v, v0) for v in self.vertices[1:]], self.ambient_dim)

    def barycentric(self, point: Sequence) -> tuple[Fraction, ...]:
        p = to_vector(point)
        if len(p) != self.ambient_dim:
            raise GeometryError("point has the wrong ambient dimension")
        lam = self._edges_inverse(vsub(p, self.vertices[0]))
        return (1 - sum(lam, Fraction(0)), *lam)

    def direction_coords(self, u: Sequence) -> tuple[Fraction, ...]:
        u = to_vector(u)
        if len(u) != self.ambient_dim:
            raise GeometryError("vector has the wrong ambient dimension")
        lam = self._edges_inverse(u)
        return (-sum(lam, Fraction(0)), *lam)

    def point(self, weights: Sequence[Fraction]) -> Vector:
        out = [Fraction(0)] * self.ambient_dim
        for w, v in zip(weights, self.vertices, strict=True):
            if w:
                for i, x in enumerate(v):
                    out[i] += w * x
        return tuple(out)

    def centroid(self) -> Vector:
        return self.point([Fraction(1, len(self.vertices))] * len(self.vertices))


def barycentric(simplex: Simplex, point: Sequence) -> tuple[Fraction, ...]:
    return simplex.barycentric(point)


def direction_coords(simplex: Simplex, u: Sequence) -> tuple[Fraction, ...]:
    return simplex.direction_coords(u)


@dataclass(frozen=True)
class Simplotope:
    """Product of simplices, ``base + conv(W_1) + ... + conv(W_l)``.

    ``blocks[i]`` lists the displacement vectors ``w_i1 .. w_i,nu_i``; the
    implicit ``w_i0`` is the zero vector.  Zero-dimensional blocks are empty
    tuples.
    """

    base: Vector
    blocks: tuple[tuple[Vector, ...], ...]

    def __init__(self, base: Iterable, blocks: Iterable[Iterable[Iterable]]):
        b = to_vector(base)
        blks = tuple(tuple(to_vector(w) for w in block) for block in blocks)
        if not blks:
            raise GeometryError("a simplotope needs at least one block")
        for block in blks:
            for w in block:
                if len(w) != len(b):
                    raise GeometryError("displacement vector has the wrong ambient dimension")
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "blocks", blks)
        self._edges_inverse

    @classmethod
    def from_simplex(cls, simplex: Simplex, pad: int = 0) -> "Simplotope":
        """One-block simplotope (plus ``pad`` zero-dimensional blocks)."""
        v0 = simplex.vertices[0]
        return cls(v0, [[vsub(v, v0) for v in simplex.vertices[1:]]] + [[] for _ in range(pad)])

    @property
    def nu(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def dim(self) -> int:
        return sum(self.nu)

    @property
    def ambient_dim(self) -> int:
        return len(self.base)

    @property
    def ell(self) -> int:
        return len(self.blocks)

    @cached_property
    def _edges_inverse(self) -> _LeftInverse:
        cols = [w for block in self.blocks for w in block]
        return _LeftInverse(cols, self.ambient_dim)

    def block_vertices(self, i: int) -> tuple[Vector, ...]:
        """Displacements of block ``i`` including the zero base displacement."""
        zero = tuple(Fraction(0) for _ in self.base)
        return (zero, *self.blocks[i])

    def block_simplex(self, i: int) -> Simplex:
        return Simplex(self.block_vertices(i))

    def choices(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(n + 1) for n in self.nu)))

    def vertex(self, choice: Sequence[int]) -> Vector:
        p = self.base
        for i, j in enumerate(choice):
            if j:
                p = vadd(p, self.blocks[i][j - 1])
        return p

    def vertices(self) -> dict[tuple[int, ...], Vector]:
        return {c: self.vertex(c) for c in self.choices()}

    def direction_split(self, u: Sequence) -> tuple[tuple[Fraction, ...], ...]:
        """Per-block directional coordinates of a vector (each block sums to zero)."""
        lam = self._edges_inverse(to_vector(u))
        out, pos = [], 0
        for n in self.nu:
            part = lam[pos:pos + n]
            pos += n
            out.append((-sum(part, Fraction(0)), *part))
        return tuple(out)

    def coords(self, point: Sequence) -> tuple[tuple[Fraction, ...], ...]:
        """Per-block barycentric coordinates of a point in the affine hull."""
        p = to_vector(point)
        lam = self._edges_inverse(vsub(p, self.base))
        out, pos = [], 0
        for n in self.nu:
            part = lam[pos:pos + n]
            pos += n
            out.append((1 - sum(part, Fraction(0)), *part))
        return tuple(out)

    def point(self, coords: Sequence[Sequence[Fraction]]) -> Vector:
        p = list(self.base)
        for i, a in enumerate(coords):
            if len(a) != self.nu[i] + 1:
                raise GeometryError(f"block {i} coordinates have length {len(a)}, expected {self.nu[i] + 1}")
            for w, x in zip(self.blocks[i], a[1:]):
                if x:
                    for t, wt in enumerate(w):
                        p[t] += x * wt
        return tuple(p)

    def direction_space(self) -> list[Vector]:
        return [w for block in self.blocks for w in block]


def facet_of(p: Simplotope, eps: Sequence[int]) -> Simplotope:
    """Facet obtained by dropping the last vertex of the block selected by ``eps``."""
    if sum(eps) != 1 or any(e not in (0, 1) for e in eps) or len(eps) != p.ell:
        raise GeometryError(f"eps must be a unit multi-index of length {p.ell}, got {tuple(eps)}")
    i = list(eps).index(1)
    if p.nu[i] == 0:
        raise GeometryError(f"block {i} is zero-dimensional and has no facet")
    blocks = [list(b) for b in p.blocks]
    blocks[i] = blocks[i][:-1]
    return Simplotope(p.base, blocks)


# -- shared facets ------------------------------------------------------------

@dataclass(frozen=True)
class NormalBlock:
    """One block of a pair in normal form.

    ``source`` is the caller's block index (``None`` for padding) and
    ``order[j]`` the caller's vertex index of normalized vertex ``j``.
    ``vertices`` are displacements from the shared frame base.
    """

    source: int | None
    order: tuple[int, ...]
    vertices: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class NormalForm:
    """Block-aligned form of a facet-sharing pair.

    ``left`` carries its out-of-facet block at position 0 (last vertex is the
    out-of-facet vertex); ``right`` at the last position.  All other positions
    coincide as point sets, and ``left[0]`` minus its last vertex equals
    ``right[0]``, ``right[-1]`` minus its last vertex equals ``left[-1]``.
    ``swapped`` is true when ``left`` is the caller's second simplotope.
    """

    base: Vector
    left: tuple[NormalBlock, ...]
    right: tuple[NormalBlock, ...]
    swapped: bool

    @property
    def ell(self) -> int:
        return len(self.left)

    @property
    def nu_left(self) -> tuple[int, ...]:
        return tuple(b.dim for b in self.left)

    @property
    def nu_right(self) -> tuple[int, ...]:
        return tuple(b.dim for b in self.right)

    def simplotope(self, side: str) -> Simplotope:
        blocks = self.left if side == "left" else self.right
        return Simplotope(self.base, [b.vertices[1:] for b in blocks])


@dataclass(frozen=True)
class SharedFacetInfo:
    """Result of :func:`detect_shared_facet`, in the caller's block order."""

    eps: tuple[int, ...]
    eps_tilde: tuple[int, ...]
    oof_block_left: int
    oof_block_right: int
    oof_vertex_left: int
    oof_vertex_right: int
    vertex_correspondence: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    facet_vertices: tuple[Vector, ...]
    factor_matching: tuple[tuple[int, int], ...]
    normal: NormalForm | None = field(default=None, compare=False)

    @property
    def aligned(self) -> bool:
        """Whether the pair admits the block normal form (see :class:`NormalForm`)."""
        return self.normal is not None

    def facet_directions(self) -> list[Vector]:
        x0 = self.facet_vertices[0]
        return [vsub(v, x0) for v in self.facet_vertices[1:]]

    def inverted(self) -> "SharedFacetInfo":
        return SharedFacetInfo(
            eps=self.eps_tilde,
            eps_tilde=self.eps,
            oof_block_left=self.oof_block_right,
            oof_block_right=self.oof_block_left,
            oof_vertex_left=self.oof_vertex_right,
            oof_vertex_right=self.oof_vertex_left,
            vertex_correspondence=tuple(sorted((q, p) for p, q in self.vertex_correspondence)),
            facet_vertices=self.facet_vertices,
            factor_matching=tuple(sorted((q, p) for p, q in self.factor_matching)),
            normal=self.normal,
        )


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(t == i) for t in range(n))


def _block_displacements(s: Simplotope, choice: Sequence[int], i: int) -> dict[int, Vector]:
    """Vertex index -> displacement from the vertex picked by ``choice`` in block ``i``."""
    verts = s.block_vertices(i)
    ref = verts[choice[i]]
    return {j: vsub(v, ref) for j, v in enumerate(verts)}


def detect_shared_facet(p: Simplotope, q: Simplotope) -> SharedFacetInfo | None:
    """Find a common facet of two simplotopes, or ``None``.

    Facets are matched by exact vertex coincidence.  When the pair admits it,
    the result carries a :class:`NormalForm` whose frame is anchored at the
    lexicographically smallest shared vertex.
    """
    if p.ambient_dim != q.ambient_dim:
        raise GeometryError(f"ambient dimensions differ: {p.ambient_dim} != {q.ambient_dim}")
    if p.dim != q.dim:
        return None
    pv, qv = p.vertices(), q.vertices()
    found = None
    for a in range(p.ell):
        for ja in range(p.nu[a] + 1) if p.nu[a] else ():
            sp = {pt for c, pt in pv.items() if c[a] != ja}
            for b in range(q.ell):
                for jb in range(q.nu[b] + 1) if q.nu[b] else ():
                    sq = {pt for c, pt in qv.items() if c[b] != jb}
                    if sp == sq:
                        found = (a, ja, b, jb, sp)
                        break
                if found:
                    break
            if found:
                break
        if found:
            break
    if not found:
        return None
    a, ja, b, jb, shared = found
    p_of = {pt: c for c, pt in pv.items() if c[a] != ja}
    q_of = {pt: c for c, pt in qv.items() if c[b] != jb}
    facet = tuple(sorted(shared))
    x0 = facet[0]
    cp, cq = p_of[x0], q_of[x0]

    # factors of the facet, as displacement sets seen from x0
    def factors(s, choice, oof, jdrop):
        out = {}
        for i in range(s.ell):
            disp = _block_displacements(s, choice, i)
            if i == oof:
                disp = {j: d for j, d in disp.items() if j != jdrop}
            out[i] = disp
        return out

    fp, fq = factors(p, cp, a, ja), factors(q, cq, b, jb)
    key = lambda disp: frozenset(d for d in disp.values() if any(d))
    matching = []
    q_by_key = {}
    for i, disp in fq.items():
        if len(disp) > 1:
            q_by_key.setdefault(key(disp), []).append(i)
    for i, disp in fp.items():
        if len(disp) > 1:
            cands = q_by_key.get(key(disp))
            if not cands:
                raise GeometryError("facets coincide as point sets but their product structures differ")
            matching.append((i, cands.pop(0)))
    if any(q_by_key.values()):
        raise GeometryError("facets coincide as point sets but their product structures differ")

    corr = tuple(sorted((p_of[pt], q_of[pt]) for pt in facet))
    info = SharedFacetInfo(
        eps=_unit(p.ell, a),
        eps_tilde=_unit(q.ell, b),
        oof_block_left=a,
        oof_block_right=b,
        oof_vertex_left=ja,
        oof_vertex_right=jb,
        vertex_correspondence=corr,
        facet_vertices=facet,
        factor_matching=tuple(sorted(matching)),
    )
    normal = _normal_form(p, q, info, cp, cq, fp, fq)
    return replace(info, normal=normal)


def _normal_form(p, q, info, cp, cq, fp, fq) -> NormalForm | None:
    a, b = info.oof_block_left, info.oof_block_right
    ja, jb = info.oof_vertex_left, info.oof_vertex_right
    pm = dict(info.factor_matching)
    if p.nu[a] > q.nu[b]:
        # left must carry the lower-dimensional out-of-facet simplex
        return _build_normal(q, p, b, jb, a, ja, {v: k for k, v in pm.items()}, cq, cp, fq, fp, swapped=True)
    return _build_normal(p, q, a, ja, b, jb, pm, cp, cq, fp, fq, swapped=False)


def _build_normal(L, R, a, ja, b, jb, match, cl, cr, fl, fr, swapped) -> NormalForm | None:
    # match: left facet factor -> right facet factor (positive-dimensional only)
    if match.get(a) == b:
        return None  # out-of-facet facets coincide with each other: no block alignment
    zero = tuple(Fraction(0) for _ in L.base)

    def ordered_left(i, drop=None):
        disp = fl[i]
        first = cl[i]
        rest = [j for j in sorted(disp) if j not in (first, drop)]
        order = [first] + rest + ([drop] if drop is not None else [])
        verts = _block_displacements(L, cl, i)
        return NormalBlock(i, tuple(order), tuple(verts[j] for j in order))

    def aligned_right(j, disps, drop=None):
        # right block j with vertices ordered to match the displacements ``disps``
        verts = _block_displacements(R, cr, j)
        by_disp = {d: idx for idx, d in verts.items() if idx != drop}
        order = [by_disp[d] for d in disps] + ([drop] if drop is not None else [])
        return NormalBlock(j, tuple(order), tuple(verts[o] for o in order))

    pad = NormalBlock(None, (0,), (zero,))
    zero_left = [i for i in range(L.ell) if L.nu[i] == 0]
    zero_right = [j for j in range(R.ell) if R.nu[j] == 0]

    # position 1: left oof block and its facet partner on the right
    pos1_left = ordered_left(a, drop=ja)
    if L.nu[a] >= 2:
        pos1_right = aligned_right(match[a], pos1_left.vertices[:-1])
        used_right = {match[a]}
    else:
        if zero_right:
            j = zero_right.pop(0)
            pos1_right = NormalBlock(j, (0,), (zero,))
        else:
            pos1_right = pad
        used_right = set()
    # position l: right oof block and its facet partner on the left
    inv = {v: k for k, v in match.items()}
    if R.nu[b] >= 2:
        i = inv[b]
        posl_left = ordered_left(i)
        posl_right = aligned_right(b, posl_left.vertices, drop=jb)
        used_left = {i}
    else:
        first = cr[b]
        verts_r = _block_displacements(R, cr, b)
        posl_right = NormalBlock(b, (first, jb), (verts_r[first], verts_r[jb]))
        if zero_left:
            i = zero_left.pop(0)
            posl_left = NormalBlock(i, (0,), (zero,))
        else:
            posl_left = pad
        used_left = set()

    middle = []
    for i in sorted(match):
        if i == a or i in used_left:
            continue
        j = match[i]
        if j == b or j in used_right:
            continue
        lb = ordered_left(i)
        middle.append((lb, aligned_right(j, lb.vertices)))
    while zero_left or zero_right:
        lb = NormalBlock(zero_left.pop(0), (0,), (zero,)) if zero_left else pad
        rb = NormalBlock(zero_right.pop(0), (0,), (zero,)) if zero_right else pad
        middle.append((lb, rb))

    left = (pos1_left, *(m[0] for m in middle), posl_left)
    right = (pos1_right, *(m[1] for m in middle), posl_right)
    base = L.vertex(cl)
    return NormalForm(base=base, left=left, right=right, swapped=swapped)


# -- cospatiality -------------------------------------------------------------

def span_intersection(us: Sequence[Vector], vs: Sequence[Vector], ambient: int) -> list[Vector]:
    """Basis of ``span(us) ∩ span(vs)`` (exact)."""
    if not us or not vs:
        return []
    cols = list(us) + [tuple(-x for x in v) for v in vs]
    rows = [[c[i] for c in cols] for i in range(ambient)]
    ns = nullspace(rows, len(cols))
    basis = []
    for coeffs in ns:
        vec = [Fraction(0)] * ambient
        for c, u in zip(coeffs[: len(us)], us):
            if c:
                for i, x in enumerate(u):
                    vec[i] += c * x
        basis.append(tuple(vec))
    # drop dependent vectors (us/vs may themselves be dependent)
    out: list[Vector] = []
    for v in basis:
        if rank([list(w) for w in out + [v]], ambient) > len(out):
            out.append(v)
    return out


@dataclass(frozen=True)
class Cospatiality:
    """Diagnosis of the out-of-facet cospatiality test.

    ``dim_common`` is ``dim(U ∩ Ũ)`` for the spans of the two out-of-facet
    simplices, ``dim_common_in_facet`` the dimension of its part parallel to
    the shared facet.  The pair is cospatial when some common direction is
    transversal to the facet.
    """

    cospatial: bool
    dim_common: int
    dim_common_in_facet: int
    common_basis: tuple[Vector, ...]
    test: str = "transversal common direction: dim(U∩Ũ) > dim(U∩Ũ∩T)"


def _oof_spans(p: Simplotope, q: Simplotope, info: SharedFacetInfo):
    return list(p.blocks[info.oof_block_left]), list(q.blocks[info.oof_block_right])


def cospatiality(p: Simplotope, q: Simplotope, info: SharedFacetInfo) -> Cospatiality:
    u_span, ut_span = _oof_spans(p, q, info)
    n = p.ambient_dim
    common = span_intersection(u_span, ut_span, n)
    tangent = info.facet_directions()
    in_facet = span_intersection(common, tangent, n) if common and tangent else []
    return Cospatiality(
        cospatial=len(common) > len(in_facet),
        dim_common=len(common),
        dim_common_in_facet=len(in_facet),
        common_basis=tuple(common),
    )


def is_oof_cospatial(p: Simplotope, q: Simplotope, info: SharedFacetInfo) -> bool:
    return cospatiality(p, q, info).cospatial
