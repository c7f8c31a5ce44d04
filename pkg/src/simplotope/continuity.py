"""Linear C^r continuity conditions between adjacent patches.

Two entry points:

* :func:`simplex_conditions` for two simplices sharing a facet, equating the
  De Casteljau iterates of the coefficients along a transversal direction.
* :func:`mixed_conditions` for two simplotopes of possibly different type
  sharing a facet whose out-of-facet simplices have a common transversal
  direction ``u``.

For mixed pairs the derivative along ``u`` only involves the out-of-facet
block of each patch.  Restricted to the shared facet, the ``rho``-th
derivative of the left patch is a tensor polynomial whose first facet factor
has degree ``delta_1 - rho``, while on the right it is the last facet factor
that loses ``rho``.  ``mode="sound"`` (default) raises the out-of-facet block
of each side by ``rho`` first, so both restrictions share the facet degrees
``delta``, and keeps the per-block derivative factor
``E!/(E - rho)!`` of each side.  The resulting conditions are necessary and
sufficient.

``mode="literal"`` instead keeps the left side at ``delta``, moves ``rho`` from
the first to the last block on the right (raise, then lower), and drops the
derivative factors.  This reproduces the classical textbook-style identities
but is not sufficient in general: when the two out-of-facet blocks have
different degrees after redistribution the dropped factors do not cancel, and
lowering silently assumes the right patch is degree-reducible in its first
block.  It is kept for comparison only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Any, Mapping, Sequence

from ._exact import Vector, fmt, rref, to_vector
from .circumscribe import UnsupportedPair, circumscribe_pair
from .degree_ops import local_weights, lower_weights, raise_weights
from .geometry import (
    Cospatiality,
    GeometryError,
    SharedFacetInfo,
    Simplex,
    Simplotope,
    cospatiality,
    detect_shared_facet,
    span_intersection,
)
from .multiindex import enumerate_blocked, enumerate_indices

__all__ = [
    "CoefficientRef",
    "LinearCondition",
    "ConditionSet",
    "SmoothnessMatrix",
    "NotCospatial",
    "DegreeMismatch",
    "NoSharedFacet",
    "BadDirection",
    "AssemblyError",
    "UnsupportedPair",
    "simplex_conditions",
    "choose_direction",
    "mixed_conditions",
    "pair_conditions",
    "assemble_smoothness_matrix",
]


class NotCospatial(GeometryError):
    """The out-of-facet simplices have no common direction transversal to the facet."""

    def __init__(self, message: str, diagnosis: Cospatiality | None = None):
        super().__init__(message)
        self.diagnosis = diagnosis


class DegreeMismatch(ValueError):
    pass


class NoSharedFacet(GeometryError):
    pass


class BadDirection(GeometryError):
    """A supplied direction is not admissible for the pair."""


class AssemblyError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CoefficientRef:
    patch: str
    index: tuple


@dataclass(frozen=True)
class LinearCondition:
    """Homogeneous condition ``sum(weight * coefficient) = 0``; first weight is +1."""

    terms: tuple[tuple[CoefficientRef, Fraction], ...]

    def weight(self, patch: str, index: tuple) -> Fraction:
        for ref, w in self.terms:
            if ref.patch == patch and ref.index == index:
                return w
        return Fraction(0)

    def as_dict(self) -> dict[CoefficientRef, Fraction]:
        return dict(self.terms)

    def evaluate(self, values: Mapping[CoefficientRef, Fraction]) -> Fraction:
        return sum((w * values[ref] for ref, w in self.terms), Fraction(0))


@dataclass(frozen=True)
class ConditionSet:
    order: int
    conditions: tuple[LinearCondition, ...]
    direction: Vector
    metadata: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.conditions)

    def patches(self) -> tuple[str, ...]:
        return tuple(self.metadata.get("patches", ()))

    def refs(self) -> list[CoefficientRef]:
        """All coefficients of the two patches in canonical column order."""
        out = []
        for pid, (nu, delta) in zip(self.metadata["patches"], self.metadata["shapes"]):
            out.extend(CoefficientRef(pid, k) for k in enumerate_blocked(nu, delta))
        return out

    def matrix(self, columns: Sequence[CoefficientRef] | None = None) -> list[list[Fraction]]:
        columns = list(columns) if columns is not None else self.refs()
        pos = {c: i for i, c in enumerate(columns)}
        rows = []
        for cond in self.conditions:
            row = [Fraction(0)] * len(columns)
            for ref, w in cond.terms:
                row[pos[ref]] += w
            rows.append(row)
        return rows

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "direction": [fmt(x) for x in self.direction],
            "conditions": [
                {
                    "terms": [
                        {"patch": ref.patch, "index": [list(b) for b in ref.index], "weight": fmt(w)}
                        for ref, w in cond.terms
                    ]
                }
                for cond in self.conditions
            ],
            "metadata": _jsonable(self.metadata),
        }


def _jsonable(x: Any):
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _make_condition(form: Mapping[CoefficientRef, Fraction], patch_rank: Mapping[str, int]) -> LinearCondition | None:
    items = [(ref, w) for ref, w in form.items() if w]
    if not items:
        return None
    items.sort(key=lambda t: t[0].index, reverse=True)
    items.sort(key=lambda t: patch_rank[t[0].patch])
    lead = items[0][1]
    return LinearCondition(tuple((ref, w / lead) for ref, w in items))


# -- De Casteljau weights ----------------------------------------------------------

def _dc_weights(slots: int, deg_after: int, s: Sequence[Fraction], rho: int, facet_slot: int | None = None):
    """``kappa -> [(kappa + mu, rho!/mu! s^mu)]`` for ``|kappa| = deg_after``.

    With ``facet_slot`` set, only ``kappa`` with a zero entry there are produced.
    """
    mus = []
    for mu in enumerate_indices(slots, rho):
        w = Fraction(factorial(rho))
        for mj, sj in zip(mu, s):
            if mj:
                w = w * sj**mj / factorial(mj)
        if w:
            mus.append((mu, w))
    out = {}
    for kappa in enumerate_indices(slots, deg_after):
        if facet_slot is not None and kappa[facet_slot]:
            continue
        out[kappa] = [(tuple(a + b for a, b in zip(kappa, mu)), w) for mu, w in mus]
    return out


# -- simplex pairs ----------------------------------------------------------------

def _shared_simplex_facet(left: Simplex, right: Simplex):
    if left.ambient_dim != right.ambient_dim or left.dim != right.dim:
        raise NoSharedFacet("simplices differ in dimension")
    rpos = {v: j for j, v in enumerate(right.vertices)}
    corr = {i: rpos[v] for i, v in enumerate(left.vertices) if v in rpos}
    if len(corr) != left.dim:
        raise NoSharedFacet("simplices do not share a facet")
    oof_l = next(i for i in range(len(left.vertices)) if i not in corr)
    oof_r = next(j for j in range(len(right.vertices)) if j not in corr.values())
    return corr, oof_l, oof_r


def _default_simplex_direction(left: Simplex, right: Simplex) -> Vector:
    """Edge from the first shared vertex to the left out-of-facet vertex."""
    corr, oof_l, _ = _shared_simplex_facet(left, right)
    return tuple(a - b for a, b in zip(left.vertices[oof_l], left.vertices[min(corr)]))


def simplex_conditions(
    left: Simplex,
    right: Simplex,
    degree: int,
    r: int,
    u: Sequence | None = None,
    *,
    ids: tuple[str, str] = ("P", "Q"),
) -> ConditionSet:
    """Conditions for C^r continuity of two degree-``degree`` simplex patches.

    ``u`` defaults to the edge from a shared vertex to the left out-of-facet
    vertex.  Indices in the result are wrapped as one-block indices.
    """
    corr, oof_l, oof_r = _shared_simplex_facet(left, right)
    u = _default_simplex_direction(left, right) if u is None else to_vector(u)
    s = left.direction_coords(u)
    st = right.direction_coords(u)
    if s[oof_l] == 0:
        raise BadDirection("direction is parallel to the shared facet")
    slots = len(left.vertices)
    rank = {ids[0]: 0, ids[1]: 1}
    conds = []
    for rho in range(r + 1):
        if rho > degree:
            break
        wl = _dc_weights(slots, degree - rho, s, rho, facet_slot=oof_l)
        wr = _dc_weights(slots, degree - rho, st, rho, facet_slot=oof_r)
        for kappa, terms in wl.items():
            kt = [0] * slots
            for i, j in corr.items():
                kt[j] = kappa[i]
            form: dict[CoefficientRef, Fraction] = {}
            for key, w in terms:
                ref = CoefficientRef(ids[0], (key,))
                form[ref] = form.get(ref, Fraction(0)) + w
            for key, w in wr[tuple(kt)]:
                ref = CoefficientRef(ids[1], (key,))
                form[ref] = form.get(ref, Fraction(0)) - w
            cond = _make_condition(form, rank)
            if cond is not None:
                conds.append(cond)
    meta = {
        "patches": list(ids),
        "shapes": [((left.dim,), (degree,)), ((right.dim,), (degree,))],
        "kind": "simplex",
        "mode": "sound",
    }
    return ConditionSet(order=r, conditions=tuple(conds), direction=u, metadata=meta)


# -- direction choice ----------------------------------------------------------------

def _oof_edges(info: SharedFacetInfo):
    nf = info.normal
    left_oof = nf.left[0].vertices
    right_oof = nf.right[-1].vertices
    return [v for v in left_oof[1:]], [v for v in right_oof[1:]]


def _check_cospatial(p: Simplotope, q: Simplotope, info: SharedFacetInfo) -> Cospatiality:
    diag = cospatiality(p, q, info)
    if not diag.cospatial:
        raise NotCospatial(
            "not out-of-facet cospatial: the out-of-facet simplices share no direction "
            f"transversal to the facet (dim of common span {diag.dim_common}, "
            f"of which {diag.dim_common_in_facet} parallel to the facet)",
            diag,
        )
    return diag


def choose_direction(p: Simplotope, q: Simplotope, info: SharedFacetInfo | None = None) -> Vector:
    """Transversal direction common to both out-of-facet simplices.

    Prefers the last edge of the left out-of-facet simplex in normal form
    (ending at the out-of-facet vertex); otherwise the lexicographically
    smallest vector of a reduced basis of the common span.
    """
    if info is None:
        info = detect_shared_facet(p, q)
        if info is None:
            raise NoSharedFacet("simplotopes do not share a facet")
    diag = _check_cospatial(p, q, info)
    if info.normal is None:
        bp, bq = _pure_simplex(p), _pure_simplex(q)
        if bp is None or bq is None:
            raise UnsupportedPair("the out-of-facet simplices meet in a common facet factor; no block normal form")
        return _default_simplex_direction(_as_simplex(p, bp), _as_simplex(q, bq))
    left_edges, right_edges = _oof_edges(info)
    n = p.ambient_dim
    cand = tuple(a - b for a, b in zip(left_edges[-1], info.normal.left[0].vertices[-2]))
    if _in_span(cand, right_edges, n):
        return cand
    basis, _ = rref([list(v) for v in diag.common_basis], n)
    vecs = sorted(tuple(row) for row in basis)
    return vecs[0]


def _in_span(v: Sequence[Fraction], span: Sequence[Sequence[Fraction]], n: int) -> bool:
    return bool(span_intersection([tuple(v)], list(span), n))


def _validate_direction(u: Vector, info: SharedFacetInfo, n: int) -> None:
    left_edges, right_edges = _oof_edges(info)
    if not any(u):
        raise BadDirection("direction is zero")
    if not _in_span(u, left_edges, n) or not _in_span(u, right_edges, n):
        raise BadDirection("direction does not lie in both out-of-facet simplices' spans")
    tangent = info.facet_directions()
    if tangent and _in_span(u, tangent, n):
        raise BadDirection("direction is parallel to the shared facet")


# -- mixed pairs ----------------------------------------------------------------------

def _compose(outer: Mapping, inner: Mapping | None) -> dict:
    """Compose weight tables: ``target -> intermediate -> source``."""
    if inner is None:
        return dict(outer)
    out = {}
    for tgt, terms in outer.items():
        acc: dict = {}
        for mid, w in terms:
            for src, v in inner[mid]:
                acc[src] = acc.get(src, Fraction(0)) + w * v
        out[tgt] = tuple((k, v) for k, v in acc.items() if v)
    return out


def _to_caller(blocks, caller_nu, caller_delta, nkey) -> tuple:
    out: list = [None] * len(caller_nu)
    for pos, nb in enumerate(blocks):
        if nb.source is None:
            continue
        if caller_nu[nb.source] == 0:
            out[nb.source] = (caller_delta[nb.source],)
        else:
            idx = [0] * (caller_nu[nb.source] + 1)
            for j, o in enumerate(nb.order):
                idx[o] = nkey[pos][j]
            out[nb.source] = tuple(idx)
    return tuple(out)


def _pure_simplex(s: Simplotope) -> int | None:
    positive = [i for i, n in enumerate(s.nu) if n]
    return positive[0] if len(positive) == 1 else None


def _as_simplex(s: Simplotope, block: int) -> Simplex:
    return Simplex([tuple(b + x for b, x in zip(s.base, w)) for w in s.block_vertices(block)])


def _simplex_pair_conditions(p, q, delta, delta_q, r, u, ids):
    bp, bq = _pure_simplex(p), _pure_simplex(q)
    if bp is None or bq is None:
        raise UnsupportedPair(
            "pairs whose out-of-facet simplices meet in a common facet factor are only supported for simplices"
        )
    if delta[bp] != delta_q[bq]:
        raise DegreeMismatch(f"simplex degrees differ: {delta[bp]} != {delta_q[bq]}")
    cs = simplex_conditions(_as_simplex(p, bp), _as_simplex(q, bq), delta[bp], r, u, ids=ids)

    def wrap(s, b, delta_s, key):
        return tuple(key[0] if i == b else (delta_s[i],) for i in range(s.ell))

    conds = []
    for cond in cs.conditions:
        terms = []
        for ref, w in cond.terms:
            if ref.patch == ids[0]:
                terms.append((CoefficientRef(ids[0], wrap(p, bp, delta, ref.index)), w))
            else:
                terms.append((CoefficientRef(ids[1], wrap(q, bq, delta_q, ref.index)), w))
        conds.append(LinearCondition(tuple(terms)))
    meta = {
        "patches": list(ids),
        "shapes": [(p.nu, tuple(delta)), (q.nu, tuple(delta_q))],
        "kind": "simplex",
        "mode": "sound",
    }
    return ConditionSet(order=r, conditions=tuple(conds), direction=cs.direction, metadata=meta)


def mixed_conditions(
    p: Simplotope,
    q: Simplotope,
    delta: Sequence[int],
    r: int,
    *,
    delta_q: Sequence[int] | None = None,
    direction: Sequence | None = None,
    mode: str = "sound",
    ids: tuple[str, str] = ("P", "Q"),
    info: SharedFacetInfo | None = None,
) -> ConditionSet:
    """C^r conditions between tensor patches of degrees ``delta`` (on ``p``) and ``delta_q`` (on ``q``).

    ``delta_q`` defaults to ``delta`` when both patches have the same number
    of blocks.  Conditions for all orders ``0..r`` are stacked.  Indices refer
    to the caller's block and vertex order; zero-dimensional blocks carry
    their degree as label.
    """
    if mode not in ("sound", "literal"):
        raise ValueError(f"unknown mode {mode!r}")
    if r < 0:
        raise ValueError(f"negative order {r}")
    delta = tuple(int(x) for x in delta)
    if delta_q is None:
        if p.ell != q.ell:
            raise DegreeMismatch("delta_q is required when the patches have different block counts")
        delta_q = delta
    delta_q = tuple(int(x) for x in delta_q)
    if len(delta) != p.ell or len(delta_q) != q.ell:
        raise DegreeMismatch("degree vectors do not match the block counts")
    if any(x < 0 for x in delta + delta_q):
        raise DegreeMismatch("negative degree")
    if info is None:
        info = detect_shared_facet(p, q)
    if info is None:
        raise NoSharedFacet("simplotopes do not share a facet")
    _check_cospatial(p, q, info)
    if info.normal is None:
        return _simplex_pair_conditions(p, q, delta, delta_q, r, direction, ids)

    nf = info.normal
    n = p.ambient_dim
    if nf.swapped:
        lpatch, rpatch = q, p
        ldelta, rdelta = delta_q, delta
        lid, rid = ids[1], ids[0]
    else:
        lpatch, rpatch = p, q
        ldelta, rdelta = delta, delta_q
        lid, rid = ids
    ell = nf.ell
    dl = tuple(ldelta[b.source] if b.source is not None else 0 for b in nf.left)
    dr = tuple(rdelta[b.source] if b.source is not None else 0 for b in nf.right)
    nul, nur = nf.nu_left, nf.nu_right
    for i in range(ell):
        if nul[i] and nur[i] and i not in (0, ell - 1) and dl[i] != dr[i]:
            raise DegreeMismatch(f"degrees of the shared factor at position {i} differ: {dl[i]} != {dr[i]}")
    if nur[0] and dl[0] != dr[0]:
        raise DegreeMismatch(f"out-of-facet block degree {dl[0]} differs from its facet partner's {dr[0]}")
    if nul[-1] and dl[-1] != dr[-1]:
        raise DegreeMismatch(f"out-of-facet block degree {dr[-1]} differs from its facet partner's {dl[-1]}")

    u = to_vector(direction) if direction is not None else choose_direction(p, q, info)
    _validate_direction(u, info, n)

    # directional coordinates on the circumscribed simplices
    pair = circumscribe_pair(p, q, info)
    s_left = pair.left.simplex.direction_coords(pair.left.lift_direction(u))
    s_right = pair.right.simplex.direction_coords(pair.right.lift_direction(u))
    sl = [tuple(s_left[t] for t in part) for part in pair.left.partition]
    sr = [tuple(s_right[t] for t in part) for part in pair.right.partition]
    assert not any(itertools.chain.from_iterable(sl[1:])), "left direction leaves block 1"
    assert not any(itertools.chain.from_iterable(sr[:-1])), "right direction leaves block l"
    s1, sl_ = sl[0], sr[-1]

    keys_l = enumerate_blocked(nul, dl)
    keys_r = enumerate_blocked(nur, dr)
    patch_rank = {ids[0]: 0, ids[1]: 1}
    conds = []
    for rho in range(r + 1):
        if mode == "sound":
            el = (dl[0] + rho,) + dl[1:]
            er = dr[:-1] + (dr[-1] + rho,)
            pre_l = local_weights(raise_weights(nul[0] + 1, dl[0], rho), keys_l, 0)
            pre_r = local_weights(raise_weights(nur[-1] + 1, dr[-1], rho), keys_r, ell - 1)
            kl = Fraction(factorial(el[0]), factorial(el[0] - rho))
            kr = Fraction(factorial(er[-1]), factorial(er[-1] - rho))
        else:
            if dl[0] < rho:
                continue
            el = dl
            pre_l = {k: ((k, Fraction(1)),) for k in keys_l}
            er_raised = dr[:-1] + (dr[-1] + rho,)
            raised = local_weights(raise_weights(nur[-1] + 1, dr[-1], rho), keys_r, ell - 1)
            if nur[0]:
                if dr[0] < rho:
                    continue
                keys_mid = enumerate_blocked(nur, er_raised)
                lowered = local_weights(lower_weights(nur[0] + 1, dr[0] - rho, rho), keys_mid, 0)
                pre_r = _compose(lowered, raised)
                er = (dr[0] - rho,) + er_raised[1:]
            else:
                pre_r = raised
                er = er_raised
            kl = kr = Fraction(1)

        wl = _dc_weights(nul[0] + 1, el[0] - rho, s1, rho, facet_slot=nul[0])
        wr = _dc_weights(nur[-1] + 1, er[-1] - rho, sl_, rho, facet_slot=nur[-1])

        # facet factor indices position by position; zero-dimensional factors are ()
        facet_dims = [nul[0] - 1] + [nul[i] for i in range(1, ell - 1)] + [nur[-1] - 1]
        facet_degs = [el[0] - rho] + [dl[i] for i in range(1, ell - 1)] + [er[-1] - rho]
        per_pos = [enumerate_indices(fd + 1, g) if fd > 0 else [()] for fd, g in zip(facet_dims, facet_degs)]
        for fkey in itertools.product(*per_pos):
            lkey = []
            for i in range(ell):
                if i == 0:
                    lkey.append(fkey[0] + (0,) if facet_dims[0] > 0 else (el[0] - rho, 0))
                elif nul[i] == 0:
                    lkey.append((el[i],))
                else:
                    lkey.append(fkey[i])
            rkey = []
            for i in range(ell):
                if i == ell - 1:
                    rkey.append(fkey[-1] + (0,) if facet_dims[-1] > 0 else (er[-1] - rho, 0))
                elif nur[i] == 0:
                    rkey.append((er[i],))
                else:
                    rkey.append(fkey[i])
            form: dict[CoefficientRef, Fraction] = {}
            for local, w in wl[lkey[0]]:
                full = (local,) + tuple(lkey[1:])
                for src, v in pre_l[full]:
                    ref = CoefficientRef(lid, _to_caller(nf.left, lpatch.nu, ldelta, src))
                    form[ref] = form.get(ref, Fraction(0)) + kl * w * v
            for local, w in wr[rkey[-1]]:
                full = tuple(rkey[:-1]) + (local,)
                for src, v in pre_r[full]:
                    ref = CoefficientRef(rid, _to_caller(nf.right, rpatch.nu, rdelta, src))
                    form[ref] = form.get(ref, Fraction(0)) - kr * w * v
            cond = _make_condition(form, patch_rank)
            if cond is not None:
                conds.append(cond)

    meta = {
        "patches": list(ids),
        "shapes": [(p.nu, delta), (q.nu, delta_q)],
        "kind": "mixed",
        "mode": mode,
        "normal_form": {
            "left_patch": lid,
            "nu_left": list(nul),
            "nu_right": list(nur),
            "equal_out_of_facet_dims": nul[0] == nur[-1],
        },
        "s_left_block": list(s1),
        "s_right_block": list(sl_),
    }
    return ConditionSet(order=r, conditions=tuple(conds), direction=u, metadata=meta)


def pair_conditions(p: Simplotope, q: Simplotope, delta, r: int, **kw) -> ConditionSet:
    """Alias of :func:`mixed_conditions` (which also handles simplex pairs)."""
    return mixed_conditions(p, q, delta, r, **kw)


# -- assembly -------------------------------------------------------------------------

@dataclass(frozen=True)
class SmoothnessMatrix:
    """Sparse homogeneous system ``H c = 0`` in coordinate format."""

    entries: tuple[tuple[int, int, Fraction], ...]
    columns: tuple[CoefficientRef, ...]
    nrows: int
    row_sources: tuple[tuple[str, str, int], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, len(self.columns)

    def dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * len(self.columns) for _ in range(self.nrows)]
        for i, j, v in self.entries:
            out[i][j] = v
        return out

    def to_json(self) -> dict:
        return {
            "shape": list(self.shape),
            "entries": [[i, j, fmt(v)] for i, j, v in self.entries],
            "columns": [{"patch": c.patch, "index": [list(b) for b in c.index]} for c in self.columns],
        }


def assemble_smoothness_matrix(
    patches: Sequence[tuple[Simplotope, Sequence[int]]],
    adjacencies: Sequence[tuple[int, int]] | str,
    r: int,
    *,
    ids: Sequence[str] | None = None,
    mode: str = "sound",
) -> SmoothnessMatrix:
    """Stack the pairwise conditions of a small grid into one sparse matrix.

    ``adjacencies`` is a list of patch-index pairs or ``"auto"`` (every pair
    that shares a facet).  Columns are ordered by patch, then by index.
    """
    ids = list(ids) if ids is not None else [f"patch{i}" for i in range(len(patches))]
    if len(set(ids)) != len(ids):
        raise AssemblyError("patch ids must be unique")
    if adjacencies == "auto":
        adjacencies = [
            (i, j)
            for i, j in itertools.combinations(range(len(patches)), 2)
            if detect_shared_facet(patches[i][0], patches[j][0]) is not None
        ]
    columns = []
    for pid, (s, delta) in zip(ids, patches):
        columns.extend(CoefficientRef(pid, k) for k in enumerate_blocked(s.nu, delta))
    col = {c: i for i, c in enumerate(columns)}
    entries, sources = [], []
    row = 0
    for i, j in adjacencies:
        (pi, di), (pj, dj) = patches[i], patches[j]
        try:
            cs = mixed_conditions(pi, pj, di, r, delta_q=dj, ids=(ids[i], ids[j]), mode=mode)
        except (GeometryError, ValueError) as exc:
            raise AssemblyError(f"pair ({ids[i]}, {ids[j]}): {exc}") from exc
        for k, cond in enumerate(cs.conditions):
            for ref, w in cond.terms:
                entries.append((row, col[ref], w))
            sources.append((ids[i], ids[j], k))
            row += 1
    return SmoothnessMatrix(tuple(entries), tuple(columns), row, tuple(sources))
