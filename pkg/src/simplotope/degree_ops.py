"""Degree raising and lowering of Bernstein coefficients.

Both operators are linear, so they are built once as sparse weight tables
(``target -> ((source, weight), ...)``) and applied to coefficient maps.  The
tables are also what :mod:`simplotope.continuity` composes to move
conditions between degree structures.

Raising by ``k`` on a simplex:

    R^k c_kappa = d! k! / (d+k)!  *  sum_{|mu| = k} prod_j C(kappa_j, mu_j) c_{kappa - mu}

Lowering by ``k`` (pivot slot ``j``) is the closed-form left inverse

    c_k = k!/d! sum_{t=0}^{d-k_j} sum_{|sigma|=t, sigma_j=0}
          (-1)^t t!/sigma! C(k-1+t, t) (d+k)!/(k+rho)! C_{k+rho},
    rho = (t+k) e_j - sigma,

valid on coefficients that come from a polynomial of degree ``d``.
:func:`lower_by_solving` is an independent elimination-based oracle.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Mapping, Sequence

from ._exact import InconsistentSystem, solve, to_fraction
from .multiindex import BlockedMultiIndex, MultiIndex, enumerate_indices, mfactorial

__all__ = [
    "raise_",
    "lower",
    "raise_local",
    "lower_local",
    "raise_weights",
    "lower_weights",
    "local_weights",
    "lower_by_solving",
    "is_degree_reducible",
    "NotReducible",
]

Table = dict[tuple, tuple[tuple[tuple, Fraction], ...]]


class NotReducible(ValueError):
    """Coefficients do not represent a polynomial of the requested lower degree."""


@lru_cache(maxsize=None)
def raise_weights(slots: int, d: int, k: int) -> Table:
    """Weight table of raising from degree ``d`` to ``d + k``."""
    if k < 0:
        raise ValueError(f"raise amount must be >= 0, got {k}")
    scale = Fraction(factorial(d) * factorial(k), factorial(d + k))
    table = {}
    for kappa in enumerate_indices(slots, d + k):
        terms = []
        for mu in enumerate_indices(slots, k):
            src = tuple(a - b for a, b in zip(kappa, mu))
            if min(src) < 0:
                continue
            w = scale * prod(comb(a, b) for a, b in zip(kappa, mu))
            terms.append((src, w))
        table[kappa] = tuple(terms)
    return table


@lru_cache(maxsize=None)
def lower_weights(slots: int, d: int, k: int, pivot: int = 0) -> Table:
    """Weight table of lowering from degree ``d + k`` to ``d`` along pivot slot ``pivot``."""
    if k < 0:
        raise ValueError(f"lower amount must be >= 0, got {k}")
    if not 0 <= pivot < slots:
        raise ValueError(f"pivot {pivot} outside 0..{slots - 1}")
    if k == 0:
        return {kk: ((kk, Fraction(1)),) for kk in enumerate_indices(slots, d)}
    table = {}
    for kk in enumerate_indices(slots, d):
        terms = []
        lead = Fraction(mfactorial(kk), factorial(d))
        for t in range(d - kk[pivot] + 1):
            for sigma in enumerate_indices(slots, t):
                if sigma[pivot]:
                    continue
                idx = tuple(kk[i] + (t + k if i == pivot else -sigma[i]) for i in range(slots))
                if min(idx) < 0:
                    continue
                w = (
                    (-1) ** t
                    * Fraction(factorial(t), mfactorial(sigma))
                    * comb(k - 1 + t, t)
                    * Fraction(factorial(d + k), mfactorial(idx))
                    * lead
                )
                terms.append((idx, w))
        table[kk] = tuple(terms)
    return table


def _apply(table: Table, coeffs: Mapping) -> dict:
    return {
        tgt: sum((w * to_fraction(coeffs[src]) for src, w in terms), Fraction(0))
        for tgt, terms in table.items()
    }


def _shape(coeffs: Mapping[MultiIndex, Fraction]) -> tuple[int, int]:
    keys = list(coeffs)
    if not keys:
        raise ValueError("empty coefficient map")
    norms = {sum(x) for x in keys}
    if len(norms) != 1:
        raise ValueError("coefficient keys have mixed norms")
    return len(keys[0]), norms.pop()


def raise_(coeffs: Mapping[MultiIndex, Fraction], k: int) -> dict[MultiIndex, Fraction]:
    """Same polynomial written at degree ``d + k``."""
    slots, d = _shape(coeffs)
    return _apply(raise_weights(slots, d, k), coeffs)


def lower(coeffs: Mapping[MultiIndex, Fraction], k: int, pivot: int = 0) -> dict[MultiIndex, Fraction]:
    """Left inverse of :func:`raise_` (closed form).

    The input must represent a polynomial of degree ``d``; use
    :func:`is_degree_reducible` to check.
    """
    slots, dk = _shape(coeffs)
    if k > dk:
        raise ValueError(f"cannot lower degree {dk} by {k}")
    return _apply(lower_weights(slots, dk - k, k, pivot), coeffs)


def lower_by_solving(coeffs: Mapping[MultiIndex, Fraction], k: int) -> dict[MultiIndex, Fraction]:
    """Solve ``raise_(x, k) = coeffs`` by exact elimination.

    Raises :class:`NotReducible` if no solution exists.
    """
    slots, dk = _shape(coeffs)
    d = dk - k
    unknowns = enumerate_indices(slots, d)
    col = {u: i for i, u in enumerate(unknowns)}
    table = raise_weights(slots, d, k)
    rows, rhs = [], []
    for tgt, terms in table.items():
        row = [Fraction(0)] * len(unknowns)
        for src, w in terms:
            row[col[src]] += w
        rows.append(row)
        rhs.append(to_fraction(coeffs[tgt]))
    try:
        x = solve(rows, rhs)
    except InconsistentSystem as exc:
        raise NotReducible(f"coefficients are not of degree {d}") from exc
    return dict(zip(unknowns, x))


def is_degree_reducible(coeffs: Mapping[MultiIndex, Fraction], k: int) -> bool:
    low = lower(coeffs, k)
    back = raise_(low, k)
    return all(back[key] == to_fraction(v) for key, v in coeffs.items())


# -- per-block operators on tensor coefficients --------------------------------

def local_weights(table: Table, keys: Sequence[BlockedMultiIndex], block: int) -> dict:
    """Lift a simplex weight table to act on one block of blocked indices.

    ``keys`` are the blocked indices of the *source* structure.
    """
    rests = []
    seen = set()
    for kb in keys:
        rest = kb[:block] + kb[block + 1:]
        if rest not in seen:
            seen.add(rest)
            rests.append(rest)
    out = {}
    for rest in rests:
        for tgt, terms in table.items():
            key = rest[:block] + (tgt,) + rest[block:]
            out[key] = tuple((rest[:block] + (src,) + rest[block:], w) for src, w in terms)
    return out


def _block_shape(coeffs: Mapping[BlockedMultiIndex, Fraction], block: int) -> tuple[int, int]:
    keys = list(coeffs)
    if not keys:
        raise ValueError("empty coefficient map")
    if not 0 <= block < len(keys[0]):
        raise ValueError(f"block {block} outside 0..{len(keys[0]) - 1}")
    norms = {sum(kb[block]) for kb in keys}
    if len(norms) != 1:
        raise ValueError("keys have mixed degrees in the selected block")
    return len(keys[0][block]), norms.pop()


def raise_local(coeffs: Mapping[BlockedMultiIndex, Fraction], block: int, k: int) -> dict:
    """Raise the degree of one block by ``k``; other blocks untouched."""
    slots, d = _block_shape(coeffs, block)
    return _apply(local_weights(raise_weights(slots, d, k), list(coeffs), block), coeffs)


def lower_local(coeffs: Mapping[BlockedMultiIndex, Fraction], block: int, k: int, pivot: int = 0) -> dict:
    """Lower the degree of one block by ``k`` (left inverse of :func:`raise_local`)."""
    slots, dk = _block_shape(coeffs, block)
    if k > dk:
        raise ValueError(f"cannot lower block degree {dk} by {k}")
    return _apply(local_weights(lower_weights(slots, dk - k, k, pivot), list(coeffs), block), coeffs)
