"""Multi-index combinatorics.

Multi-indices are plain tuples of non-negative ints; blocked multi-indices
(one multi-index per simplotope factor) are tuples of such tuples.  All
enumerations are reverse-lexicographic so coefficient identifiers are stable
across runs.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterable, Sequence

MultiIndex = tuple[int, ...]
BlockedMultiIndex = tuple[MultiIndex, ...]

__all__ = [
    "MultiIndex",
    "BlockedMultiIndex",
    "enumerate_indices",
    "enumerate_blocked",
    "count",
    "multinomial",
    "mfactorial",
    "norm",
    "add",
    "sub",
    "unit",
    "flatten",
    "split",
]


@lru_cache(maxsize=None)
def _enumerate(slots: int, degree: int) -> tuple[MultiIndex, ...]:
    if slots == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in _enumerate(slots - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_indices(slots: int, degree: int) -> list[MultiIndex]:
    """All multi-indices of length `slots` and 1-norm `degree`.

    Reverse-lexicographic: ``(degree, 0, ..., 0)`` first and
    ``(0, ..., 0, degree)`` last.

    >>> enumerate_indices(2, 1)
    [(1, 0), (0, 1)]
    >>> len(enumerate_indices(3, 3))
    10
    """
    if slots < 1:
        raise ValueError(f"slots must be >= 1, got {slots}")
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    return list(_enumerate(slots, degree))


def enumerate_blocked(nu: Sequence[int], delta: Sequence[int]) -> list[BlockedMultiIndex]:
    """Cartesian product of per-block enumerations, outer product in block order.

    Block ``i`` has ``nu[i] + 1`` entries summing to ``delta[i]``.
    """
    if len(nu) != len(delta):
        raise ValueError(f"nu and delta differ in length: {len(nu)} != {len(delta)}")
    blocks = [enumerate_indices(n + 1, d) for n, d in zip(nu, delta)]
    return [tuple(combo) for combo in itertools.product(*blocks)]


def count(slots: int, degree: int) -> int:
    return comb(degree + slots - 1, slots - 1)


def norm(k: Iterable[int]) -> int:
    return sum(k)


def mfactorial(k: Iterable[int]) -> int:
    return prod(factorial(x) for x in k)


def multinomial(degree: int, k: Sequence[int]) -> Fraction:
    """``degree! / k!`` as an exact rational; raises if ``|k| != degree``."""
    if any(x < 0 for x in k):
        raise ValueError(f"negative entry in multi-index {tuple(k)}")
    if sum(k) != degree:
        raise ValueError(f"|k| = {sum(k)} does not match degree {degree}")
    return Fraction(factorial(degree), mfactorial(k))


def add(a: Sequence[int], b: Sequence[int]) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> MultiIndex:
    return tuple(x - y for x, y in zip(a, b))


def unit(slots: int, j: int, value: int = 1) -> MultiIndex:
    return tuple(value if i == j else 0 for i in range(slots))


def flatten(kb: BlockedMultiIndex) -> MultiIndex:
    return tuple(x for block in kb for x in block)


def split(k: Sequence[int], sizes: Sequence[int]) -> BlockedMultiIndex:
    """Inverse of :func:`flatten` for blocks of the given lengths."""
    out, pos = [], 0
    for size in sizes:
        out.append(tuple(k[pos:pos + size]))
        pos += size
    if pos != len(k):
        raise ValueError(f"block sizes {tuple(sizes)} do not cover index of length {len(k)}")
    return tuple(out)
