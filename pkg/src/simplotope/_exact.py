"""Exact rational helpers: parsing, formatting, small vector ops and linear algebra.

Linear algebra goes through sympy's ``DomainMatrix`` over QQ (gmpy-backed
when available); everything crossing the module boundary is ``Fraction``.
"""

from __future__ import annotations

import numbers
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Vector = tuple[Fraction, ...]


class InconsistentSystem(ValueError):
    """A linear system has no solution."""


class SingularSystem(ValueError):
    """A linear system has more than one solution where one was required."""


def to_fraction(x) -> Fraction:
    """Parse an exact rational: int, Fraction, other Rational, or a ``"p/q"`` string.

    Floats are rejected on purpose.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise ValueError(f"cannot parse rational {x!r}") from exc
    if isinstance(x, numbers.Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def to_vector(xs: Iterable) -> Vector:
    return tuple(to_fraction(x) for x in xs)


def fmt(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def vadd(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vscale(s: Fraction, a: Sequence[Fraction]) -> Vector:
    return tuple(s * x for x in a)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b, strict=True)), Fraction(0))


def lincomb(weights: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]], dim: int) -> Vector:
    out = [Fraction(0)] * dim
    for w, v in zip(weights, vectors, strict=True):
        if w:
            for i, x in enumerate(v):
                out[i] += w * x
    return tuple(out)


# -- DomainMatrix bridge ---------------------------------------------------

def _qq(x) -> object:
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _dm(rows: Sequence[Sequence], ncols: int | None = None) -> DomainMatrix:
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return DomainMatrix([[_qq(x) for x in r] for r in rows], (len(rows), ncols), QQ)


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], tuple[int, ...]]:
    """Reduced row echelon form and pivot columns (zero rows dropped)."""
    if not rows:
        return [], ()
    m, pivots = _dm(rows, ncols).rref()
    dense = m.to_list()
    out = [[_frac(x) for x in r] for r in dense[: len(pivots)]]
    return out, tuple(pivots)


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return _dm(rows, ncols).rank()


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}`` as a list of vectors."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = _dm(rows, ncols).nullspace()
    return [[_frac(x) for x in r] for r in ns.to_list()]


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Unique solution of ``A x = b`` (A may be tall; the system must be consistent).

    Raises :class:`InconsistentSystem` or :class:`SingularSystem`.
    """
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    aug = [list(r) + [b[i]] for i, r in enumerate(a)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        raise InconsistentSystem("linear system is inconsistent")
    if len(pivots) < ncols:
        raise SingularSystem(f"linear system has rank {len(pivots)} < {ncols} unknowns")
    return [red[i][ncols] for i in range(ncols)]


def same_row_space(a: Sequence[Sequence], b: Sequence[Sequence], ncols: int) -> bool:
    ra, rb = rank(a, ncols), rank(b, ncols)
    if ra != rb:
        return False
    return rank(list(a) + list(b), ncols) == ra
