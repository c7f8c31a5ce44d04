from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from simplotope.bernstein import de_casteljau
from simplotope.degree_ops import (
    NotReducible,
    is_degree_reducible,
    lower,
    lower_by_solving,
    lower_local,
    raise_,
    raise_local,
)
from simplotope.multiindex import enumerate_blocked, enumerate_indices

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=9)


@st.composite
def coefficient_maps(draw, max_slots=4, max_degree=4):
    slots = draw(st.integers(1, max_slots))
    d = draw(st.integers(0, max_degree))
    keys = enumerate_indices(slots, d)
    values = draw(st.lists(rationals, min_size=len(keys), max_size=len(keys)))
    return dict(zip(keys, values))


def value(coeffs, b):
    d = sum(next(iter(coeffs)))
    return de_casteljau(coeffs, b, d)[(0,) * len(b)]


def test_raise_linear_to_quadratic():
    c = {(1, 0): F(2), (0, 1): F(6)}
    assert raise_(c, 1) == {(2, 0): 2, (1, 1): 4, (0, 2): 6}
    # multinomial weights matter for k >= 2
    assert raise_(c, 2) == {(3, 0): 2, (2, 1): F(10, 3), (1, 2): F(14, 3), (0, 3): 6}


@settings(max_examples=40, deadline=None)
@given(coefficient_maps(), st.integers(0, 2), st.lists(rationals, min_size=4, max_size=4))
def test_raise_preserves_values(c, k, raw):
    slots = len(next(iter(c)))
    b = list(raw[: slots - 1]) + [1 - sum(raw[: slots - 1])]
    assert value(raise_(c, k), b) == value(c, b)


@settings(max_examples=40, deadline=None)
@given(coefficient_maps(), st.integers(0, 2), st.data())
def test_lower_inverts_raise_for_every_pivot(c, k, data):
    up = raise_(c, k)
    slots = len(next(iter(c)))
    pivot = data.draw(st.integers(0, slots - 1))
    assert lower(up, k, pivot) == c
    assert lower_by_solving(up, k) == c
    assert is_degree_reducible(up, k)


def test_not_reducible():
    c = {k: F(0) for k in enumerate_indices(3, 2)}
    c[(1, 1, 0)] = F(1)
    assert not is_degree_reducible(c, 1)
    with pytest.raises(NotReducible):
        lower_by_solving(c, 1)
    # the closed form still returns a value; pivots disagree off the range of raise_
    assert lower(c, 1, 0) != lower(c, 1, 2)


def test_bad_amounts():
    c = {k: F(1) for k in enumerate_indices(2, 1)}
    with pytest.raises(ValueError):
        lower(c, 2)
    with pytest.raises(ValueError):
        raise_(c, -1)
    with pytest.raises(ValueError):
        lower(c, 1, pivot=2)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2), st.integers(1, 2), st.data())
def test_local_operators_act_per_block(d0, k, data):
    keys = enumerate_blocked((1, 2), (d0, 2))
    values = data.draw(st.lists(rationals, min_size=len(keys), max_size=len(keys)))
    c = dict(zip(keys, values))
    up = raise_local(c, 1, k)
    assert set(up) == set(enumerate_blocked((1, 2), (d0, 2 + k)))
    assert lower_local(up, 1, k, pivot=data.draw(st.integers(0, 2))) == c
    # block 1 of each slice is an ordinary simplex coefficient map
    for k0 in enumerate_indices(2, d0):
        slice_ = {kb[1]: v for kb, v in c.items() if kb[0] == k0}
        raised = {kb[1]: v for kb, v in up.items() if kb[0] == k0}
        assert raise_(slice_, k) == raised
