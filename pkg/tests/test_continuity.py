import random
from fractions import Fraction as F

import pytest

from pairs import (
    TRI_LEFT,
    TRI_RIGHT,
    ROW_B,
    ROW_C,
    SQUARE,
    SQUARE_RIGHT,
    TEMPLATES,
    TRIANGLE,
    TRIANGLE_SKEW,
    conditioned_pair,
    pair_prisms,
)
from simplotope import Simplotope
from simplotope.continuity import (
    AssemblyError,
    BadDirection,
    CoefficientRef,
    DegreeMismatch,
    NoSharedFacet,
    NotCospatial,
    assemble_smoothness_matrix,
    choose_direction,
    mixed_conditions,
    simplex_conditions,
)
from simplotope.verify import check_conditions, nullspace_equivalence, random_solution


def rows(cs):
    return [cond.as_dict() for cond in cs.conditions]


def test_c0_is_a_bijection_on_the_facet():
    cs = simplex_conditions(TRI_LEFT, TRI_RIGHT, 3, 0)
    assert len(cs) == 4
    left = {next(r for r in c if r.patch == "P") for c in rows(cs)}
    right = {next(r for r in c if r.patch == "Q") for c in rows(cs)}
    assert len(left) == len(right) == 4
    assert all(sorted(c.values()) == [-1, 1] for c in rows(cs))


def test_condition_counts_stack_orders():
    cs = simplex_conditions(TRI_LEFT, TRI_RIGHT, 3, 2)
    # 4 + 3 + 2 facet indices
    assert len(cs) == 9 and cs.order == 2
    cs = mixed_conditions(SQUARE, TRIANGLE, (2, 2), 1)
    assert len(cs) == 6


def test_first_term_normalized_to_plus_one():
    for cs in (simplex_conditions(TRI_LEFT, TRI_RIGHT, 2, 1), mixed_conditions(SQUARE, TRIANGLE, (2, 2), 1)):
        for cond in cs.conditions:
            assert cond.terms[0][1] == 1
            assert cond.terms[0][0].patch == "P"


def test_simplex_direction_parallel_to_facet():
    with pytest.raises(BadDirection):
        simplex_conditions(TRI_LEFT, TRI_RIGHT, 2, 1, u=(0, 1))


def test_sound_and_literal_weights_square_triangle():
    sound = mixed_conditions(SQUARE, TRIANGLE_SKEW, (2, 2), 1)
    literal = mixed_conditions(SQUARE, TRIANGLE_SKEW, (2, 2), 1, mode="literal")
    key = CoefficientRef("Q", ((2,), (1, 1, 0)))
    anchor = CoefficientRef("P", ((1, 1), (1, 1)))
    pick = lambda cs: next(c for c in rows(cs) if anchor in c)
    # s~ = (2/3, 1/3, -1); c~(110) carries (s~0 + s~1) times the factor
    assert pick(sound)[key] == F(1, 2)
    assert pick(literal)[key] == F(1, 3)


def test_direction_choice_prefers_edge():
    assert choose_direction(SQUARE, TRIANGLE) == (-1, 0)
    p, q, _, _ = pair_prisms(random.Random(1))
    u = choose_direction(p, q)
    assert any(u)
    with pytest.raises(BadDirection):
        mixed_conditions(SQUARE, TRIANGLE, (2, 2), 1, direction=(0, 1))


def test_direction_invariance_simplices():
    v0, v1, v2 = TRI_LEFT.vertices
    a = simplex_conditions(TRI_LEFT, TRI_RIGHT, 3, 2, u=tuple(x - y for x, y in zip(v0, v1)))
    b = simplex_conditions(TRI_LEFT, TRI_RIGHT, 3, 2, u=tuple(x - y for x, y in zip(v0, v2)))
    assert rows(a) != rows(b)
    assert nullspace_equivalence(a, b)


@pytest.mark.parametrize("template", TEMPLATES, ids=lambda t: t.__name__)
def test_direction_invariance_templates(template):
    p, q, delta, delta_q = template(random.Random(8))
    u = choose_direction(p, q)
    a = mixed_conditions(p, q, delta, 1, delta_q=delta_q)
    b = mixed_conditions(p, q, delta, 1, delta_q=delta_q, direction=tuple(-3 * x for x in u))
    assert nullspace_equivalence(a, b)


def test_swapped_order_gives_same_space():
    a = mixed_conditions(SQUARE, TRIANGLE, (2, 2), 2, ids=("S", "T"))
    b = mixed_conditions(TRIANGLE, SQUARE, (2, 2), 2, ids=("T", "S"))
    assert nullspace_equivalence(a, b)


def test_equal_type_pair_padded():
    cs = mixed_conditions(SQUARE, SQUARE_RIGHT, (2, 2), 2)
    assert {r.index for c in rows(cs) for r in c if r.patch == "P"} <= {
        r.index for r in cs.refs() if r.patch == "P"
    }
    (pp, qq), _ = conditioned_pair(cs, SQUARE, SQUARE_RIGHT, seed=3)
    assert check_conditions(pp, qq, cs, samples=8).passed


def test_errors():
    with pytest.raises(NotCospatial) as exc:
        mixed_conditions(ROW_B, ROW_C, (1, 1), 1)
    assert exc.value.diagnosis is not None and not exc.value.diagnosis.cospatial
    with pytest.raises(DegreeMismatch):
        mixed_conditions(SQUARE, TRIANGLE, (2, 2), 1, delta_q=(2, 2, 2))
    with pytest.raises(DegreeMismatch):
        mixed_conditions(SQUARE, SQUARE_RIGHT, (2, 2), 1, delta_q=(2, 3))
    with pytest.raises(NoSharedFacet):
        mixed_conditions(SQUARE, Simplotope((5, 5), [[(1, 0)], [(0, 1)]]), (1, 1), 1)
    with pytest.raises(ValueError):
        mixed_conditions(SQUARE, TRIANGLE, (2, 2), 1, mode="other")


def test_simplex_pair_through_mixed_entry_point():
    p = Simplotope.from_simplex(TRI_LEFT)
    q = Simplotope.from_simplex(TRI_RIGHT)
    cs = mixed_conditions(p, q, (3,), 1)
    assert nullspace_equivalence(cs, simplex_conditions(TRI_LEFT, TRI_RIGHT, 3, 1))


def test_assembly_row_of_squares():
    squares = [Simplotope((x, 0), [[(1, 0)], [(0, 1)]]) for x in range(3)]
    m = assemble_smoothness_matrix([(s, (2, 2)) for s in squares], "auto", 1, ids=["a", "b", "c"])
    assert m.shape == (12, 27)
    assert {src[:2] for src in m.row_sources} == {("a", "b"), ("b", "c")}
    values = dict(zip(m.columns, random_solution(m.dense(), 27, random.Random(1))))
    assert all(sum(w * values[m.columns[j]] for i2, j, w in m.entries if i2 == i) == 0 for i in range(m.nrows))


def test_assembly_errors():
    with pytest.raises(AssemblyError):
        assemble_smoothness_matrix([(ROW_B, (1, 1)), (ROW_C, (1, 1))], [(0, 1)], 1)
    with pytest.raises(AssemblyError):
        assemble_smoothness_matrix([(SQUARE, (1, 1)), (TRIANGLE, (1, 1))], [(0, 1)], 1, ids=["x", "x"])


def test_json_roundtrippable():
    import json

    cs = mixed_conditions(SQUARE, TRIANGLE, (2, 2), 1)
    doc = json.loads(json.dumps(cs.to_json()))
    assert doc["order"] == 1 and len(doc["conditions"]) == len(cs)
    assert doc["conditions"][0]["terms"][0]["weight"] == "1"
