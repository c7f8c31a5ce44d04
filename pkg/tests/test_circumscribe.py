import random
from fractions import Fraction as F

import pytest

from pairs import SQUARE, SQUARE_RIGHT, TEMPLATES, TRIANGLE, pair_triangles, rat, vec
from simplotope import Simplotope
from simplotope.bernstein import domain_points, eval_basis, eval_tensor_basis
from simplotope.circumscribe import (
    UnsupportedPair,
    circumscribe_pair,
    extract_bnet,
    standard_circumscribe,
)
from simplotope.multiindex import enumerate_blocked, flatten

UNIT_SQUARE = Simplotope((0, 0), [[(1, 0)], [(0, 1)]])
CUBE = Simplotope((0, 0, 0), [[(1, 0, 0)], [(0, 1, 0)], [(0, 0, 1)]])


def test_unit_square_tetrahedron():
    c = standard_circumscribe(UNIT_SQUARE)
    assert c.simplex.vertices == ((0, 0, 1), (2, 0, 1), (0, 0, -1), (0, 2, -1))
    assert c.weights == (F(1, 2), F(1, 2))
    assert sorted(c.recover_vertices()) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_cube_slice_weights():
    c = standard_circumscribe(CUBE)
    assert c.m == 5 and c.nu == (1, 1, 1)
    assert c.weights == (F(1, 3),) * 3
    assert sorted(c.recover_vertices()) == sorted(CUBE.vertices().values())


@pytest.mark.parametrize("template", TEMPLATES, ids=lambda t: t.__name__)
def test_roundtrip_on_templates(template):
    rng = random.Random(5)
    p, q, delta, _ = template(rng)
    for s in (p, q):
        c = standard_circumscribe(s)
        assert c.m == s.dim + s.ell - 1
        assert sorted(c.recover_vertices()) == sorted(s.vertices().values())
        # lifted points map back exactly
        coords = []
        for n in s.nu:
            w = [F(rng.randint(1, 9)) for _ in range(n + 1)]
            coords.append(tuple(x / sum(w) for x in w))
        x = s.point(coords)
        assert c.to_source(c.lift(x)) == x


def test_tensor_bnet_is_domain_points():
    for s, delta in [(UNIT_SQUARE, (2, 3)), (CUBE, (1, 2, 1)), (TRIANGLE, (2, 2))]:
        c = standard_circumscribe(s)
        assert c.tensor_bnet(delta).as_dict() == domain_points(s, delta).as_dict()


def test_basis_scaling_between_tensor_and_simplex():
    rng = random.Random(2)
    kb = ((2, 0), (1, 1))
    for _ in range(10):
        a0, a1 = rat(rng), rat(rng)
        a = ((a0, 1 - a0), (a1, 1 - a1))
        b = tuple(x / 2 for x in flatten(a))
        denom = eval_basis(flatten(kb), 4, b)
        if denom:
            assert eval_tensor_basis(kb, (2, 2), a) / denom == F(8, 3)


def test_lift_direction_gives_block_split():
    c = standard_circumscribe(SQUARE)
    u = vec(random.Random(4), 2)
    s = c.simplex.direction_coords(c.lift_direction(u))
    assert s == flatten(SQUARE.direction_split(u))


def test_extract_bnet_rejects_wrong_degree():
    net = domain_points(standard_circumscribe(UNIT_SQUARE).simplex, 3)
    assert len(extract_bnet(net, (1, 2), (1, 1))) == len(enumerate_blocked((1, 1), (1, 2)))
    with pytest.raises(ValueError):
        extract_bnet(net, (1, 1), (1, 1))


def test_pair_shares_a_facet():
    cp = circumscribe_pair(SQUARE, TRIANGLE)
    assert len(cp.shared_vertices) == cp.left.m == cp.right.m == 3
    assert cp.left.offset == cp.right.offset == (F(1, 2),)
    assert cp.left.simplex.vertices[cp.oof_vertex_left] != cp.right.simplex.vertices[cp.oof_vertex_right]
    padded = circumscribe_pair(SQUARE, SQUARE_RIGHT)
    assert padded.left.m == 4 and len(padded.shared_vertices) == 4


def test_pair_unsupported_for_shared_factor():
    p, q, _, _ = pair_triangles(random.Random(0))
    with pytest.raises(UnsupportedPair):
        circumscribe_pair(p, q)
