"""Acceptance criteria, one test each, at the stated tolerances.

Every test prints a single ``PASS``/``FAIL`` line (visible with ``pytest -v``
thanks to ``capsys.disabled``).
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction as F
from math import factorial
from pathlib import Path

import pytest

from pairs import (
    TRI_LEFT,
    TRI_RIGHT,
    ROW_A,
    ROW_B,
    ROW_C,
    ROW_D,
    SQUARE,
    SQUARE_RIGHT,
    TEMPLATES,
    TRIANGLE,
    TRIANGLE_SKEW,
    conditioned_pair,
    pair_4d,
    perturbed,
    rat,
)
from simplotope import Simplotope
from simplotope.bernstein import de_casteljau, eval_basis, eval_tensor_basis
from simplotope.circumscribe import standard_circumscribe
from simplotope.cli import main
from simplotope.continuity import CoefficientRef, mixed_conditions, simplex_conditions
from simplotope.degree_ops import lower, raise_
from simplotope.geometry import detect_shared_facet, is_oof_cospatial
from simplotope.multiindex import enumerate_indices, flatten
from simplotope.verify import check_conditions, nullspace_equivalence

DATA = Path(__file__).parent / "data"


@contextmanager
def criterion(capsys, label, limit=None):
    start = time.perf_counter()
    state = {"ok": False, "note": ""}
    try:
        yield state
        state["ok"] = True
    finally:
        elapsed = time.perf_counter() - start
        timed_out = limit is not None and elapsed >= limit
        ok = state["ok"] and not timed_out
        note = f" ({state['note']})" if state["note"] else ""
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'}  {label}  [{elapsed:.2f}s]{note}")
    assert not timed_out, f"{label}: {elapsed:.2f}s exceeds {limit}s"


def rows(cs):
    return [cond.as_dict() for cond in cs.conditions]


def normalized(form, anchor):
    w = form[anchor]
    return {k: v / w for k, v in form.items() if v}


# 1 ---------------------------------------------------------------------------------------

def test_01_triangle_pair_condition(capsys):
    with criterion(capsys, "1 triangle pair C1 condition", limit=1.0):
        v0, v1, _ = TRI_LEFT.vertices
        u = tuple(a - b for a, b in zip(v0, v1))
        w1, w2 = TRI_RIGHT.vertices[1], TRI_RIGHT.vertices[2]
        assert u == tuple(a - b for a, b in zip(w1, w2))
        cs = simplex_conditions(TRI_LEFT, TRI_RIGHT, 3, 1, u=u)
        want = {
            CoefficientRef("P", ((1, 1, 1),)): 1,
            CoefficientRef("P", ((0, 2, 1),)): -1,
            CoefficientRef("Q", ((1, 2, 0),)): -1,
            CoefficientRef("Q", ((1, 1, 1),)): 1,
        }
        assert want in rows(cs)


# 2 ---------------------------------------------------------------------------------------

def test_02_tensor_to_simplex_basis_scaling(capsys):
    with criterion(capsys, "2 tensor/simplex basis ratio 8/3") as st:
        square = Simplotope((0, 0), [[(1, 0)], [(0, 1)]])
        circ = standard_circumscribe(square)
        kb = ((2, 0), (1, 1))
        rng = random.Random(7)
        seen = 0
        while seen < 10:
            a0, a1 = rat(rng), rat(rng)
            a = ((a0, 1 - a0), (a1, 1 - a1))
            # the lifted point's simplex coordinates are a / l
            b = circ.simplex.barycentric(circ.lift(square.point(a)))
            assert b == tuple(x / 2 for x in flatten(a))
            simplex_value = eval_basis(flatten(kb), 4, b)
            if simplex_value == 0:
                continue
            assert eval_tensor_basis(kb, (2, 2), a) / simplex_value == F(8, 3)
            seen += 1
        # delta!/|delta|! * l^|delta|
        assert F(factorial(2) * factorial(2), factorial(4)) * 2**4 == F(8, 3)
        st["note"] = "10 random rational points"


# 3 ---------------------------------------------------------------------------------------

def _expected_row(s, factor):
    """c(1111) - c(2011) minus ``factor`` times the triangle terms weighted by ``s``."""
    q = lambda t: CoefficientRef("Q", ((2,), t))
    form = {
        CoefficientRef("P", ((1, 1), (1, 1))): F(1),
        CoefficientRef("P", ((2, 0), (1, 1))): F(-1),
    }
    terms = {
        q((1, 1, 0)): s[0] + s[1],
        q((2, 0, 0)): s[0],
        q((0, 2, 0)): s[1],
        q((0, 1, 1)): s[2],
        q((1, 0, 1)): s[2],
    }
    for ref, w in terms.items():
        form[ref] = form.get(ref, F(0)) - factor * w
    return form


@pytest.mark.parametrize("triangle", [TRIANGLE, TRIANGLE_SKEW], ids=["right_angled", "skew"])
def test_03_square_triangle_raised_condition(capsys, triangle):
    label = "skew" if triangle is TRIANGLE_SKEW else "right-angled"
    with criterion(capsys, f"3 square/triangle raised condition, 1/3 factor [{label}]", limit=1.0) as st:
        u = (-1, 0)
        s = triangle.direction_split(u)[1]
        anchor = CoefficientRef("P", ((1, 1), (1, 1)))
        literal = mixed_conditions(SQUARE, triangle, (2, 2), 1, direction=u, mode="literal")
        got = [normalized(r, anchor) for r in rows(literal) if anchor in r]
        assert normalized(_expected_row(s, F(1, 3)), anchor) in got
        # sound mode keeps the pattern with factor 1/2; literal mode fails the oracle
        sound = mixed_conditions(SQUARE, triangle, (2, 2), 1, direction=u)
        got = [normalized(r, anchor) for r in rows(sound) if anchor in r]
        assert normalized(_expected_row(s, F(1, 2)), anchor) in got
        (pp, qq), _ = conditioned_pair(literal, SQUARE, triangle, seed=0)
        assert not check_conditions(pp, qq, literal, samples=3).passed
        st["note"] = f"s~ = ({', '.join(map(str, s))}); literal mode, sound mode carries 1/2"


# 4 ---------------------------------------------------------------------------------------

def test_04_circumscribed_tetrahedron(capsys):
    with criterion(capsys, "4 circumscribed tetrahedron roundtrip"):
        square = Simplotope((0, 0), [[(1, 0)], [(0, 1)]])
        c = standard_circumscribe(square)
        assert c.simplex.vertices == ((0, 0, 1), (2, 0, 1), (0, 0, -1), (0, 2, -1))
        assert sorted(c.recover_vertices()) == [(0, 0), (0, 1), (1, 0), (1, 1)]


# 5 ---------------------------------------------------------------------------------------

def _soundness_cases():
    yield (TRI_LEFT, TRI_RIGHT, None, None, 1, "triangles d=3")
    yield (SQUARE, TRIANGLE, (2, 2), (2, 2), 1, "square/triangle")
    yield (SQUARE, TRIANGLE_SKEW, (2, 2), (2, 2), 1, "square/skew triangle")
    yield (SQUARE, SQUARE_RIGHT, (2, 2), (2, 2), 2, "translated squares")
    rng = random.Random(2024)
    for r in (1, 2):
        for template in TEMPLATES:
            p, q, delta, delta_q = template(rng)
            yield (p, q, delta, delta_q, r, f"{template.__name__} r={r}")


def test_05_soundness_suite(capsys):
    with criterion(capsys, "5 soundness property suite", limit=60.0) as st:
        cases = perturbations = 0
        for p, q, delta, delta_q, r, name in _soundness_cases():
            if delta is None:
                cs = simplex_conditions(p, q, 3, r)
            else:
                assert sum(p.nu) <= 3
                cs = mixed_conditions(p, q, delta, r, delta_q=delta_q)
            (pp, qq), values = conditioned_pair(cs, p, q, seed=cases)
            rep = check_conditions(pp, qq, cs, samples=25, seed=cases)
            assert rep.passed and rep.max_discrepancy == 0 and rep.samples == 25, name
            used = sorted({ref for cond in cs.conditions for ref, _ in cond.terms})
            for ref in used:
                bad = check_conditions(
                    *perturbed(cs, p, q, values, ref), cs, samples=3, seed=cases, require_conditions=False
                )
                assert not bad.passed and not bad.conditions_satisfied, (name, ref)
                perturbations += 1
            cases += 1
        assert cases >= 14
        st["note"] = f"{cases} pairs, {perturbations} perturbations"


# 6 ---------------------------------------------------------------------------------------

def test_06_degree_operators(capsys):
    with criterion(capsys, "6 raise/lower operator suite") as st:
        rng = random.Random(6)
        total = 0
        for n in (1, 2, 3):
            slots = n + 1
            for d in range(5):
                for k in (1, 2):
                    for _ in range(20):
                        c = {key: rat(rng) for key in enumerate_indices(slots, d)}
                        up = raise_(c, k)
                        results = {tuple(sorted(lower(up, k, pivot).items())) for pivot in range(slots)}
                        assert results == {tuple(sorted(c.items()))}
                        w = [rat(rng) for _ in range(n)]
                        b = (1 - sum(w), *w)
                        assert de_casteljau(up, b, d + k) == {(0,) * slots: de_casteljau(c, b, d)[(0,) * slots]}
                        total += 1
        st["note"] = f"{total} coefficient maps, every pivot"


# 7 ---------------------------------------------------------------------------------------

def test_07_direction_invariance(capsys):
    with criterion(capsys, "7 direction invariance"):
        v0, v1, v2 = TRI_LEFT.vertices
        a = simplex_conditions(TRI_LEFT, TRI_RIGHT, 3, 1, u=tuple(x - y for x, y in zip(v0, v1)))
        b = simplex_conditions(TRI_LEFT, TRI_RIGHT, 3, 1, u=tuple(x - y for x, y in zip(v0, v2)))
        assert nullspace_equivalence(a, b)
        for tri in (TRIANGLE, TRIANGLE_SKEW):
            a = mixed_conditions(SQUARE, tri, (2, 2), 1, direction=(-1, 0))
            b = mixed_conditions(SQUARE, tri, (2, 2), 1, direction=(F(-5, 2), 0))
            assert nullspace_equivalence(a, b)


# 8 ---------------------------------------------------------------------------------------

def test_08_cospatiality_classification(capsys):
    with criterion(capsys, "8 cospatiality classification and CLI rejection"):
        got = {
            name: is_oof_cospatial(p, q, detect_shared_facet(p, q))
            for name, (p, q) in {"AB": (ROW_A, ROW_B), "BC": (ROW_B, ROW_C), "CD": (ROW_C, ROW_D)}.items()
        }
        assert got == {"AB": True, "BC": False, "CD": True}
        assert main(["conditions", str(DATA / "row_bc.json")]) == 3
        capsys.readouterr()


# four-dimensional smoke test ------------------------------------------------------------

def test_09_four_dimensional_smoke(capsys):
    with criterion(capsys, "4D (2,2)|(1,3) end-to-end smoke test", limit=120.0) as st:
        p, q, delta, delta_q = pair_4d(random.Random(3))
        cs = mixed_conditions(p, q, delta, 1, delta_q=delta_q)
        assert len(cs) > 0
        (pp, qq), _ = conditioned_pair(cs, p, q, seed=1)
        rep = check_conditions(pp, qq, cs, samples=25, seed=1)
        assert rep.passed
        st["note"] = f"{len(cs)} conditions"
