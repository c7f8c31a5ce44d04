"""Command-line front end.

Subcommands ``conditions``, ``verify``, ``bnet`` and ``circumscribe`` all
read a JSON grid file (see :mod:`simplotope.gridfile`).

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 geometric
rejection (no shared facet, or not out-of-facet cospatial).
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from ._exact import to_fraction
from .bernstein import TensorPolynomial, domain_points
from .circumscribe import circumscribe_pair, standard_circumscribe
from .continuity import (
    AssemblyError,
    CoefficientRef,
    DegreeMismatch,
    assemble_smoothness_matrix,
    mixed_conditions,
)
from .geometry import GeometryError, detect_shared_facet
from .gridfile import GridFile, GridFileError, load
from .multiindex import enumerate_blocked
from .verify import check_conditions, random_solution

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GEOMETRY = 0, 1, 2, 3


class _Rejected(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _pairs(grid: GridFile) -> list[tuple[int, int]]:
    pairs = grid.index_pairs()
    if pairs == "auto":
        ps = grid.patches
        return [
            (i, j)
            for i, j in itertools.combinations(range(len(ps)), 2)
            if detect_shared_facet(ps[i].simplotope, ps[j].simplotope) is not None
        ]
    return list(pairs)


def _condition_sets(grid: GridFile, order: int, mode: str):
    out = []
    for i, j in _pairs(grid):
        a, b = grid.patches[i], grid.patches[j]
        try:
            cs = mixed_conditions(a.simplotope, b.simplotope, a.degrees, order, delta_q=b.degrees, ids=(a.id, b.id), mode=mode)
        except DegreeMismatch as exc:
            raise _Rejected(EXIT_INPUT, f"pair ({a.id}, {b.id}): {exc}") from exc
        except GeometryError as exc:
            raise _Rejected(EXIT_GEOMETRY, f"pair ({a.id}, {b.id}): {exc}") from exc
        out.append(((i, j), cs))
    return out


def _matrix(grid: GridFile, order: int, mode: str):
    patches = [(p.simplotope, p.degrees) for p in grid.patches]
    try:
        return assemble_smoothness_matrix(patches, _pairs(grid), order, ids=[p.id for p in grid.patches], mode=mode)
    except AssemblyError as exc:
        cause = exc.__cause__
        code = EXIT_GEOMETRY if isinstance(cause, GeometryError) else EXIT_INPUT
        raise _Rejected(code, str(exc)) from exc


def _emit(doc, out: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_conditions(grid: GridFile, args) -> int:
    order = grid.order if args.order is None else args.order
    sets = _condition_sets(grid, order, args.mode)
    matrix = _matrix(grid, order, args.mode)
    doc = {
        "order": order,
        "mode": args.mode,
        "condition_sets": [cs.to_json() for _, cs in sets],
        "matrix": matrix.to_json(),
    }
    _emit(doc, args.out)
    return EXIT_OK


def _load_matrix(path: str):
    try:
        doc = json.loads(Path(path).read_text())
        m = doc.get("matrix", doc)
        nrows, ncols = m["shape"]
        rows = [[Fraction(0)] * ncols for _ in range(nrows)]
        for i, j, v in m["entries"]:
            rows[i][j] += to_fraction(v)
        cols = [CoefficientRef(c["patch"], tuple(tuple(b) for b in c["index"])) for c in m["columns"]]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise _Rejected(EXIT_INPUT, f"cannot read matrix {path}: {exc}") from exc
    return rows, cols


def cmd_verify(grid: GridFile, args) -> int:
    order = grid.order if args.order is None else args.order
    sets = _condition_sets(grid, order, args.mode)
    if args.matrix:
        rows, cols = _load_matrix(args.matrix)
    else:
        m = _matrix(grid, order, args.mode)
        rows, cols = m.dense(), list(m.columns)
    expected = [CoefficientRef(p.id, k) for p in grid.patches for k in enumerate_blocked(p.simplotope.nu, p.degrees)]
    if cols != expected:
        raise _Rejected(EXIT_INPUT, "matrix columns do not match the grid's coefficients")
    rng = random.Random(args.seed)
    values = dict(zip(cols, random_solution(rows, len(cols), rng)))

    def poly(p):
        coeffs = {k: values[CoefficientRef(p.id, k)] for k in enumerate_blocked(p.simplotope.nu, p.degrees)}
        return TensorPolynomial(p.simplotope, p.degrees, coeffs)

    reports = []
    for (i, j), cs in sets:
        a, b = grid.patches[i], grid.patches[j]
        rep = check_conditions(
            poly(a), poly(b), cs, samples=args.samples, seed=args.seed, require_conditions=False
        )
        reports.append(rep)
    passed = all(r.passed and r.conditions_satisfied for r in reports)
    _emit({"passed": passed, "order": order, "reports": [r.to_json() for r in reports]}, args.out)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_bnet(grid: GridFile, args) -> int:
    doc = {
        "patches": [
            {"id": p.id, "degrees": list(p.degrees), "bnet": domain_points(p.simplotope, p.degrees).to_json(args.render_float)}
            for p in grid.patches
        ]
    }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_circumscribe(grid: GridFile, args) -> int:
    doc = {"patches": [], "pairs": []}
    for p in grid.patches:
        c = standard_circumscribe(p.simplotope)
        doc["patches"].append({"id": p.id, **c.to_json(args.render_float)})
    for i, j in _pairs(grid):
        a, b = grid.patches[i], grid.patches[j]
        info = detect_shared_facet(a.simplotope, b.simplotope)
        if info is None:
            raise _Rejected(EXIT_GEOMETRY, f"pair ({a.id}, {b.id}): simplotopes do not share a facet")
        if info.normal is None:
            doc["pairs"].append({"left": a.id, "right": b.id, "skipped": "no block normal form (simplex pair)"})
            continue
        cp = circumscribe_pair(a.simplotope, b.simplotope, info)
        lid, rid = (b.id, a.id) if info.normal.swapped else (a.id, b.id)
        doc["pairs"].append(
            {
                "left": lid,
                "right": rid,
                "left_simplex": cp.left.to_json(args.render_float),
                "right_simplex": cp.right.to_json(args.render_float),
                "shared_vertices": [list(s) for s in cp.shared_vertices],
                "oof_vertex_left": cp.oof_vertex_left,
                "oof_vertex_right": cp.oof_vertex_right,
            }
        )
    _emit(doc, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simplotope", description="Exact C^r continuity conditions on simplotope grids.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("grid", help="grid file (JSON)")
        p.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser("conditions", help="generate condition sets and the smoothness matrix")
    common(p)
    p.add_argument("--order", type=int, help="continuity order (default: the grid file's)")
    p.add_argument("--mode", choices=["sound", "literal"], default="sound")
    p.set_defaults(func=cmd_conditions)

    p = sub.add_parser("verify", help="check random conditioned patches with the symbolic oracle")
    common(p)
    p.add_argument("--order", type=int)
    p.add_argument("--samples", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["sound", "literal"], default="sound")
    p.add_argument("--matrix", help="replay: draw coefficients from this exported matrix instead")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bnet", help="export domain points")
    common(p)
    p.add_argument("--render-float", action="store_true", help="add float copies of points for plotting")
    p.set_defaults(func=cmd_bnet)

    p = sub.add_parser("circumscribe", help="export circumscribed simplices")
    common(p)
    p.add_argument("--render-float", action="store_true")
    p.set_defaults(func=cmd_circumscribe)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "order", None) is not None and args.order < 0:
        parser.error("--order must be >= 0")
    if getattr(args, "samples", 1) < 1:
        parser.error("--samples must be >= 1")
    try:
        grid = load(args.grid)
        return args.func(grid, args)
    except GridFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _Rejected as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
