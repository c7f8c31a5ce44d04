"""JSON grid files: a few patches, their adjacencies and the continuity order.

::

    {
      "patches": [
        {"id": "A", "base": ["0", "0"], "blocks": [[["1", "0"]], [["0", "1"]]], "degrees": [2, 2]}
      ],
      "adjacencies": [{"left": "A", "right": "B"}],   # or [["A", "B"]] or "auto"
      "order": 1
    }

Rationals are integers or ``"p/q"`` strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from ._exact import fmt, to_fraction
from .geometry import GeometryError, Simplotope

__all__ = ["GridFile", "Patch", "GridFileError", "load", "loads", "dumps"]


class GridFileError(ValueError):
    """Malformed grid file."""


@dataclass(frozen=True)
class Patch:
    id: str
    simplotope: Simplotope
    degrees: tuple[int, ...]


@dataclass(frozen=True)
class GridFile:
    patches: tuple[Patch, ...]
    adjacencies: tuple[tuple[str, str], ...] | str
    order: int

    def patch(self, pid: str) -> Patch:
        for p in self.patches:
            if p.id == pid:
                return p
        raise KeyError(pid)

    def index_pairs(self) -> list[tuple[int, int]] | str:
        if self.adjacencies == "auto":
            return "auto"
        pos = {p.id: i for i, p in enumerate(self.patches)}
        return [(pos[a], pos[b]) for a, b in self.adjacencies]

    def to_dict(self) -> dict:
        return {
            "patches": [
                {
                    "id": p.id,
                    "base": [fmt(x) for x in p.simplotope.base],
                    "blocks": [[[fmt(x) for x in w] for w in block] for block in p.simplotope.blocks],
                    "degrees": list(p.degrees),
                }
                for p in self.patches
            ],
            "adjacencies": "auto"
            if self.adjacencies == "auto"
            else [{"left": a, "right": b} for a, b in self.adjacencies],
            "order": self.order,
        }


def _int(x: Any, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise GridFileError(f"{what} must be an integer, got {x!r}")
    return x


def _parse(data: Any) -> GridFile:
    if not isinstance(data, dict):
        raise GridFileError("grid file must be a JSON object")
    try:
        raw_patches = data["patches"]
    except KeyError:
        raise GridFileError("missing 'patches'") from None
    if not isinstance(raw_patches, list):
        raise GridFileError("'patches' must be a list")
    patches, seen = [], set()
    for i, rp in enumerate(raw_patches):
        try:
            pid = str(rp["id"])
            base = [to_fraction(x) for x in rp["base"]]
            blocks = [[[to_fraction(x) for x in w] for w in block] for block in rp["blocks"]]
            degrees = tuple(_int(d, f"degree of patch {pid}") for d in rp["degrees"])
        except (KeyError, TypeError, ValueError) as exc:
            raise GridFileError(f"patch {i}: {exc}") from exc
        if pid in seen:
            raise GridFileError(f"duplicate patch id {pid!r}")
        seen.add(pid)
        if len(degrees) != len(blocks):
            raise GridFileError(f"patch {pid}: {len(degrees)} degrees for {len(blocks)} blocks")
        if any(d < 0 for d in degrees):
            raise GridFileError(f"patch {pid}: negative degree")
        try:
            s = Simplotope(base, blocks)
        except GeometryError as exc:
            raise GridFileError(f"patch {pid}: {exc}") from exc
        patches.append(Patch(pid, s, degrees))

    raw_adj = data.get("adjacencies", [])
    if raw_adj == "auto":
        adj: Any = "auto"
    elif isinstance(raw_adj, list):
        adj = []
        for a in raw_adj:
            if isinstance(a, dict) and "left" in a and "right" in a:
                pair = (str(a["left"]), str(a["right"]))
            elif isinstance(a, list) and len(a) == 2:
                pair = (str(a[0]), str(a[1]))
            else:
                raise GridFileError(f"bad adjacency entry {a!r}")
            for pid in pair:
                if pid not in seen:
                    raise GridFileError(f"adjacency refers to unknown patch {pid!r}")
            adj.append(pair)
        adj = tuple(adj)
    else:
        raise GridFileError("'adjacencies' must be a list or \"auto\"")
    order = _int(data.get("order", 1), "order")
    if order < 0:
        raise GridFileError("order must be >= 0")
    return GridFile(tuple(patches), adj, order)


def loads(text: str) -> GridFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GridFileError(f"invalid JSON: {exc}") from exc
    return _parse(data)


def load(path: str | Path) -> GridFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GridFileError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def dumps(grid: GridFile) -> str:
    return json.dumps(grid.to_dict(), indent=2) + "\n"
