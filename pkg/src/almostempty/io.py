"""Reading point files: CSV (x, y[, color], header optional) or JSON
{"points": [[x, y], ...], "colors": [...], "c": k}."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, InvalidOperation
from pathlib import Path
from typing import Optional

from .chromatic import Coloring
from .errors import ParseError
from .geometry import COORD_LIMIT, PointSet

HEADER_NAMES = {"x", "y", "color", "colour", "c"}


@dataclass
class PointFile:
    points: PointSet
    colors: Optional[tuple] = None
    c: Optional[int] = None

    def coloring(self, c: Optional[int] = None) -> Coloring:
        if self.colors is None:
            raise ParseError("file has no colors")
        k = c or self.c or max(self.colors)
        return Coloring(self.colors, k)


def _coord(text: str, scale: Optional[Decimal], where: str) -> int:
    text = text.strip()
    if scale is None:
        try:
            v = int(text)
        except ValueError:
            raise ParseError(f"{where}: {text!r} is not an integer (use --scale for real values)") from None
    else:
        try:
            v = int((Decimal(text) * scale).to_integral_value(rounding=ROUND_HALF_EVEN))
        except InvalidOperation:
            raise ParseError(f"{where}: {text!r} is not a number") from None
    if abs(v) >= COORD_LIMIT:
        raise ParseError(f"{where}: coordinate {v} outside (-2^31, 2^31)")
    return v


def _color(text: str, where: str) -> int:
    try:
        v = int(text.strip())
    except ValueError:
        raise ParseError(f"{where}: color {text!r} is not an integer") from None
    if v < 1:
        raise ParseError(f"{where}: colors start at 1, got {v}")
    return v


def _parse_csv(text: str, scale) -> tuple:
    pts, cols = [], []
    width = None
    first = True
    for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        if first:
            first = False
            if {f.strip().lower() for f in row} <= HEADER_NAMES:
                continue
        where = f"line {lineno}"
        if len(row) not in (2, 3):
            raise ParseError(f"{where}: expected 2 or 3 fields, got {len(row)}")
        if width is not None and len(row) != width:
            raise ParseError(f"{where}: {len(row)} fields, earlier rows have {width}")
        width = len(row)
        pts.append((_coord(row[0], scale, where), _coord(row[1], scale, where)))
        if width == 3:
            cols.append(_color(row[2], where))
    return pts, (tuple(cols) if width == 3 else None), None


def _parse_json(text: str, scale) -> tuple:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(doc, dict) or "points" not in doc:
        raise ParseError("JSON point file needs a 'points' list")
    pts = []
    for i, p in enumerate(doc["points"]):
        if not isinstance(p, (list, tuple)) or len(p) != 2:
            raise ParseError(f"points[{i}]: expected [x, y]")
        pts.append(tuple(_coord(str(v), scale, f"points[{i}]") for v in p))
    cols = doc.get("colors")
    if cols is not None:
        if len(cols) != len(pts):
            raise ParseError(f"{len(cols)} colors for {len(pts)} points")
        cols = tuple(_color(str(v), f"colors[{i}]") for i, v in enumerate(cols))
    c = doc.get("c")
    return pts, cols, (int(c) if c is not None else None)


def parse_points(text: str, fmt: str = "csv", scale=None, validate: bool = True) -> PointFile:
    scale = None if scale is None else Decimal(str(scale))
    pts, cols, c = (_parse_json if fmt == "json" else _parse_csv)(text, scale)
    if len(pts) == 0:
        raise ParseError("no points")
    if cols is not None and c is not None and max(cols) > c:
        raise ParseError(f"color {max(cols)} above c={c}")
    return PointFile(PointSet(pts, validate=validate), cols, c)


def read_point_file(path, scale=None, validate: bool = True) -> PointFile:
    path = Path(path)
    text = path.read_text()
    fmt = "json" if path.suffix.lower() == ".json" or text.lstrip().startswith("{") else "csv"
    return parse_points(text, fmt, scale, validate)


def parse_coloring(text: str, n: int, c: int) -> Coloring:
    """A digit string ("1213...") or comma-separated list, or @path to either."""
    if text.startswith("@"):
        text = Path(text[1:]).read_text().strip()
    parts = text.split(",") if "," in text else list(text.strip())
    try:
        cols = tuple(int(p) for p in parts)
    except ValueError:
        raise ParseError(f"bad coloring {text!r}") from None
    if len(cols) != n:
        raise ParseError(f"coloring has {len(cols)} entries for {n} points")
    return Coloring(cols, c)
