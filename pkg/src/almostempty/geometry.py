"""Exact planar predicates over integer coordinates.

Everything downstream (interior counts, hulls, fans) reduces to the sign of
a 2x2 determinant of coordinate differences.  Scalar predicates use Python
integers, so they are exact for any input.  The vectorized helpers run in
int64 whenever the coordinate span of the set is below 2**31 (then every
determinant is below 2**63 in magnitude) and drop to object arrays of Python
integers otherwise.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Iterable, NamedTuple, Sequence

import numpy as np

logger = logging.getLogger(__name__)

COORD_LIMIT = 2**31


class Point(NamedTuple):
    x: int
    y: int


class TriangleIdx(NamedTuple):
    i: int
    j: int
    k: int

    @classmethod
    def of(cls, a: int, b: int, c: int) -> "TriangleIdx":
        i, j, k = sorted((int(a), int(b), int(c)))
        if i == j or j == k:
            raise ValueError(f"triangle needs three distinct ids, got {(a, b, c)}")
        return cls(i, j, k)


class GeneralPositionError(ValueError):
    """Raised when a point set has a duplicate pair or a collinear triple."""

    def __init__(self, violation: "Violation"):
        super().__init__(str(violation))
        self.violation = violation


@dataclass(frozen=True)
class Violation:
    kind: str  # "duplicate" or "collinear"
    ids: tuple

    def __str__(self):
        return f"{self.kind} points {', '.join(map(str, self.ids))}"


def _as_int(v) -> int:
    if isinstance(v, (bool, np.bool_)):
        raise TypeError("boolean is not a coordinate")
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)) and float(v).is_integer():
        return int(v)
    raise TypeError(f"coordinates must be integers, got {v!r}")


def orient(a, b, c) -> int:
    """Sign of (b - a) x (c - a): +1 counterclockwise, -1 clockwise, 0 collinear."""
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def strictly_inside(p, t) -> bool:
    a, b, c = t
    s = orient(a, b, c)
    if s == 0:
        raise ValueError("degenerate triangle")
    return orient(a, b, p) == s and orient(b, c, p) == s and orient(c, a, p) == s


class PointSet:
    """Immutable ordered set of integer points; ids are positions 0..n-1.

    By default construction rejects duplicates and collinear triples.  Pass
    ``validate=False`` only for inputs that are checked separately (the CLI's
    ``--allow-degenerate`` path, or the generator's resample loop).
    """

    def __init__(self, points: Iterable, validate: bool = True):
        pts = []
        for p in points:
            x, y = p
            x, y = _as_int(x), _as_int(y)
            if not (-COORD_LIMIT < x < COORD_LIMIT and -COORD_LIMIT < y < COORD_LIMIT):
                raise ValueError(f"coordinate out of range (|v| < 2**31): {(x, y)}")
            pts.append(Point(x, y))
        self._points = tuple(pts)
        n = len(pts)
        xy = np.array([[p.x, p.y] for p in pts], dtype=np.int64).reshape(n, 2)
        span_ok = n == 0 or bool(np.all(xy.max(axis=0) - xy.min(axis=0) < COORD_LIMIT))
        self.exact_int64 = span_ok
        if not span_ok:
            xy = np.array([[p.x, p.y] for p in pts], dtype=object).reshape(n, 2)
        xy.setflags(write=False)
        self.xy = xy
        order = sorted(range(n), key=lambda i: (pts[i].x, pts[i].y))
        self.lex_order = np.array(order, dtype=np.intp)
        self.lex_rank = np.empty(n, dtype=np.intp)
        self.lex_rank[self.lex_order] = np.arange(n)
        self.lex_order.setflags(write=False)
        self.lex_rank.setflags(write=False)
        if validate:
            v = validate_general_position(self)
            if v is not None:
                raise GeneralPositionError(v)

    def __len__(self):
        return len(self._points)

    def __getitem__(self, i) -> Point:
        return self._points[i]

    def __iter__(self):
        return iter(self._points)

    def __repr__(self):
        return f"PointSet(n={len(self)})"

    def __eq__(self, other):
        return isinstance(other, PointSet) and self._points == other._points

    def __hash__(self):
        return hash(self._points)

    @property
    def points(self) -> tuple:
        return self._points

    def subset(self, ids: Sequence[int]) -> "PointSet":
        """Sub-point-set in the given id order (general position is inherited)."""
        return PointSet([self._points[i] for i in ids], validate=False)

    def triangle(self, t) -> tuple:
        return tuple(self._points[i] for i in t)


def orient_array(xy, a, b, c) -> np.ndarray:
    """Vectorized orient over broadcastable index arrays into ``xy``."""
    ax, ay = xy[a, 0], xy[a, 1]
    d = np.asarray((xy[b, 0] - ax) * (xy[c, 1] - ay) - (xy[b, 1] - ay) * (xy[c, 0] - ax))
    if d.dtype == object:
        return ((d > 0).astype(np.int8) - (d < 0).astype(np.int8))
    return np.sign(d).astype(np.int8)


def _canonical_directions(d: np.ndarray) -> np.ndarray:
    dx, dy = d[:, 0], d[:, 1]
    if d.dtype == object:
        from math import gcd

        g = np.array([gcd(int(u), int(v)) for u, v in zip(dx, dy)], dtype=object)
    else:
        g = np.gcd(dx, dy)
    ux, uy = dx // g, dy // g
    flip = (ux < 0) | ((ux == 0) & (uy < 0))
    ux = np.where(flip, -ux, ux)
    uy = np.where(flip, -uy, uy)
    return np.stack([ux, uy], axis=1)


def validate_general_position(P: PointSet):
    """Return None when P is in general position, else the first Violation.

    Duplicates are reported as the smallest id pair; collinear triples as the
    lexicographically smallest id triple.  Runs in O(n^2 log n) by grouping the
    reduced direction vectors from each point to the later ids.
    """
    n = len(P)
    if n < 2:
        return None
    xy = P.xy
    first = {}
    dup = None
    for i, p in enumerate(P):
        if p in first:
            cand = (first[p], i)
            if dup is None or cand < dup:
                dup = cand
        else:
            first[p] = i
    if dup is not None:
        return Violation("duplicate", dup)
    for i in range(n - 2):
        later = np.arange(i + 1, n)
        dirs = _canonical_directions(xy[later] - xy[i])
        if dirs.dtype == object:
            keys = {}
            best = None
            for idx, (u, v) in zip(later, dirs):
                key = (int(u), int(v))
                if key in keys:
                    cand = (keys[key], int(idx))
                    if best is None or cand < best:
                        best = cand
                else:
                    keys[key] = int(idx)
            if best is not None:
                return Violation("collinear", (i,) + best)
            continue
        srt = np.lexsort((later, dirs[:, 1], dirs[:, 0]))
        sd = dirs[srt]
        same = np.all(sd[1:] == sd[:-1], axis=1)
        if not same.any():
            continue
        # the first member of each group is its smallest id; the pair
        # (group min, group second) minimizes over that group
        best = None
        for pos in np.flatnonzero(same):
            if pos > 0 and same[pos - 1]:
                continue
            cand = (int(later[srt[pos]]), int(later[srt[pos + 1]]))
            if best is None or cand < best:
                best = cand
        return Violation("collinear", (i,) + best)
    return None


def convex_hull(P: PointSet, ids: Sequence[int] | None = None) -> list:
    """Extreme points of P (or of the subset ``ids``), clockwise.

    The cycle starts at the lexicographically smallest (x, then y) point.
    Monotone chain with exact predicates; points on a hull edge are dropped.
    """
    if ids is None:
        ids = range(len(P))
    ids = sorted(ids, key=lambda i: (P[i].x, P[i].y))
    if len(ids) < 3:
        raise ValueError("convex hull needs at least 3 points")
    pts = P.points

    def chain(seq):
        out = []
        for i in seq:
            while len(out) >= 2 and orient(pts[out[-2]], pts[out[-1]], pts[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(ids)
    upper = chain(reversed(ids))
    ccw = lower[:-1] + upper[:-1]
    return [ccw[0]] + ccw[:0:-1]


def angular_order(P: PointSet, apex: int, ids: Sequence[int]) -> list:
    """Sort ``ids`` counterclockwise around ``apex`` by exact angle.

    The order starts at the positive x direction.  A float pre-sort is
    verified pairwise with exact predicates and redone with an exact
    comparator when the floats were not fine enough.
    """
    ids = [i for i in ids if i != apex]
    if len(ids) < 2:
        return list(ids)
    a = P[apex]
    idx = np.asarray(ids)
    d = P.xy[idx] - P.xy[apex]
    dx = d[:, 0].astype(np.float64)
    dy = d[:, 1].astype(np.float64)
    half = np.where((d[:, 1] > 0) | ((d[:, 1] == 0) & (d[:, 0] > 0)), 0, 1)
    ang = np.arctan2(dy, dx)
    ang = np.where(half == 1, ang + 2 * np.pi * (ang < 0), ang)
    srt = idx[np.lexsort((ang, half))]
    hs = half[np.lexsort((ang, half))]
    same_half = hs[1:] == hs[:-1]
    o = orient_array(P.xy, np.full(len(srt) - 1, apex), srt[:-1], srt[1:])
    if np.all(o[same_half] > 0):
        return [int(v) for v in srt]

    def key_half(i):
        p = P[i]
        return 0 if (p.y > a.y or (p.y == a.y and p.x > a.x)) else 1

    def cmp(i, j):
        hi, hj = key_half(i), key_half(j)
        if hi != hj:
            return hi - hj
        return -orient(a, P[i], P[j])

    return sorted(ids, key=cmp_to_key(cmp))
