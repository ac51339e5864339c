"""Interior-point counts of triangles, in an O(n^4) oracle tier and an
O(n^3) table tier that must agree exactly.

The table tier stores, for every pair a < b in lexicographic (x, then y)
order, the number of points strictly between them in that order and strictly
below the directed segment a -> b.  A triangle a < b < c then has

    B(a,b) + B(b,c) - B(a,c)        if b is above a -> c
    B(a,c) - B(a,b) - B(b,c) - 1    if b is below a -> c  (b itself is in B(a,c))

points in its interior.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .geometry import PointSet, TriangleIdx, orient, orient_array

logger = logging.getLogger(__name__)

# n*n int32 entries; beyond this the engine counts by direct scan instead
MAX_TABLE_POINTS = 6000
_CHUNK = 1 << 21


def interior_count_oracle(P: PointSet, t) -> int:
    a, b, c = (P[i] for i in t)
    s = orient(a, b, c)
    if s == 0:
        raise ValueError(f"degenerate triangle {tuple(t)}")
    skip = set(t)
    count = 0
    for idx, p in enumerate(P):
        if idx in skip:
            continue
        if orient(a, b, p) == s and orient(b, c, p) == s and orient(c, a, p) == s:
            count += 1
    return count


def interior_counts(P: PointSet, tris, ref: Sequence[int] | None = None) -> np.ndarray:
    """Direct-scan interior counts for many triangles at once.

    ``tris`` is a (t, 3) id array; points counted are those of ``ref`` (all of
    P by default).  Vertices never count: their orientation against one edge
    is zero.
    """
    tris = np.asarray(tris, dtype=np.intp).reshape(-1, 3)
    xy = P.xy
    q = np.arange(len(P)) if ref is None else np.asarray(ref, dtype=np.intp)
    out = np.zeros(len(tris), dtype=np.int64)
    if len(tris) == 0 or len(q) == 0:
        return out
    qx, qy = xy[q, 0][None, :], xy[q, 1][None, :]
    step = max(1, _CHUNK // len(q))
    for lo in range(0, len(tris), step):
        t = tris[lo:lo + step]
        signs = []
        for u, v in ((0, 1), (1, 2), (2, 0)):
            ax, ay = xy[t[:, u], 0][:, None], xy[t[:, u], 1][:, None]
            bx, by = xy[t[:, v], 0][:, None], xy[t[:, v], 1][:, None]
            d = (bx - ax) * (qy - ay) - (by - ay) * (qx - ax)
            signs.append((d > 0).astype(np.int8) - (d < 0).astype(np.int8))
        s0, s1, s2 = signs
        out[lo:lo + step] = ((s0 == s1) & (s1 == s2) & (s0 != 0)).sum(axis=1)
    return out


def _orient_matrix(xy, a: int, ids: np.ndarray) -> np.ndarray:
    """M[j, k] = orient(a, ids[j], ids[k])."""
    dx = xy[ids, 0] - xy[a, 0]
    dy = xy[ids, 1] - xy[a, 1]
    d = dx[:, None] * dy[None, :] - dy[:, None] * dx[None, :]
    if d.dtype == object:
        return (d > 0).astype(np.int8) - (d < 0).astype(np.int8)
    return np.sign(d).astype(np.int8)


@dataclass(frozen=True)
class BelowTable:
    """Pair counts in lexicographic-rank space.

    ``counts[ra, rb]`` (ra < rb) is the number of points with rank strictly
    between ra and rb lying strictly on the clockwise side of the segment
    from rank ra to rank rb.  Entries with ra >= rb are zero and unused.
    """

    points: PointSet
    counts: np.ndarray

    def below(self, a: int, b: int) -> int:
        ra, rb = self.points.lex_rank[a], self.points.lex_rank[b]
        if ra >= rb:
            raise ValueError("below(a, b) needs a lexicographically before b")
        return int(self.counts[ra, rb])

    def above(self, a: int, b: int) -> int:
        ra, rb = self.points.lex_rank[a], self.points.lex_rank[b]
        return int(rb - ra - 1) - self.below(a, b)


def build_below_table(P: PointSet) -> BelowTable:
    n = len(P)
    order = P.lex_order
    counts = np.zeros((n, n), dtype=np.int32)
    for u in range(n - 2):
        later = order[u + 1:]
        # b below a->c  <=>  orient(a, b, c) > 0 for lex a < b < c
        ccw = np.triu(_orient_matrix(P.xy, order[u], later) > 0, k=1)
        counts[u, u + 1:] = ccw.sum(axis=0)
    counts.setflags(write=False)
    return BelowTable(P, counts)


def interior_count_fast(T: BelowTable, P: PointSet, t) -> int:
    a, b, c = sorted(t, key=lambda i: P.lex_rank[i])
    if orient(P[a], P[b], P[c]) > 0:
        return T.below(a, c) - T.below(a, b) - T.below(b, c) - 1
    return T.below(a, b) + T.below(b, c) - T.below(a, c)


def _rank_sorted(P: PointSet, verts) -> np.ndarray:
    if verts is None:
        return np.asarray(P.lex_order)
    verts = np.unique(np.asarray(verts, dtype=np.intp))
    return verts[np.argsort(P.lex_rank[verts], kind="stable")]


def triangle_blocks(P: PointSet, verts=None, table: BelowTable | None = None) -> Iterator[tuple]:
    """Yield ``(a, b_ids, c_ids, interior)`` covering every triangle on ``verts``.

    Each block holds the triangles whose lexicographically smallest vertex is
    ``a``; interiors are counted against all of P.  With a table this is
    O(1) per triangle, without one it is a direct scan.
    """
    ids = _rank_sorted(P, verts)
    m = len(ids)
    for u in range(m - 2):
        a = int(ids[u])
        later = ids[u + 1:]
        jj, kk = np.triu_indices(len(later), k=1)
        b, c = later[jj], later[kk]
        if table is None:
            tris = np.stack([np.full(len(b), a), b, c], axis=1)
            inner = interior_counts(P, tris)
        else:
            ranks = P.lex_rank[later]
            ra = P.lex_rank[a]
            tab = table.counts[ra, ranks].astype(np.int64)
            tbc = table.counts[np.ix_(ranks, ranks)][jj, kk].astype(np.int64)
            ccw = _orient_matrix(P.xy, a, later)[jj, kk] > 0
            tb, tc = tab[jj], tab[kk]
            inner = np.where(ccw, tc - tb - tbc - 1, tb + tbc - tc)
        yield a, b, c, inner


def _table_for(P: PointSet, table, max_table_points) -> BelowTable | None:
    if table is not None:
        return table
    if len(P) > max_table_points:
        logger.info("n=%d above table threshold, counting by direct scan", len(P))
        return None
    return build_below_table(P)


@dataclass(frozen=True)
class InteriorProfile:
    """z[r] = number of triangles with exactly r interior points, r <= r_max."""

    z: tuple
    n: int

    @property
    def r_max(self) -> int:
        return len(self.z) - 1

    def cumulative(self) -> tuple:
        return tuple(int(v) for v in np.cumsum(self.z))

    def at_most(self, s: int) -> int:
        if s > self.r_max:
            raise ValueError(f"profile only reaches r={self.r_max}")
        return int(sum(self.z[: s + 1]))

    def to_dict(self) -> dict:
        return {"n": self.n, "r_max": self.r_max, "z_eq": list(self.z), "z_le": list(self.cumulative())}


def _check_rmax(n: int, r_max: int):
    if n < 3:
        raise ValueError("need at least 3 points")
    if not 0 <= r_max <= n - 3:
        raise ValueError(f"r_max must be in [0, {n - 3}], got {r_max}")


def profile(P: PointSet, r_max: int, table: BelowTable | None = None,
            max_table_points: int = MAX_TABLE_POINTS) -> InteriorProfile:
    n = len(P)
    _check_rmax(n, r_max)
    table = _table_for(P, table, max_table_points)
    z = np.zeros(r_max + 1, dtype=np.int64)
    for _, _, _, inner in triangle_blocks(P, table=table):
        z += np.bincount(inner[inner <= r_max], minlength=r_max + 1)
    prof = InteriorProfile(tuple(int(v) for v in z), n)
    if r_max == n - 3 and sum(prof.z) != comb(n, 3):
        raise AssertionError("profile does not partition all triangles")
    if prof.z[0] < comb(n - 1, 2):
        logger.warning("Z<=0 = %d below C(n-1, 2) = %d", prof.z[0], comb(n - 1, 2))
    return prof


def profile_oracle(P: PointSet, r_max: int) -> InteriorProfile:
    """Same as ``profile`` but every triangle is scanned against every point."""
    n = len(P)
    _check_rmax(n, r_max)
    z = np.zeros(r_max + 1, dtype=np.int64)
    for _, _, _, inner in triangle_blocks(P, table=None):
        z += np.bincount(inner[inner <= r_max], minlength=r_max + 1)
    return InteriorProfile(tuple(int(v) for v in z), n)


def almost_empty_triangles(P: PointSet, s: int, verts=None, table: BelowTable | None = None,
                           max_table_points: int = MAX_TABLE_POINTS):
    """All triangles on ``verts`` with at most s interior points of P.

    Returns ``(tris, interior)``: a (t, 3) array of ids sorted within each row
    and rows in lexicographic order, and the matching interior counts.
    """
    table = _table_for(P, table, max_table_points)
    rows, inner_all = [], []
    for a, b, c, inner in triangle_blocks(P, verts, table):
        keep = inner <= s
        if keep.any():
            rows.append(np.stack([np.full(int(keep.sum()), a), b[keep], c[keep]], axis=1))
            inner_all.append(inner[keep])
    if not rows:
        return np.zeros((0, 3), dtype=np.intp), np.zeros(0, dtype=np.int64)
    tris = np.sort(np.concatenate(rows), axis=1)
    inner = np.concatenate(inner_all)
    srt = np.lexsort((tris[:, 2], tris[:, 1], tris[:, 0]))
    return tris[srt], inner[srt]


def per_point_incidence(P: PointSet, s: int, restrict=None, table: BelowTable | None = None,
                        max_table_points: int = MAX_TABLE_POINTS) -> np.ndarray:
    """Per point id, the number of incident triangles with at most s interior points.

    With ``restrict`` only triangles whose vertices all lie in that subset are
    counted; interiors are always counted against all of P.
    """
    table = _table_for(P, table, max_table_points)
    inc = np.zeros(len(P), dtype=np.int64)
    for a, b, c, inner in triangle_blocks(P, restrict, table):
        keep = inner <= s
        inc[a] += int(keep.sum())
        np.add.at(inc, b[keep], 1)
        np.add.at(inc, c[keep], 1)
    return inc


def canonical(t) -> TriangleIdx:
    return TriangleIdx.of(*t)


def interior_counts_fast(T: BelowTable, tris) -> np.ndarray:
    """Table lookups for a (t, 3) id array, same values as ``interior_counts``."""
    P = T.points
    tris = np.asarray(tris, dtype=np.intp).reshape(-1, 3)
    if len(tris) == 0:
        return np.zeros(0, dtype=np.int64)
    r = P.lex_rank[tris]
    srt = np.argsort(r, axis=1, kind="stable")
    a, b, c = (np.take_along_axis(tris, srt[:, i:i + 1], axis=1)[:, 0] for i in range(3))
    ra, rb, rc = P.lex_rank[a], P.lex_rank[b], P.lex_rank[c]
    tab = T.counts[ra, rb].astype(np.int64)
    tbc = T.counts[rb, rc].astype(np.int64)
    tac = T.counts[ra, rc].astype(np.int64)
    ccw = orient_array(P.xy, a, b, c) > 0
    return np.where(ccw, tac - tab - tbc - 1, tab + tbc - tac)
