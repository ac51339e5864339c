"""Triangulations of a triangle plus m interior points in which at least
m + sqrt(m) + 1 triangles touch an outer vertex.

For m >= 1 the number of triangles touching an outer vertex equals the
number of edges joining an outer vertex to an interior point (each outer
vertex of degree d lies in d - 1 triangles, and each of the three outer
edges lies in exactly one).  So the task reduces to choosing many pairwise
non-crossing outer-to-inner edges; any such choice extends to a
triangulation.

Construction.  For a side uv of the outer triangle, let q < q' when q lies
inside the triangle (u, v, q').  A chain s_1 < ... < s_k can be joined to
both u and v, s_k also to the third vertex w, and every remaining point sits
inside one of the triangles (u,v,s_1), (u,s_i,s_i+1), (v,s_i,s_i+1),
(u,s_k,w), (v,s_k,w) and is joined to an outer corner of it.  That gives
m + k + 1 outer edges.  Two points incomparable for side uv are comparable
for side uw, so the longest chain over the three sides has length at least
ceil(sqrt(m)).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

from ..errors import OrderLemmaError
from ..geometry import Point, PointSet, orient, orient_array

EXHAUSTIVE_MAX_M = 10


def order_target(m: int) -> int:
    """ceil(m + sqrt(m) + 1)."""
    if m == 0:
        return 1
    return m + isqrt(m - 1) + 2


@dataclass(frozen=True)
class OrderTriangulation:
    """Local ids: 0, 1, 2 are the outer vertices, 3.. the interior points."""

    points: tuple
    triangles: tuple
    incidence: int
    method: str
    chain: tuple = ()

    @property
    def m(self) -> int:
        return len(self.points) - 3

    def meets_bound(self) -> bool:
        return self.incidence >= order_target(self.m)


def _crossing_mask(xy, p: int, q: int, ea: np.ndarray, eb: np.ndarray) -> np.ndarray:
    """Which edges (ea[i], eb[i]) properly cross segment pq."""
    s1 = orient_array(xy, p, q, ea).astype(np.int64) * orient_array(xy, p, q, eb)
    s2 = orient_array(xy, ea, eb, p).astype(np.int64) * orient_array(xy, ea, eb, q)
    return (s1 < 0) & (s2 < 0)


def _complete(P: PointSet, edges: set) -> set:
    """Greedily add shortest non-crossing segments until maximal."""
    n = len(P)
    edges = {tuple(sorted(e)) for e in edges}
    pts = P.points
    cand = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges]
    cand.sort(key=lambda e: ((pts[e[0]].x - pts[e[1]].x) ** 2 + (pts[e[0]].y - pts[e[1]].y) ** 2, e))
    ea = np.array([e[0] for e in edges], dtype=np.intp)
    eb = np.array([e[1] for e in edges], dtype=np.intp)
    for i, j in cand:
        if len(ea) and _crossing_mask(P.xy, i, j, ea, eb).any():
            continue
        edges.add((i, j))
        ea = np.append(ea, i)
        eb = np.append(eb, j)
    return edges


def _faces(P: PointSet, edges: set) -> list:
    adj = {i: set() for i in range(len(P))}
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    pts = P.points
    tris = []
    for i, j in sorted(edges):
        for k in sorted(adj[i] & adj[j]):
            if k <= j:
                continue
            a, b, c = pts[i], pts[j], pts[k]
            s = orient(a, b, c)
            empty = not any(
                orient(a, b, p) == s and orient(b, c, p) == s and orient(c, a, p) == s
                for idx, p in enumerate(pts) if idx not in (i, j, k))
            if empty:
                tris.append((i, j, k))
    return tris


def check_triangulation(P: PointSet, tris) -> None:
    """Raise OrderLemmaError unless ``tris`` triangulates the outer triangle
    (ids 0, 1, 2) of P: right count, empty triangles, non-crossing edges and
    areas summing to the outer area."""
    pts = P.points
    m = len(P) - 3
    if len(tris) != 2 * m + 1:
        raise OrderLemmaError(f"{len(tris)} triangles, expected {2 * m + 1}")

    def area2(a, b, c):
        return abs((pts[b].x - pts[a].x) * (pts[c].y - pts[a].y) - (pts[b].y - pts[a].y) * (pts[c].x - pts[a].x))

    if sum(area2(*t) for t in tris) != area2(0, 1, 2):
        raise OrderLemmaError("triangle areas do not sum to the outer area")
    for t in tris:
        a, b, c = (pts[i] for i in t)
        s = orient(a, b, c)
        if s == 0:
            raise OrderLemmaError(f"degenerate triangle {t}")
        for idx, p in enumerate(pts):
            if idx not in t and orient(a, b, p) == s and orient(b, c, p) == s and orient(c, a, p) == s:
                raise OrderLemmaError(f"triangle {t} contains point {idx}")
    edges = sorted({tuple(sorted(e)) for t in tris for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2]))})
    ea = np.array([e[0] for e in edges])
    eb = np.array([e[1] for e in edges])
    for i, j in edges:
        if _crossing_mask(P.xy, i, j, ea, eb).any():
            raise OrderLemmaError(f"edge {(i, j)} crosses another edge")


def _incidence(tris) -> int:
    return sum(1 for t in tris if min(t) <= 2)


def _longest_chain(P: PointSet, u: int, v: int) -> list:
    inner = np.arange(3, len(P))
    if len(inner) == 0:
        return []
    xy = P.xy
    # larger |area(u, v, q)| for q higher in the order
    height = np.array([abs((P[v].x - P[u].x) * (P[q].y - P[u].y) - (P[v].y - P[u].y) * (P[q].x - P[u].x))
                       for q in inner], dtype=object)
    srt = np.array(sorted(inner, key=lambda q: height[q - 3]), dtype=np.intp)
    qi, qj = srt[:, None], srt[None, :]
    side = orient(P[u], P[v], P[int(srt[0])])
    # below[i, j]: srt[i] strictly inside triangle (u, v, srt[j])
    below = (orient_array(xy, v, qj, qi) == side) & (orient_array(xy, qj, u, qi) == side)
    np.fill_diagonal(below, False)
    best = np.ones(len(srt), dtype=np.int64)
    prev = np.full(len(srt), -1)
    for j in range(len(srt)):
        cands = np.flatnonzero(below[:j, j])
        if len(cands):
            i = cands[np.argmax(best[cands])]
            best[j] = best[i] + 1
            prev[j] = i
    j = int(np.argmax(best))
    chain = []
    while j >= 0:
        chain.append(int(srt[j]))
        j = int(prev[j])
    return chain[::-1]


def _chain_edges(P: PointSet, u: int, v: int, w: int, chain: list) -> set:
    edges = {(0, 1), (1, 2), (0, 2)}
    for s in chain:
        edges |= {(u, s), (v, s)}
    edges.add((w, chain[-1]))
    regions = [((u, v, chain[0]), u)]
    for a, b in zip(chain, chain[1:]):
        regions += [((u, a, b), u), ((v, a, b), v)]
    regions += [((u, chain[-1], w), u), ((v, chain[-1], w), v)]
    rest = sorted(set(range(3, len(P))) - set(chain))
    pts = P.points
    for q in rest:
        for tri, corner in regions:
            a, b, c = (pts[i] for i in tri)
            s = orient(a, b, c)
            if orient(a, b, pts[q]) == s and orient(b, c, pts[q]) == s and orient(c, a, pts[q]) == s:
                edges.add((corner, q))
                break
        else:
            raise OrderLemmaError(f"point {q} not inside any chain region")
    return {tuple(sorted(e)) for e in edges}


def _max_outer_edges(P: PointSet) -> set:
    """Largest set of pairwise non-crossing outer-to-inner edges, by
    branch-and-bound over all subsets."""
    m = len(P) - 3
    cand = [(o, q) for o in range(3) for q in range(3, 3 + m)]
    k = len(cand)
    ea = np.array([e[0] for e in cand])
    eb = np.array([e[1] for e in cand])
    conflict = [0] * k
    for i, (o, q) in enumerate(cand):
        mask = _crossing_mask(P.xy, o, q, ea, eb)
        conflict[i] = sum(1 << j for j in np.flatnonzero(mask))
    best = [0, 0]

    def rec(avail: int, chosen: int, size: int):
        if avail == 0:
            if size > best[0]:
                best[0], best[1] = size, chosen
            return
        if size + bin(avail).count("1") <= best[0]:
            return
        # branch on the available edge with the most conflicts
        bits = [j for j in range(k) if avail >> j & 1]
        j = max(bits, key=lambda b: bin(conflict[b] & avail).count("1"))
        if conflict[j] & avail == 0:
            rec(0, chosen | avail, size + len(bits))
            return
        rec(avail & ~conflict[j] & ~(1 << j), chosen | (1 << j), size + 1)
        rec(avail & ~(1 << j), chosen, size)

    rec((1 << k) - 1, 0, 0)
    return {tuple(sorted(cand[j])) for j in range(k) if best[1] >> j & 1}


def _local_set(outer, inner) -> PointSet:
    pts = [Point(int(p[0]), int(p[1])) for p in list(outer) + list(inner)]
    a, b, c = pts[:3]
    s = orient(a, b, c)
    if s == 0:
        raise ValueError("outer triangle is degenerate")
    for p in pts[3:]:
        if not (orient(a, b, p) == s and orient(b, c, p) == s and orient(c, a, p) == s):
            raise ValueError(f"point {tuple(p)} is not strictly inside the outer triangle")
    return PointSet(pts)


def order_triangulate_exhaustive(outer, inner) -> OrderTriangulation:
    """Optimal triangulation for the outer-incidence count (small m only)."""
    P = _local_set(outer, inner)
    m = len(P) - 3
    if m > EXHAUSTIVE_MAX_M:
        raise ValueError(f"exhaustive search limited to m <= {EXHAUSTIVE_MAX_M}")
    edges = {(0, 1), (1, 2), (0, 2)} | _max_outer_edges(P)
    tris = _faces(P, _complete(P, edges))
    check_triangulation(P, tris)
    return OrderTriangulation(P.points, tuple(tris), _incidence(tris), "exhaustive")


def order_triangulate(outer, inner) -> OrderTriangulation:
    """Triangulate the outer triangle and its interior points so that at
    least ceil(m + sqrt(m) + 1) triangles have an outer vertex.

    Validity and the incidence bound are checked before returning.  If the
    chain construction ever misses the bound, the exhaustive search takes over
    for m <= 10; beyond that OrderLemmaError is raised.
    """
    P = _local_set(outer, inner)
    m = len(P) - 3
    if m == 0:
        return OrderTriangulation(P.points, ((0, 1, 2),), 1, "chain")
    best = None
    for u, v, w in ((0, 1, 2), (1, 2, 0), (0, 2, 1)):
        chain = _longest_chain(P, u, v)
        if best is None or len(chain) > len(best[3]):
            best = (u, v, w, chain)
    u, v, w, chain = best
    tris = _faces(P, _complete(P, _chain_edges(P, u, v, w, chain)))
    check_triangulation(P, tris)
    result = OrderTriangulation(P.points, tuple(tris), _incidence(tris), "chain", tuple(chain))
    if result.meets_bound():
        return result
    if m <= EXHAUSTIVE_MAX_M:
        fallback = order_triangulate_exhaustive(outer, inner)
        if fallback.meets_bound():
            return fallback
    raise OrderLemmaError(f"incidence {result.incidence} below {order_target(m)} for m={m}")
