"""The recursive peeling algorithm for c-colored sets: either some subset has
a large color discrepancy (and the fan witness applies to it) or a hull
vertex p* of the color-1 hull carries many almost-empty color-1 triangles,
is recorded and removed, and the process repeats.

Every subset handed to a witness here is hull-closed: points dropped earlier
lie outside the convex hull of what remains, and a fan region union sees only
hull vertices on its boundary.  So interiors counted against all of P equal
interiors counted against the subset, and one table on P serves the whole run.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..chromatic import Coloring, class_sizes, largest_class, scaled_discrepancy
from ..counting import (BelowTable, almost_empty_triangles, build_below_table,
                        per_point_incidence)
from ..errors import InternalCheckError, PreconditionError, SubadditivityError
from ..geometry import PointSet, convex_hull, orient_array
from .fans import discrepancy_witness
from .report import Comparison, Trace, WitnessReport, certify, exceeds_cube_root

logger = logging.getLogger(__name__)


def constants(c: int, K: Fraction | None = None) -> tuple:
    """(K, K') with K = 1/(8c^5) unless overridden, K' = c(2c+1)K."""
    K = Fraction(1, 8 * c**5) if K is None else Fraction(K)
    return K, c * (2 * c + 1) * K


def _delta(phi: Coloring, ids) -> tuple:
    sizes = class_sizes(phi, ids)
    if sum(sizes) == 0:
        return Fraction(0), sizes
    return scaled_discrepancy(sizes, phi.c).delta, sizes


@dataclass
class FanDecomposition:
    """Hull p_1..p_R clockwise; ``regions[b-1]`` holds the ids strictly
    inside the triangle (p_1, p_b+1, p_b+2)."""

    hull: tuple
    regions: list
    on_diagonal: list = field(default_factory=list)

    @property
    def R(self) -> int:
        return len(self.hull)

    def triangle(self, b: int) -> tuple:
        return self.hull[0], self.hull[b], self.hull[b + 1]


def fan_decompose(P: PointSet, Q, phi: Coloring, color: int | None = None) -> FanDecomposition:
    """Split CH(Q) by the diagonals from its first hull vertex.

    ``color`` (default: the largest class of Q) must own every hull vertex.
    A point exactly on a diagonal goes to the lower-indexed region and is
    listed in ``on_diagonal``.
    """
    Q = np.asarray(sorted(int(i) for i in Q), dtype=np.intp)
    hull = convex_hull(P, Q)
    if color is None:
        color = largest_class(class_sizes(phi, Q))
    off = [h for h in hull if phi.colors[h] != color]
    if off:
        raise PreconditionError(f"hull vertices {off} do not have color {color}")
    R = len(hull)
    rest = np.setdiff1d(Q, hull)
    regions = [np.zeros(0, dtype=np.intp) for _ in range(R - 2)]
    on_diag = []
    if len(rest):
        p1 = np.full(len(rest), hull[0])
        o = np.stack([orient_array(P.xy, p1, np.full(len(rest), hull[j]), rest) for j in range(1, R)])
        neg = (o < 0).sum(axis=0)
        zero = (o[1:-1] == 0).any(axis=0)
        if zero.any():
            on_diag = [int(q) for q in rest[zero]]
            logger.warning("points %s lie on a fan diagonal; assigned to the lower region", on_diag)
        # q clockwise of rays p1->p_2 .. p1->p_b+1 only: region b
        for b in range(1, R - 1):
            regions[b - 1] = rest[neg == b]
        if sum(len(r) for r in regions) != len(rest):
            raise InternalCheckError("fan regions do not partition the non-hull points")
    return FanDecomposition(tuple(int(h) for h in hull), regions, on_diag)


@dataclass(frozen=True)
class TbSplit:
    side: str  # "S2" (regions before b) or "S3" (regions up to b)
    ids: np.ndarray
    deltas: tuple  # delta(S1), delta(S2), delta(S3)
    divisor: int
    comparisons: tuple


def tb_split(phi: Coloring, regions, b: int, coeff, n: int, divisor: int = 2) -> TbSplit:
    """Given delta(S1) > coeff n^(1/3) for S1 = regions[b-1], return S2 (union
    of regions before b) or S3 (S2 plus S1), whichever has delta above
    coeff n^(1/3) / divisor, preferring S2.

    With divisor 2 this can fail for c >= 3 (only delta(S1) <=
    delta(S3) + (c-1) delta(S2) holds); divisor c always succeeds.
    """
    coeff = Fraction(coeff)
    s1 = np.asarray(regions[b - 1], dtype=np.intp)
    s2 = np.concatenate([np.asarray(r, dtype=np.intp) for r in regions[: b - 1]] + [np.zeros(0, np.intp)])
    s3 = np.concatenate([s2, s1])
    d1, z1 = _delta(phi, s1)
    if not exceeds_cube_root(d1, coeff, n):
        raise PreconditionError("delta(S1) does not exceed the threshold")
    d2, z2 = _delta(phi, s2)
    d3, z3 = _delta(phi, s3)
    half = coeff / divisor
    c2 = Comparison.make("delta(S2)", d2, half, n, z2)
    c3 = Comparison.make("delta(S3)", d3, half, n, z3)
    if c2.exceeded:
        side, ids = "S2", s2
    elif c3.exceeded:
        side, ids = "S3", s3
    else:
        raise SubadditivityError(
            f"neither delta(S2)={d2} nor delta(S3)={d3} exceeds 1/{divisor} of the threshold "
            f"(delta(S1)={d1})")
    return TbSplit(side, np.sort(ids), (d1, d2, d3), divisor, (c2, c3))


def _inside_hull(P: PointSet, hull, ids: np.ndarray) -> np.ndarray:
    """Mask of ids inside or on the clockwise polygon ``hull``."""
    h = np.asarray(hull, dtype=np.intp)
    nxt = np.roll(h, -1)
    o = orient_array(P.xy, h[:, None], nxt[:, None], ids[None, :])
    return (o <= 0).all(axis=0)


def theorem2_run(P: PointSet, phi: Coloring, K=None, table: BelowTable | None = None) -> WitnessReport:
    """Run the peeling algorithm and return certified triangles with at most
    c-2 interior points.

    ``K`` overrides the constant 1/(8c^5) (useful for exercising the later
    branches at small n).  Thresholds are compared exactly.  The report's
    ``claimed_bound`` is the discrepancy-lemma bound of the witness that
    ended the run (0 when the run ended by exhaustion); ``supported`` says
    whether that lemma's precondition held.  The n^(4/3) growth is never
    claimed, so ``asymptotic_only`` is set unless a supported witness ended
    the run.
    """
    c, n = phi.c, len(P)
    if c < 2:
        raise PreconditionError("need c >= 2")
    if len(phi.colors) != n:
        raise ValueError("coloring length does not match the point set")
    K, K2 = constants(c, K)
    table = table or build_below_table(P)
    color1 = largest_class(class_sizes(phi))
    t_stop = n // (c + 1)
    current = np.arange(n, dtype=np.intp)
    col = phi.array
    traces: list = []
    kept: list = []  # triangles recorded at p*-removal steps
    subject_ids = None

    def finish(branch, subject, ids, comps, detail, removed=None):
        traces.append(Trace(t, branch, subject, len(ids), tuple(class_sizes(phi, ids)),
                            comps, removed, detail))

    for t in range(t_stop + 1):
        if len(current) * c * (c + 1) < n:
            raise InternalCheckError(f"|P^({t})| = {len(current)} below n/(c(c+1))")
        comps = []
        d, sizes = _delta(phi, current)
        comps.append(Comparison.make("delta(P_t)", d, K, n, sizes))
        if comps[-1].exceeded:
            finish("discrepancy", "P_t", current, comps, {})
            subject_ids = current
            break
        c1 = current[col[current] == color1]
        if len(c1) < 3:
            finish("stop", "P_t", current, comps, {"reason": "fewer than 3 color-1 points"})
            break
        hull1 = convex_hull(P, c1)
        Q = current[_inside_hull(P, hull1, current)]
        d, sizes = _delta(phi, Q)
        comps.append(Comparison.make("delta(Q)", d, K, n, sizes))
        if comps[-1].exceeded:
            finish("discrepancy", "Q", Q, comps, {})
            subject_ids = Q
            break
        R = len(hull1)
        comps.append(Comparison.make("|V(CH(Q))|", R, K2, n))
        if comps[-1].exceeded:
            inner = np.setdiff1d(Q, hull1)
            finish("hull-size", "Q minus hull", inner, comps, {"R": R})
            subject_ids = inner
            break
        fd = fan_decompose(P, Q, phi, color1)
        region_d = [_delta(phi, r) for r in fd.regions]
        b = 1 + max(range(len(region_d)), key=lambda i: (region_d[i][0], -i))
        comps.append(Comparison.make(f"delta(T{b})", region_d[b - 1][0], K2, n, region_d[b - 1][1]))
        detail = {"R": R, "b": b}
        if fd.on_diagonal:
            detail["on_diagonal"] = fd.on_diagonal
        if comps[-1].exceeded:
            sizes3 = [len(fd.regions[b - 1]), sum(len(r) for r in fd.regions[: b - 1]),
                      sum(len(r) for r in fd.regions[b:])]
            pick = int(np.argmax(sizes3))
            detail["region_sizes"] = sizes3
            if pick == 0:
                subject, ids = f"T{b}", fd.regions[b - 1]
            else:
                regs = fd.regions if pick == 1 else fd.regions[::-1]
                bb = b if pick == 1 else len(fd.regions) - b + 1
                try:
                    split = tb_split(phi, regs, bb, K2, n, divisor=2)
                except SubadditivityError as exc:
                    detail["subadditivity_failure"] = str(exc)
                    split = tb_split(phi, regs, bb, K2, n, divisor=c)
                comps.extend(split.comparisons)
                detail["divisor"] = split.divisor
                where = "prefix" if pick == 1 else "suffix"
                subject = f"{where} {split.side}"
                ids = split.ids
            finish("fan-region", subject, ids, comps, detail)
            subject_ids = ids
            break
        # no region is unbalanced: peel the best vertex of the richest region
        ones = [int((col[r] == color1).sum()) for r in fd.regions]
        b = 1 + int(np.argmax(ones))
        corners = fd.triangle(b)
        r = fd.regions[b - 1]
        verts = np.concatenate([np.asarray(corners, dtype=np.intp), r[col[r] == color1]])
        inc = per_point_incidence(P, c - 2, restrict=verts, table=table)
        p_star = min(corners, key=lambda v: (-inc[v], v))
        tris, _ = almost_empty_triangles(P, c - 2, verts=verts, table=table)
        mine = tris[(tris == p_star).any(axis=1)] if len(tris) else tris
        kept.append(mine)
        comps.append(Comparison.make("p* incidence", int(inc[p_star]), Fraction(1, 6), n))
        detail = {"R": R, "b": b, "region_color1": ones[b - 1],
                  "incidence": {str(v): int(inc[v]) for v in corners}}
        if t >= t_stop:
            finish("stop", "Q", Q, comps, detail, removed=p_star)
            break
        finish("p*-removal", "Q", Q, comps, detail, removed=p_star)
        current = Q[Q != p_star]

    rows = [k for k in kept if len(k)]
    report_bound, supported, notes = 0, True, []
    if subject_ids is not None:
        witness = discrepancy_witness(P, subject_ids, phi, strict=False, table=table)
        rows.append(np.asarray(witness.triangles, dtype=np.intp).reshape(-1, 3))
        report_bound, supported = witness.claimed_bound, witness.supported
        notes.extend(witness.notes)
    tris = certify(P, phi, np.concatenate(rows) if rows else np.zeros((0, 3), np.intp), c - 2)
    if supported and subject_ids is not None and len(tris) < report_bound:
        raise InternalCheckError(f"{len(tris)} triangles below the lemma bound {report_bound}")
    return WitnessReport(
        triangles=tris, colors=[int(col[tr[0]]) for tr in tris], s_cap=c - 2,
        claimed_bound=report_bound, branch_trace=traces, supported=supported,
        asymptotic_only=not (supported and subject_ids is not None), certified=True, notes=notes)
