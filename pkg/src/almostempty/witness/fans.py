"""Star fans and the two witnesses built from them.

A star fan joins an apex to its angularly consecutive neighbours within one
color class.  Each fan triangle is empty of that class, and fan triangles
are pairwise interior-disjoint, so the other colors are spread over them;
that pigeonhole is what both witness bounds rest on.
"""

from __future__ import annotations

import numpy as np

from ..chromatic import Coloring, class_sizes, largest_class, scaled_discrepancy
from ..counting import BelowTable, build_below_table, interior_counts_fast
from ..errors import CertificationError, PreconditionError
from ..geometry import PointSet, TriangleIdx, angular_order, orient_array
from .report import WitnessReport, certify


def _fan_rows(P: PointSet, ids, apex: int) -> np.ndarray:
    ring = np.asarray(angular_order(P, apex, ids), dtype=np.intp)
    nxt = np.roll(ring, -1)
    # consecutive pairs turning by less than pi; drops the reflex gap of a hull apex
    keep = orient_array(P.xy, np.full(len(ring), apex), ring, nxt) > 0
    rows = np.stack([np.full(int(keep.sum()), apex), ring[keep], nxt[keep]], axis=1)
    return rows


def star_fan(P: PointSet, P1, apex: int) -> list:
    """Fan triangles (apex, q_i, q_i+1) over the points ``P1``.

    Gives |P1| - 2 triangles when the apex is a hull vertex of P1 and
    |P1| - 1 when it is interior.
    """
    ids = [int(i) for i in P1]
    if apex not in ids:
        raise ValueError("apex must belong to P1")
    if len(ids) < 3:
        raise ValueError("star fan needs at least 3 points")
    return [TriangleIdx.of(*r) for r in _fan_rows(P, ids, apex)]


def _fans_over_class(P: PointSet, ids) -> np.ndarray:
    ids = [int(i) for i in ids]
    if len(ids) < 3:
        return np.zeros((0, 3), dtype=np.intp)
    return np.concatenate([_fan_rows(P, ids, a) for a in ids])


def check_fan_disjoint(rows: np.ndarray, inner: np.ndarray, others: int) -> None:
    """Fan triangles around one apex are interior-disjoint and empty of the
    fanned class, so their interior counts sum to at most the number of
    points outside the class.  Checked per apex (column 0 of ``rows``)."""
    if len(rows) == 0:
        return
    apex, inv = np.unique(rows[:, 0], return_inverse=True)
    totals = np.bincount(inv, weights=inner)
    if (totals > others).any():
        a = int(apex[np.argmax(totals)])
        raise CertificationError(f"fan at apex {a} holds {int(totals.max())} interior points > {others}")


def theorem1_witness(P: PointSet, phi: Coloring, strict: bool = True,
                     table: BelowTable | None = None) -> WitnessReport:
    """Union over apices p in the largest class of the fan triangles with at
    most c-1 interior points.

    The guaranteed count is floor(|P1|^2 / (6c)) once n >= 4c^2.  Below that
    size ``strict`` raises; otherwise the report is returned with
    ``supported=False``.
    """
    c, n = phi.c, len(P)
    supported = n >= 4 * c * c
    if not supported and strict:
        raise PreconditionError(f"n={n} < 4c^2={4 * c * c}")
    sizes = class_sizes(phi)
    color = largest_class(sizes)
    p1 = phi.class_ids(color)
    table = table or build_below_table(P)
    rows = _fans_over_class(P, p1)
    inner = interior_counts_fast(table, rows)
    check_fan_disjoint(rows, inner, n - len(p1))
    tris = certify(P, phi, rows[inner <= c - 1], c - 1)
    report = WitnessReport(
        triangles=tris, colors=[color] * len(tris), s_cap=c - 1,
        claimed_bound=len(p1) ** 2 // (6 * c), supported=supported, certified=True)
    if not supported:
        report.notes.append(f"n={n} below 4c^2={4 * c * c}; bound not guaranteed")
    return report


def lemma3_bound(scaled: int, size: int, c: int) -> int:
    """ceil(delta |S| / (6c)) with delta = scaled / c."""
    return -(-scaled * size // (6 * c * c))


def discrepancy_witness(P: PointSet, S, phi: Coloring, strict: bool = True,
                        table: BelowTable | None = None) -> WitnessReport:
    """Fan triangles over the largest class of S with at most c-2 interior
    points of S.

    When delta(S) > 4(c-1)/c the count is at least ceil(delta |S| / (6c)).
    Without that, ``strict`` raises; otherwise the triangles are still
    certified but the bound is reported as unsupported.

    ``table`` may be a table over all of P; interiors are then counted against
    P, which agrees with counting against S whenever no point of P \\ S lies
    inside a triangle spanned by S (hull-closed subsets).
    """
    c = phi.c
    S = np.asarray(sorted(int(i) for i in S), dtype=np.intp)
    sizes = class_sizes(phi, S)
    disc = scaled_discrepancy(sizes, c) if len(S) else None
    supported = disc is not None and disc.exceeds_lemma_threshold()
    if not supported and strict:
        raise PreconditionError(
            f"delta(S) = {disc.delta if disc else 0} not above 4(c-1)/c = {4 * (c - 1)}/{c}")
    color = largest_class(sizes) if len(S) else 1
    s1 = S[phi.array[S] == color] if len(S) else S
    rows = _fans_over_class(P, s1)
    if table is None:
        inner = interior_counts_fast(build_below_table(P.subset(S)), np.searchsorted(S, rows))
    else:
        inner = interior_counts_fast(table, rows)
    check_fan_disjoint(rows, inner, (len(S) if table is None else len(P)) - len(s1))
    ref = S if table is None else None
    tris = certify(P, phi, rows[inner <= c - 2], c - 2, ref=ref)
    bound = lemma3_bound(disc.value, len(S), c) if disc is not None else 0
    report = WitnessReport(
        triangles=tris, colors=[color] * len(tris), s_cap=c - 2,
        claimed_bound=bound, supported=supported, certified=True)
    if not supported:
        report.notes.append("discrepancy at or below 4(c-1)/c; bound not guaranteed")
    return report
