"""Minimum number of monochromatic almost-empty triangles over colorings of
a fixed point set: exact by enumeration for tiny n, simulated annealing
beyond.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .chromatic import Coloring, mono_count, mono_count_from_triangles
from .counting import almost_empty_triangles, build_below_table
from .errors import InstanceTooLargeError, InternalCheckError, PreconditionError
from .geometry import PointSet
from .witness import theorem1_witness, theorem2_run

EXHAUSTIVE_LIMIT = 10**7

# annealing defaults, recorded in every local result
ANNEAL = {"restarts": 4, "t_start": 2.0, "t_end": 0.02}


@dataclass
class SearchResult:
    coloring: Coloring
    value: int
    method: str
    iterations: int
    seed: Optional[int]
    budget: Optional[int]
    certified: bool
    schedule: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"coloring": self.coloring.digits(), "c": self.coloring.c, "value": self.value,
                "method": self.method, "iterations": self.iterations, "seed": self.seed,
                "budget": self.budget, "certified": self.certified, "schedule": dict(self.schedule)}


def _check_c(c: int):
    if c < 2:
        raise PreconditionError("need c >= 2")


def _verify(P: PointSet, phi: Coloring, s: int, value: int):
    again = mono_count(P, phi, s)
    if again != value:
        raise InternalCheckError(f"stored value {value} but mono_count gives {again}")


def _rgs_batches(n: int, c: int, batch: int = 1 << 14):
    """Colorings with point 0 colored 1 and each new color first used in
    increasing order (one per class of label permutations), in batches."""
    stack = [(np.ones((1, 1), dtype=np.int8), np.ones(1, dtype=np.int8))]
    while stack:
        rows, top = stack.pop()
        if rows.shape[1] == n:
            yield rows
            continue
        parts, tops = [], []
        for col in range(c, 0, -1):
            ok = top + 1 >= col
            if ok.any():
                r = rows[ok]
                parts.append(np.hstack([r, np.full((len(r), 1), col, dtype=np.int8)]))
                tops.append(np.maximum(top[ok], col).astype(np.int8))
        rows, top = np.concatenate(parts), np.concatenate(tops)
        for lo in range(0, len(rows), batch):
            stack.append((rows[lo:lo + batch], top[lo:lo + batch]))


def exhaustive_min(P: PointSet, c: int, s: int) -> SearchResult:
    """Exact minimum over all c-colorings; ties go to the lexicographically
    smallest coloring."""
    _check_c(c)
    n = len(P)
    if c**n > EXHAUSTIVE_LIMIT * math.factorial(c):
        raise InstanceTooLargeError(f"c^n / c! = {c**n // math.factorial(c)} above {EXHAUSTIVE_LIMIT}")
    tris, _ = almost_empty_triangles(P, s)
    best_val, best_row, seen = None, None, 0
    for rows in _rgs_batches(n, c):
        vals = mono_count_from_triangles(tris, rows)
        seen += len(rows)
        m = int(vals.min())
        cand = rows[vals == m]
        row = min(tuple(int(v) for v in r) for r in cand)
        if best_val is None or (m, row) < (best_val, best_row):
            best_val, best_row = m, row
    phi = Coloring(best_row, c)
    _verify(P, phi, s, best_val)
    return SearchResult(phi, best_val, "exhaustive", seen, None, None, True)


def _incident_pairs(tris: np.ndarray, n: int) -> list:
    """Per point, the other two vertices of each incident triangle."""
    out = []
    for i in range(n):
        rows = tris[(tris == i).any(axis=1)]
        others = np.sort(np.where(rows == i, -1, rows), axis=1)[:, 1:]
        out.append((others[:, 0].copy(), others[:, 1].copy()))
    return out


def local_min(P: PointSet, c: int, s: int, seed: int = 0, budget: int = 20000,
              restarts: int | None = None) -> SearchResult:
    """Simulated annealing over single-point recolorings.

    ``budget`` is the total number of proposed moves, split over the
    restarts; budget 0 returns the first random coloring.  Temperature decays
    geometrically from t_start to t_end within each restart.
    """
    _check_c(c)
    if budget < 0:
        raise ValueError("budget must be non-negative")
    n = len(P)
    restarts = ANNEAL["restarts"] if restarts is None else restarts
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if budget == 0:
        restarts = 1
    t0, t1 = ANNEAL["t_start"], ANNEAL["t_end"]
    schedule = {"restarts": restarts, "t_start": t0, "t_end": t1, "cooling": "geometric"}
    tris, _ = almost_empty_triangles(P, s)
    pairs = _incident_pairs(tris, n)
    per = budget // restarts
    best = None
    moves = 0
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        col = rng.integers(1, c + 1, size=n).astype(np.int64)
        val = int(mono_count_from_triangles(tris, col))
        cur_best = (val, tuple(int(v) for v in col))
        steps = per + (budget - per * restarts if r == restarts - 1 else 0)
        alpha = (t1 / t0) ** (1.0 / max(steps - 1, 1))
        temp = t0
        pts = rng.integers(0, n, size=steps)
        shifts = rng.integers(1, c, size=steps)
        coins = rng.random(size=steps)
        for k in range(steps):
            i = int(pts[k])
            old = col[i]
            new = (old - 1 + shifts[k]) % c + 1
            j, l = pairs[i]
            same = col[j] == col[l]
            d = int((same & (col[j] == new)).sum()) - int((same & (col[j] == old)).sum())
            if d <= 0 or coins[k] < math.exp(-d / temp):
                col[i] = new
                val += d
                if val < cur_best[0] or (val == cur_best[0] and tuple(int(v) for v in col) < cur_best[1]):
                    cur_best = (val, tuple(int(v) for v in col))
            temp *= alpha
        moves += steps
        if best is None or cur_best < best:
            best = cur_best
    phi = Coloring(best[1], c)
    _verify(P, phi, s, best[0])
    return SearchResult(phi, best[0], "local", moves, seed, budget, False, schedule)


def bound_report(P: PointSet, c: int, s: int, seed: int = 0, budget: int = 20000) -> dict:
    """Heuristic and (when feasible) exact minima next to what the witness
    constructions certify for the best coloring found.

    No ordering between the asymptotic theorem constants and these finite
    values is asserted.
    """
    _check_c(c)
    n = len(P)
    local = local_min(P, c, s, seed=seed, budget=budget)
    try:
        exact = exhaustive_min(P, c, s)
    except InstanceTooLargeError:
        exact = None
    best = exact if exact is not None else local
    phi = best.coloring
    table = build_below_table(P)
    m1 = mono_count(P, phi, c - 1, table=table)
    m2 = mono_count(P, phi, c - 2, table=table)
    rec = {
        "n": n, "c": c, "s": s,
        "local": local.to_dict(),
        "exhaustive": None if exact is None else exact.to_dict(),
        "coloring": phi.digits(),
        "mono_count_c_minus_1": m1,
        "mono_count_c_minus_2": m2,
        "theorem1_regime": n >= 4 * c * c,
    }
    if n >= 3:
        t1 = theorem1_witness(P, phi, strict=False, table=table)
        t2 = theorem2_run(P, phi, table=table)
        if t1.count > m1 or t2.count > m2:
            raise InternalCheckError("witness count exceeds the monochromatic count")
        rec["theorem1"] = {"count": t1.count, "claimed_bound": t1.claimed_bound,
                           "supported": t1.supported, "certified": t1.certified}
        rec["theorem2"] = {"count": t2.count, "claimed_bound": t2.claimed_bound,
                           "supported": t2.supported, "asymptotic_only": t2.asymptotic_only,
                           "branch": t2.branch_trace[-1].branch if t2.branch_trace else None,
                           "certified": t2.certified}
    return rec
