"""Random point sets on an integer grid and trial statistics for triangle
interior counts.

Each trial draws from its own stream ``default_rng([seed, trial, k])``, and
per-trial integer counts are stored, so statistics do not depend on the
order in which trials ran.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from math import factorial
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from .chromatic import Coloring, mono_count, mono_count_from_triangles
from .counting import almost_empty_triangles, build_below_table, profile, profile_oracle
from .errors import QuadratureError, ResampleLimitError
from .geometry import PointSet, validate_general_position

logger = logging.getLogger(__name__)

RESAMPLE_LIMIT = 10**6
Z_95 = 1.96

# stream tags within one (seed, trial)
_POINTS, _COLORS = 0, 1


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    grid_bits: int = 31
    seed: int = 0
    trials: int = 1

    def __post_init__(self):
        if not 1 <= self.grid_bits <= 31:
            raise ValueError("grid_bits must be in 1..31")
        if self.n < 3:
            raise ValueError("n must be at least 3")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")


def gen_uniform(cfg: GeneratorConfig, trial: int) -> PointSet:
    """cfg.n uniform points on [0, 2^grid_bits)^2, in general position.

    A duplicate or collinear triple is repaired by redrawing its last point.
    """
    rng = np.random.default_rng([cfg.seed, trial, _POINTS])
    hi = 1 << cfg.grid_bits
    xy = rng.integers(0, hi, size=(cfg.n, 2), dtype=np.int64)
    redraws = 0
    while True:
        P = PointSet(xy.tolist(), validate=False)
        bad = validate_general_position(P)
        if bad is None:
            break
        redraws += 1
        if redraws > RESAMPLE_LIMIT:
            raise ResampleLimitError(
                f"gave up after {RESAMPLE_LIMIT} redraws (n={cfg.n}, grid_bits={cfg.grid_bits})")
        xy[max(bad.ids)] = rng.integers(0, hi, size=2, dtype=np.int64)
    if redraws:
        logger.info("trial %d: %d redraws", trial, redraws)
    return P


@dataclass
class EstimateRow:
    n: int
    s: int
    quantity: str
    trials: int
    mean: float
    sd: Optional[float]
    ci_lo: Optional[float]
    ci_hi: Optional[float]
    seed: int

    @property
    def half_width(self) -> Optional[float]:
        return None if self.sd is None else Z_95 * self.sd / math.sqrt(self.trials)


def summarize(values: Sequence[int], n: int, s: int, quantity: str, seed: int) -> EstimateRow:
    """Mean, sd and 95% interval of values / n^2."""
    x = np.asarray(values, dtype=np.float64) / (n * n)
    mean = float(x.mean())
    if len(x) < 2:
        return EstimateRow(n, s, quantity, len(x), mean, None, None, None, seed)
    sd = float(x.std(ddof=1))
    hw = Z_95 * sd / math.sqrt(len(x))
    return EstimateRow(n, s, quantity, len(x), mean, sd, mean - hw, mean + hw, seed)


@dataclass
class EstimateReport:
    """Statistics rows plus the raw per-trial counts they came from."""

    config: GeneratorConfig
    rows: list
    raw: dict = field(default_factory=dict)

    def row(self, quantity: str, s: int) -> EstimateRow:
        for r in self.rows:
            if r.quantity == quantity and r.s == s:
                return r
        raise KeyError((quantity, s))

    def to_dict(self) -> dict:
        return {"config": asdict(self.config),
                "rows": [_row_json(r) for r in self.rows],
                "raw": {k: [list(map(int, v)) if np.ndim(v) else int(v) for v in vals]
                        for k, vals in self.raw.items()}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        return rows_to_csv(self.rows)


CSV_COLUMNS = ("n", "s", "quantity", "trials", "mean", "sd", "ci_lo", "ci_hi", "seed")


def _fmt(x) -> str:
    return "" if x is None else format(x, ".12g")


def _row_json(r: EstimateRow) -> dict:
    d = asdict(r)
    for k in ("mean", "sd", "ci_lo", "ci_hi"):
        d[k] = None if d[k] is None else _fmt(d[k])
    return d


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([r.n, r.s, r.quantity, r.trials, _fmt(r.mean), _fmt(r.sd),
                    _fmt(r.ci_lo), _fmt(r.ci_hi), r.seed])
    return buf.getvalue()


def _profile_trial(args) -> list:
    cfg, trial, s_max, brute = args
    P = gen_uniform(cfg, trial)
    prof = profile_oracle(P, s_max) if brute else profile(P, s_max)
    return list(prof.z)


def _run(fn, jobs, workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))


def estimate_Z(cfg: GeneratorConfig, s_max: int, workers: int = 1, brute: bool = False) -> EstimateReport:
    """Z_=s / n^2 and Z_<=s / n^2 for s = 0..s_max over cfg.trials trials.

    ``brute`` uses the direct O(n^4) scan instead of the pair table.
    """
    if not 0 <= s_max <= cfg.n - 3:
        raise ValueError(f"s_max must be in [0, {cfg.n - 3}]")
    z = np.array(_run(_profile_trial, [(cfg, t, s_max, brute) for t in range(cfg.trials)], workers),
                 dtype=np.int64).reshape(cfg.trials, s_max + 1)
    le = np.cumsum(z, axis=1)
    rows = []
    for s in range(s_max + 1):
        rows.append(summarize(z[:, s], cfg.n, s, "Z_eq", cfg.seed))
        rows.append(summarize(le[:, s], cfg.n, s, "Z_le", cfg.seed))
    return EstimateReport(cfg, rows, {"z_eq": z.tolist()})


def _mono_trial(args) -> tuple:
    cfg, trial, c, s = args
    P = gen_uniform(cfg, trial)
    rng = np.random.default_rng([cfg.seed, trial, _COLORS])
    phi = Coloring(tuple(int(v) for v in rng.integers(1, c + 1, size=cfg.n)), c)
    table = build_below_table(P)
    return mono_count(P, phi, s, table=table), profile(P, s, table=table).at_most(s)


def estimate_mono(cfg: GeneratorConfig, c: int, s: int, workers: int = 1) -> EstimateReport:
    """Monochromatic triangles with at most s interior points under a fresh
    uniform c-coloring per trial, next to Z_<=s / c^2 on the same point sets."""
    if c < 2:
        raise ValueError("need c >= 2")
    out = _run(_mono_trial, [(cfg, t, c, s) for t in range(cfg.trials)], workers)
    x = np.array([o[0] for o in out], dtype=np.int64)
    zle = np.array([o[1] for o in out], dtype=np.int64)
    rows = [summarize(x, cfg.n, s, "X_le", cfg.seed),
            summarize(zle / (c * c), cfg.n, s, "Z_le/c^2", cfg.seed)]
    return EstimateReport(cfg, rows, {"x_le": x.tolist(), "z_le": zle.tolist()})


def colored_sample_mean(P: PointSet, c: int, s: int, samples: int, seed: int) -> tuple:
    """Mean and standard error of mono_count over ``samples`` uniform
    colorings of a fixed P."""
    tris, _ = almost_empty_triangles(P, s)
    rng = np.random.default_rng([seed, _COLORS])
    vals = []
    for lo in range(0, samples, 1000):
        cols = rng.integers(1, c + 1, size=(min(1000, samples - lo), len(P)))
        vals.append(mono_count_from_triangles(tris, cols))
    v = np.concatenate(vals).astype(np.float64)
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(len(v)))


def gamma_integral_check(lam: float, s: int) -> float:
    """Relative error of the quadrature of int_R |z|^s exp(-lam |z| / 2) dz
    against 2^(s+2) s! / lam^(s+1)."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if s < 0:
        raise ValueError("s must be non-negative")
    exact = 2.0 ** (s + 2) * factorial(s) / lam ** (s + 1)
    # the tail past this point is below 1e-20 relative
    top = (2.0 / lam) * (s + 60.0)
    peak = 2.0 * s / lam
    pts = [peak] if 0 < peak < top else None
    out = integrate.quad(lambda z: z**s * math.exp(-lam * z / 2), 0.0, top,
                         points=pts, epsabs=0.0, epsrel=1e-12, limit=200, full_output=1)
    val, err = out[0], out[1]
    # a fourth element is quad's warning message
    if len(out) > 3 or err > 1e-9 * abs(val):
        raise QuadratureError(f"quadrature did not converge (err={err})")
    return abs(2 * val - exact) / exact


@dataclass
class ConvergenceRow:
    n: int
    s: int
    mean: float
    half_width: Optional[float]
    target: int
    distance: float


def convergence_table(ns: Sequence[int], s_max: int, cfg: GeneratorConfig,
                      workers: int = 1, brute: bool = False) -> tuple:
    """One estimate per n; rows give |mean Z_<=s/n^2 - 2(s+1)|.

    Returns ``(reports, rows)``.
    """
    ns = list(ns)
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("ns must be strictly increasing")
    reports, rows = [], []
    for n in ns:
        rep = estimate_Z(replace(cfg, n=n), s_max, workers=workers, brute=brute)
        reports.append(rep)
        for s in range(s_max + 1):
            r = rep.row("Z_le", s)
            target = 2 * (s + 1)
            rows.append(ConvergenceRow(n, s, r.mean, r.half_width, target, abs(r.mean - target)))
    return reports, rows


def trend_ok(rows: Sequence[ConvergenceRow], s: int) -> bool:
    """Distance to the limit non-increasing in n for one s, allowing for the
    combined 95% half-widths of neighbouring rows."""
    rows = sorted((r for r in rows if r.s == s), key=lambda r: r.n)
    for a, b in zip(rows, rows[1:]):
        slack = (a.half_width or 0.0) + (b.half_width or 0.0)
        if b.distance > a.distance + slack:
            return False
    return True
