"""Witness reports, algorithm traces and exact threshold comparisons."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from ..chromatic import Coloring
from ..counting import interior_counts
from ..errors import CertificationError
from ..geometry import PointSet, TriangleIdx

BRANCHES = ("discrepancy", "hull-size", "fan-region", "p*-removal", "stop")


def exceeds_cube_root(value: Fraction, coeff: Fraction, n: int) -> bool:
    """value > coeff * n**(1/3), decided by cubing (coeff > 0)."""
    if value <= 0:
        return False
    return value**3 > coeff**3 * n


def _frac(f: Fraction) -> list:
    return [f.numerator, f.denominator]


@dataclass(frozen=True)
class Comparison:
    """One threshold test ``value > coeff * n^(1/3)``.

    ``sizes`` holds the color-class sizes the value was derived from (for
    discrepancy tests) so the value itself can be recomputed independently.
    """

    name: str
    value: Fraction
    coeff: Fraction
    n: int
    exceeded: bool
    sizes: Optional[tuple] = None

    @classmethod
    def make(cls, name, value, coeff, n, sizes=None) -> "Comparison":
        value, coeff = Fraction(value), Fraction(coeff)
        return cls(name, value, coeff, n, exceeds_cube_root(value, coeff, n),
                   None if sizes is None else tuple(int(v) for v in sizes))

    def to_dict(self) -> dict:
        d = {"name": self.name, "value": _frac(self.value), "coeff": _frac(self.coeff),
             "n": self.n, "exceeded": self.exceeded}
        if self.sizes is not None:
            d["sizes"] = list(self.sizes)
        return d


@dataclass
class Trace:
    step: int
    branch: str
    subject: str
    set_size: int
    class_sizes: tuple
    comparisons: list = field(default_factory=list)
    removed: Optional[int] = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"step": self.step, "branch": self.branch, "subject": self.subject,
                "set_size": self.set_size, "class_sizes": list(self.class_sizes),
                "comparisons": [c.to_dict() for c in self.comparisons],
                "removed": self.removed, "detail": self.detail}


@dataclass
class WitnessReport:
    """Certified monochromatic triangles with at most ``s_cap`` interior points.

    ``claimed_bound`` is the lower bound the producing argument guarantees.
    ``supported`` is False when that argument's precondition failed (the bound
    is then informational only); ``asymptotic_only`` marks branches whose
    guarantee needs n beyond desk scale.
    """

    triangles: list
    colors: list
    s_cap: int
    claimed_bound: int
    branch_trace: list = field(default_factory=list)
    supported: bool = True
    asymptotic_only: bool = False
    certified: bool = False
    notes: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.triangles)

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "s_cap": self.s_cap,
            "claimed_bound": self.claimed_bound,
            "supported": self.supported,
            "asymptotic_only": self.asymptotic_only,
            "certified": self.certified,
            "triangles": [list(t) for t in self.triangles],
            "colors": list(self.colors),
            "trace": [t.to_dict() for t in self.branch_trace],
            "notes": list(self.notes),
        }


def dedupe(tris) -> np.ndarray:
    tris = np.asarray(tris, dtype=np.intp).reshape(-1, 3)
    if len(tris) == 0:
        return tris
    return np.unique(np.sort(tris, axis=1), axis=0)


def certify(P: PointSet, phi: Coloring, tris, s_cap: int, ref=None) -> list:
    """Re-check every triangle by direct scan; return them as TriangleIdx.

    Raises CertificationError on the first triangle that is not
    monochromatic or has more than ``s_cap`` interior points of ``ref``.
    """
    tris = dedupe(tris)
    if len(tris) == 0:
        return []
    col = phi.array
    mono = (col[tris[:, 0]] == col[tris[:, 1]]) & (col[tris[:, 1]] == col[tris[:, 2]])
    if not mono.all():
        bad = tris[np.flatnonzero(~mono)[0]]
        raise CertificationError(f"triangle {tuple(bad)} is not monochromatic")
    inner = interior_counts(P, tris, ref)
    if (inner > s_cap).any():
        idx = np.flatnonzero(inner > s_cap)[0]
        raise CertificationError(
            f"triangle {tuple(tris[idx])} has {inner[idx]} interior points > {s_cap}")
    return [TriangleIdx(int(a), int(b), int(c)) for a, b, c in tris]
