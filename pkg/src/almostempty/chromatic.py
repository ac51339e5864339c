"""Colorings, color-class discrepancy, and monochromatic triangle counts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .counting import MAX_TABLE_POINTS, BelowTable, _table_for, triangle_blocks
from .geometry import PointSet


@dataclass(frozen=True)
class Coloring:
    """Colors in 1..c, one per point id."""

    colors: tuple
    c: int

    def __post_init__(self):
        colors = tuple(int(v) for v in self.colors)
        object.__setattr__(self, "colors", colors)
        if self.c < 2:
            raise ValueError("need at least 2 colors")
        bad = [v for v in colors if not 1 <= v <= self.c]
        if bad:
            raise ValueError(f"color {bad[0]} outside 1..{self.c}")

    def __len__(self):
        return len(self.colors)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.colors, dtype=np.int64)

    def class_ids(self, color: int, restrict=None) -> np.ndarray:
        arr = self.array
        ids = np.flatnonzero(arr == color)
        if restrict is not None:
            ids = np.intersect1d(ids, np.asarray(restrict, dtype=np.intp))
        return ids

    def relabel(self, perm: Sequence[int]) -> "Coloring":
        """Apply the label map color a -> perm[a-1]."""
        return Coloring(tuple(perm[v - 1] for v in self.colors), self.c)

    def digits(self) -> str:
        return "".join(str(v) for v in self.colors) if self.c <= 9 else ",".join(map(str, self.colors))


def class_sizes(phi: Coloring, restrict=None) -> tuple:
    arr = phi.array if restrict is None else phi.array[np.asarray(restrict, dtype=np.intp)]
    return tuple(int(v) for v in np.bincount(arr, minlength=phi.c + 1)[1:])


def largest_class(sizes: Sequence[int]) -> int:
    """Color (1-based) of the largest class; ties go to the smallest color."""
    return int(np.argmax(sizes)) + 1


@dataclass(frozen=True)
class ScaledDiscrepancy:
    """``value`` = c * max_a |S_a| - |S|, i.e. c times the discrepancy."""

    value: int
    c: int

    @property
    def delta(self) -> Fraction:
        return Fraction(self.value, self.c)

    @property
    def gamma(self) -> Fraction:
        return Fraction(self.value, self.c - 1)

    def exceeds_lemma_threshold(self) -> bool:
        # delta > 4(c-1)/c  <=>  c*delta > 4(c-1)
        return self.value > 4 * (self.c - 1)


def scaled_discrepancy(sizes: Sequence[int], c: int) -> ScaledDiscrepancy:
    return ScaledDiscrepancy(c * max(sizes) - sum(sizes), c)


def discrepancy(phi: Coloring, restrict=None) -> ScaledDiscrepancy:
    return scaled_discrepancy(class_sizes(phi, restrict), phi.c)


def class_bounds_check(phi: Coloring, restrict=None) -> bool:
    """Check |S|/c - (c-1) delta <= |S_a| <= |S|/c + delta for every class.

    Multiplied through by c, with D = c*delta:
    |S| - (c-1) D <= c |S_a| <= |S| + D.
    """
    sizes = class_sizes(phi, restrict)
    total, c = sum(sizes), phi.c
    d = scaled_discrepancy(sizes, c).value
    return all(total - (c - 1) * d <= c * s <= total + d for s in sizes)


def mono_count(P: PointSet, phi: Coloring, s: int, table: BelowTable | None = None,
               max_table_points: int = MAX_TABLE_POINTS) -> int:
    """Monochromatic triangles with at most s interior points (any color) of P."""
    if len(phi) != len(P):
        raise ValueError("coloring length does not match point set")
    table = _table_for(P, table, max_table_points)
    total = 0
    for color in range(1, phi.c + 1):
        ids = phi.class_ids(color)
        if len(ids) < 3:
            continue
        for _, _, _, inner in triangle_blocks(P, ids, table):
            total += int((inner <= s).sum())
    return total


def mono_count_from_triangles(tris: np.ndarray, colors: np.ndarray) -> np.ndarray:
    """Vectorized count over one coloring (1-d) or a batch (2-d, one per row)
    given the precomputed almost-empty triangle list."""
    colors = np.asarray(colors)
    if len(tris) == 0:
        return np.zeros(colors.shape[:-1], dtype=np.int64) if colors.ndim > 1 else 0
    a, b, c = colors[..., tris[:, 0]], colors[..., tris[:, 1]], colors[..., tris[:, 2]]
    return ((a == b) & (b == c)).sum(axis=-1)


def random_coloring(n: int, c: int, seed) -> Coloring:
    if c < 2:
        raise ValueError("need at least 2 colors")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return Coloring(tuple(int(v) for v in rng.integers(1, c + 1, size=n)), c)
