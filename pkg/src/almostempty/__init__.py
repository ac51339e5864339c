"""Counting and certifying monochromatic triangles with few interior points
in colored planar point sets."""

__version__ = "0.1.0"

from .chromatic import Coloring, class_sizes, discrepancy, mono_count, random_coloring
from .counting import (InteriorProfile, almost_empty_triangles, build_below_table,
                       interior_count_fast, interior_count_oracle, per_point_incidence, profile,
                       profile_oracle)
from .geometry import Point, PointSet, TriangleIdx, convex_hull, orient, validate_general_position

__all__ = [
    "Coloring", "InteriorProfile", "Point", "PointSet", "TriangleIdx", "almost_empty_triangles",
    "build_below_table", "class_sizes", "convex_hull", "discrepancy", "interior_count_fast",
    "interior_count_oracle", "mono_count", "orient", "per_point_incidence", "profile",
    "profile_oracle", "random_coloring", "validate_general_position",
]
