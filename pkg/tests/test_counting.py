import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from almostempty.counting import (almost_empty_triangles, build_below_table, interior_count_fast,
                                  interior_count_oracle, interior_counts, interior_counts_fast,
                                  per_point_incidence, profile, profile_oracle, triangle_blocks)
from almostempty.geometry import PointSet, orient

from conftest import bary_count, random_points


def test_oracle_examples():
    P = PointSet([(0, 0), (10, 0), (0, 10), (4, 5)])
    assert interior_count_oracle(P, (0, 1, 2)) == 1
    assert interior_count_oracle(P, (0, 1, 3)) == 0


def test_oracle_matches_barycentric():
    P = random_points(12, 4)
    for t in itertools.combinations(range(12), 3):
        assert interior_count_oracle(P, t) == bary_count(P, t)


def test_below_table_small_examples():
    T = build_below_table(PointSet([(0, 0), (3, 1), (1, 4)]))
    assert not T.counts.any()
    P = PointSet([(0, 0), (2, 2), (4, 0), (2, 1)])
    T = build_below_table(P)
    assert T.below(0, 1) == 1
    assert interior_count_fast(T, P, (0, 1, 2)) == 1
    assert T.below(0, 2) == 0 and T.below(1, 2) == 0


def test_fast_formula_b_below_case():
    P = PointSet([(0, 0), (2, -2), (4, 0), (2, -1)])
    T = build_below_table(P)
    assert (T.below(0, 2), T.below(0, 1), T.below(1, 2)) == (2, 0, 0)
    assert interior_count_fast(T, P, (0, 1, 2)) == 1


def _below_def(P, a, b):
    ra, rb = P.lex_rank[a], P.lex_rank[b]
    return sum(1 for q in range(len(P))
               if ra < P.lex_rank[q] < rb and orient(P[a], P[b], P[q]) < 0)


def test_below_table_matches_definition():
    P = random_points(30, 7)
    T = build_below_table(P)
    n = len(P)
    for a in range(n):
        for b in range(n):
            if P.lex_rank[a] < P.lex_rank[b]:
                assert T.below(a, b) == _below_def(P, a, b)
                assert T.below(a, b) + T.above(a, b) == P.lex_rank[b] - P.lex_rank[a] - 1
                assert T.below(a, b) <= n - 2


def test_vertical_pairs_use_lex_order():
    # shared x-coordinates: "between" falls back to y
    P = PointSet([(0, 0), (0, 5), (1, 2), (2, 9), (2, -3), (3, 1)])
    T = build_below_table(P)
    for t in itertools.combinations(range(6), 3):
        assert interior_count_fast(T, P, t) == interior_count_oracle(P, t)


@given(st.lists(st.tuples(st.integers(-50, 50), st.integers(-50, 50)), min_size=3, max_size=14, unique=True))
@settings(max_examples=80, deadline=None)
def test_fast_equals_oracle_property(pts):
    P = PointSet(pts, validate=False)
    if any(orient(P[i], P[j], P[k]) == 0 for i, j, k in itertools.combinations(range(len(P)), 3)):
        return
    T = build_below_table(P)
    tris = np.array(list(itertools.combinations(range(len(P)), 3)))
    fast = interior_counts_fast(T, tris)
    assert list(fast) == [interior_count_oracle(P, t) for t in tris]
    assert list(interior_counts(P, tris)) == list(fast)


def test_wide_coordinates_object_path():
    big = 2**31 - 1
    P = PointSet([(-big, -big), (big, -big + 3), (5, big), (1, 2), (-7, 11), (100, -1000)])
    assert not P.exact_int64
    T = build_below_table(P)
    for t in itertools.combinations(range(6), 3):
        assert interior_count_fast(T, P, t) == interior_count_oracle(P, t)


def test_profile_examples():
    assert profile(PointSet([(0, 0), (4, 0), (4, 4), (0, 4)]), 1).z == (4, 0)
    assert profile(PointSet([(0, 0), (10, 0), (0, 10), (3, 3)]), 1).z == (3, 1)
    prof = profile(random_points(25, 1), 22)
    assert sum(prof.z) == comb(25, 3) == 2300
    assert prof.cumulative()[-1] == 2300


def test_profile_fast_equals_oracle():
    P = random_points(40, 11)
    assert profile(P, 37) == profile_oracle(P, 37)


def test_profile_direct_scan_fallback():
    P = random_points(30, 2)
    assert profile(P, 5, max_table_points=10) == profile(P, 5)


def test_profile_rejects_bad_rmax():
    P = random_points(6, 0)
    with pytest.raises(ValueError):
        profile(P, 4)
    with pytest.raises(ValueError):
        profile(P, -1)


def test_at_most_is_monotone():
    prof = profile(random_points(30, 5), 27)
    vals = [prof.at_most(s) for s in range(28)]
    assert vals == sorted(vals) and vals[-1] == comb(30, 3)


def test_per_point_incidence_examples():
    assert list(per_point_incidence(PointSet([(0, 0), (1, 0), (0, 1)]), 0)) == [1, 1, 1]
    assert list(per_point_incidence(PointSet([(0, 0), (4, 0), (4, 4), (0, 4)]), 0)) == [3, 3, 3, 3]


def test_per_point_incidence_matches_enumeration():
    P = random_points(20, 8)
    for s in (0, 2):
        want = np.zeros(20, dtype=int)
        count = 0
        for t in itertools.combinations(range(20), 3):
            if interior_count_oracle(P, t) <= s:
                want[list(t)] += 1
                count += 1
        got = per_point_incidence(P, s)
        assert list(got) == list(want) and got.sum() == 3 * count
    sub = [0, 2, 3, 5, 7, 11, 13]
    want = np.zeros(20, dtype=int)
    for t in itertools.combinations(sub, 3):
        if interior_count_oracle(P, t) <= 1:
            want[list(t)] += 1
    assert list(per_point_incidence(P, 1, restrict=sub)) == list(want)


def test_almost_empty_triangles_sorted_and_exact():
    P = random_points(18, 3)
    tris, inner = almost_empty_triangles(P, 1)
    want = [t for t in itertools.combinations(range(18), 3) if interior_count_oracle(P, t) <= 1]
    assert [tuple(t) for t in tris] == want
    assert all(interior_count_oracle(P, t) == r for t, r in zip(tris, inner))


def test_triangle_blocks_cover_each_triangle_once():
    P = random_points(15, 6)
    seen = set()
    for a, b, c, _ in triangle_blocks(P, table=build_below_table(P)):
        for t in zip(np.full(len(b), a), b, c):
            key = tuple(sorted(map(int, t)))
            assert key not in seen
            seen.add(key)
    assert len(seen) == comb(15, 3)
