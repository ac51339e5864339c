import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from almostempty.chromatic import Coloring, class_sizes, mono_count, scaled_discrepancy
from almostempty.counting import interior_count_oracle
from almostempty.errors import CertificationError, PreconditionError
from almostempty.geometry import PointSet, convex_hull, orient
from almostempty.witness import (Comparison, certify, discrepancy_witness, lemma3_bound, star_fan,
                                 theorem1_witness)
from almostempty.witness.fans import check_fan_disjoint
from almostempty.witness.report import exceeds_cube_root

from conftest import balanced_coloring, random_points


def _class_empty(P, t, ids):
    a, b, c = (P[i] for i in t)
    s = orient(a, b, c)
    return not any(orient(a, b, P[q]) == s and orient(b, c, P[q]) == s and orient(c, a, P[q]) == s
                   for q in ids if q not in t)


def test_star_fan_quadrilateral_corner():
    P = PointSet([(0, 0), (4, 0), (5, 4), (0, 3)])
    assert len(star_fan(P, range(4), 0)) == 2


def test_star_fan_interior_apex():
    P = PointSet([(0, 0), (10, 0), (0, 10), (3, 3)])
    fan = star_fan(P, range(4), 3)
    assert len(fan) == 3
    area = lambda t: abs((P[t[1]].x - P[t[0]].x) * (P[t[2]].y - P[t[0]].y)
                         - (P[t[1]].y - P[t[0]].y) * (P[t[2]].x - P[t[0]].x))
    assert sum(area(t) for t in fan) == area((0, 1, 2))


def test_star_fan_random_hull_apex():
    P = random_points(15, 21)
    apex = convex_hull(P)[0]
    fan = star_fan(P, range(15), apex)
    assert len(fan) == 13
    assert all(_class_empty(P, t, range(15)) for t in fan)


def test_star_fan_subset_counts():
    P = random_points(40, 5)
    ids = list(range(0, 40, 2))
    hull = convex_hull(P, ids)
    for apex in ids:
        fan = star_fan(P, ids, apex)
        assert len(fan) == len(ids) - (2 if apex in hull else 1)
        assert all(apex in t for t in fan)
        assert all(_class_empty(P, t, ids) for t in fan)


def test_star_fan_errors():
    P = random_points(5, 1)
    with pytest.raises(ValueError):
        star_fan(P, [0, 1], 0)
    with pytest.raises(ValueError):
        star_fan(P, [1, 2, 3], 0)


def test_fan_interiors_disjoint_direct():
    P = random_points(30, 2)
    phi = balanced_coloring(30, 2, 3)
    p1 = phi.class_ids(1)
    others = [q for q in range(30) if q not in set(p1)]
    for apex in p1:
        fan = star_fan(P, p1, int(apex))
        hits = [q for t in fan for q in others
                if q not in t and not _class_empty(P, t, [q])]
        assert len(hits) == len(set(hits)) <= 30 - len(p1)


def test_check_fan_disjoint_rejects_overfull():
    rows = np.array([[0, 1, 2], [0, 2, 3]])
    with pytest.raises(CertificationError):
        check_fan_disjoint(rows, np.array([2, 2]), 3)
    check_fan_disjoint(rows, np.array([2, 1]), 3)


def test_theorem1_balanced_c2():
    P = random_points(16, 0)
    phi = balanced_coloring(16, 2, 0)
    rep = theorem1_witness(P, phi)
    assert rep.claimed_bound == 8 * 8 // 12 == 5
    assert rep.count >= rep.claimed_bound and rep.supported and rep.certified


def test_theorem1_certification_oracle():
    P = random_points(20, 8)
    phi = Coloring((1,) * 20, 2)
    rep = theorem1_witness(P, phi)
    assert len(set(rep.triangles)) == rep.count
    for t in rep.triangles:
        assert interior_count_oracle(P, t) <= 1


def test_theorem1_adversarial_c3():
    P = random_points(36, 4)
    # colors by x-order stripes, a deliberately structured coloring
    order = np.argsort([p.x for p in P])
    cols = np.empty(36, dtype=int)
    cols[order] = [1 + (i * 3) // 36 for i in range(36)]
    phi = Coloring(tuple(int(v) for v in cols), 3)
    rep = theorem1_witness(P, phi)
    assert rep.claimed_bound <= rep.count <= mono_count(P, phi, 2)


def test_theorem1_small_n():
    P = random_points(10, 1)
    phi = balanced_coloring(10, 2, 1)
    with pytest.raises(PreconditionError):
        theorem1_witness(P, phi)
    rep = theorem1_witness(P, phi, strict=False)
    assert not rep.supported and rep.notes


def test_discrepancy_one_color():
    P = random_points(12, 3)
    phi = Coloring((1,) * 12, 2)
    rep = discrepancy_witness(P, range(12), phi)
    assert rep.claimed_bound == 6 and rep.supported
    assert rep.count >= 6
    for t in rep.triangles:
        assert interior_count_oracle(P, t) == 0


def test_discrepancy_balanced_rejected():
    P = random_points(12, 3)
    with pytest.raises(PreconditionError):
        discrepancy_witness(P, range(12), balanced_coloring(12, 2, 0))


def test_discrepancy_subset_counts_against_subset():
    P = random_points(40, 6)
    phi = Coloring(tuple(1 if i % 5 else 2 for i in range(40)), 2)
    S = list(range(0, 40, 2))
    rep = discrepancy_witness(P, S, phi)
    d = scaled_discrepancy(class_sizes(phi, S), 2)
    assert rep.claimed_bound == -(-d.value * len(S) // (6 * 4))
    assert rep.count >= rep.claimed_bound
    sub = P.subset(S)
    pos = {v: i for i, v in enumerate(S)}
    for t in rep.triangles:
        assert interior_count_oracle(sub, [pos[v] for v in t]) == 0


def test_lemma3_bound_exact_ceiling():
    # delta = scaled / c; bound = ceil(delta |S| / (6c))
    for scaled, size, c in [(18, 12, 3), (7, 10, 2), (9, 11, 3)]:
        want = -(-(Fraction(scaled, c) * size / (6 * c)).numerator
                 // (Fraction(scaled, c) * size / (6 * c)).denominator)
        assert lemma3_bound(scaled, size, c) == want


def test_certify_rejects_bad_triangles():
    P = PointSet([(0, 0), (10, 0), (0, 10), (3, 3)])
    with pytest.raises(CertificationError):
        certify(P, Coloring((1, 1, 1, 1), 2), [(0, 1, 2)], 0)
    with pytest.raises(CertificationError):
        certify(P, Coloring((1, 1, 2, 1), 2), [(0, 1, 2)], 1)
    assert certify(P, Coloring((1, 1, 1, 2), 2), [(2, 1, 0), (0, 1, 2)], 1) == [(0, 1, 2)]


def test_exceeds_cube_root_exact():
    assert exceeds_cube_root(Fraction(3), Fraction(1), 26)
    assert not exceeds_cube_root(Fraction(3), Fraction(1), 27)
    assert not exceeds_cube_root(Fraction(0), Fraction(1, 256), 1)
    assert exceeds_cube_root(Fraction(3, 2), Fraction(1, 256), 3)
    c = Comparison.make("x", Fraction(5, 2), Fraction(1, 8), 1000, sizes=(3, 2))
    assert c.exceeded and c.to_dict()["value"] == [5, 2]


def test_report_json_round_trip():
    P = random_points(16, 0)
    rep = theorem1_witness(P, balanced_coloring(16, 2, 0))
    doc = json.loads(json.dumps(rep.to_dict()))
    assert doc["count"] == rep.count and doc["certified"] is True
    assert all(len(t) == 3 for t in doc["triangles"])
