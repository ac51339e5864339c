from fractions import Fraction

import numpy as np
import pytest

from almostempty.chromatic import Coloring
from almostempty.geometry import PointSet
from almostempty.montecarlo import GeneratorConfig, gen_uniform


def random_points(n, seed, bits=20):
    return gen_uniform(GeneratorConfig(n=n, grid_bits=bits, seed=seed), 0)


def balanced_coloring(n, c, seed):
    cols = np.array([1 + i % c for i in range(n)])
    np.random.default_rng(seed).shuffle(cols)
    return Coloring(tuple(int(v) for v in cols), c)


def bary_inside(p, a, b, c):
    """Strict interior test by exact barycentric coordinates; shares no code
    with the orientation predicates."""
    det = Fraction((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    l1 = Fraction((b[0] - p[0]) * (c[1] - p[1]) - (c[0] - p[0]) * (b[1] - p[1])) / det
    l2 = Fraction((c[0] - p[0]) * (a[1] - p[1]) - (a[0] - p[0]) * (c[1] - p[1])) / det
    l3 = 1 - l1 - l2
    return l1 > 0 and l2 > 0 and l3 > 0


def bary_count(P, t):
    a, b, c = (P[i] for i in t)
    return sum(1 for i, p in enumerate(P) if i not in t and bary_inside(p, a, b, c))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance criteria record their outcome here; printed at the end of the run
CRITERIA: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        ok, title, info = CRITERIA[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {num:2d}. {title}{'  ' + info if info else ''}")
