import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from metric_thickenings.metric_space import MetricSpace, PointedMetricSpace, from_points


@st.composite
def spaces(draw, min_size=1, max_size=6, prefix="p"):
    """Classical metric spaces from distinct integer points under a random norm."""
    n = draw(st.integers(min_size, max_size))
    cells = draw(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=n, max_size=n, unique=True))
    metric = draw(st.sampled_from(["l1", "l2", "linf"]))
    return from_points([f"{prefix}{i}" for i in range(n)], np.array(cells, dtype=float), metric)


@st.composite
def pointed_spaces(draw, min_size=1, max_size=5, prefix="p"):
    X = draw(spaces(min_size, max_size, prefix))
    return PointedMetricSpace(X, draw(st.sampled_from(X.points)))


@st.composite
def weight_vectors(draw, n):
    raw = draw(st.lists(st.integers(1, 20), min_size=n, max_size=n))
    total = sum(raw)
    return [w / total for w in raw]


@pytest.fixture
def abc():
    """``d(a,b) = d(a,c) = 1``, ``d(b,c) = 2``."""
    return MetricSpace(("a", "b", "c"), [[0, 1, 1], [1, 0, 2], [1, 2, 0]])


@pytest.fixture
def line3():
    """Points 0, 1, 2 on a line."""
    return from_points(["0", "1", "2"], [[0.0], [1.0], [2.0]], "l1")


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
