import itertools
import sys

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from glvbalance import EGraph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def egraphs(draw, max_dim=3, max_vertices=5, max_edges=8, reals=False):
    """Random valid E-graphs with small integer (or half-integer) coordinates."""
    n = draw(st.integers(1, max_dim))
    m = draw(st.integers(2, max_vertices))
    coord = st.integers(-2, 2) if not reals else st.sampled_from([-2, -1.5, -1, -0.5, 0, 0.5, 1, 1.5, 2])
    pts = draw(st.lists(st.tuples(*[coord] * n), min_size=m, max_size=m, unique=True))
    pairs = [(i, j) for i in range(m) for j in range(m) if i != j]
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=min(max_edges, len(pairs)), unique=True))
    weights = draw(st.lists(st.floats(0.1, 10.0), min_size=len(chosen), max_size=len(chosen)))
    return EGraph(np.array(pts, dtype=float), [(i, j, w) for (i, j), w in zip(chosen, weights)], n)


def positive_states(n):
    return st.lists(st.floats(-2.0, 2.0), min_size=n, max_size=n).map(lambda v: np.exp(np.array(v)))


def brute_force_components(m, edges, directed):
    """Reachability closure; returns a canonical first-seen labelling."""
    reach = np.eye(m, dtype=bool)
    for i, j in edges:
        reach[i, j] = True
        if not directed:
            reach[j, i] = True
    for k, i, j in itertools.product(range(m), repeat=3):
        if reach[i, k] and reach[k, j]:
            reach[i, j] = True
    same = reach & reach.T
    labels, seen = [], {}
    for v in range(m):
        key = tuple(np.flatnonzero(same[v]))
        labels.append(seen.setdefault(key, len(seen)))
    return tuple(labels)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.LINES:
        terminalreporter.write_line(line)
