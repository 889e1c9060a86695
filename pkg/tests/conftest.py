import os
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from pcgtools.graph import Graph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def graphs(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [p for p, keep in zip(pairs, chosen) if keep])


def floyd_warshall_leaf_distances(tree):
    """Independent all-pairs shortest paths over every node of the tree."""
    n = tree.n_nodes
    inf = None
    d = [[inf] * n for _ in range(n)]
    for v in range(n):
        d[v][v] = Fraction(0)
    for a, b, w in tree.edges:
        d[a][b] = d[b][a] = w
    for k in range(n):
        for i in range(n):
            if d[i][k] is None:
                continue
            for j in range(n):
                if d[k][j] is None:
                    continue
                cand = d[i][k] + d[k][j]
                if d[i][j] is None or cand < d[i][j]:
                    d[i][j] = cand
    node = {v: x for x, v in tree.leaf_map.items()}
    m = tree.n_leaves
    return [[d[node[u]][node[v]] for v in range(m)] for u in range(m)]


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
