import numpy as np
import pytest

from spin2.graphs import Graph


@pytest.fixture
def k2():
    return Graph.from_edges(2, [(0, 1)])


@pytest.fixture
def p3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def c3():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def c4():
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def star3():
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


def bounded_random_graph(n, max_degree, rng, min_edges=1):
    """Greedy random graph with max degree bound (test helper)."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    order = rng.permutation(len(pairs))
    target = int(rng.integers(min_edges, len(pairs) + 1))
    deg = [0] * n
    edges = []
    for t in order:
        if len(edges) >= target:
            break
        i, j = pairs[t]
        if deg[i] < max_degree and deg[j] < max_degree:
            edges.append((i, j))
            deg[i] += 1
            deg[j] += 1
    return Graph.from_edges(n, edges)
