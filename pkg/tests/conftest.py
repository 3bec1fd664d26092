import numpy as np
import pytest

from marketmap import kernels
from marketmap.correl import DistanceMatrix
from marketmap.netgraph import AssetNetwork, Edge, Node


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request, monkeypatch):
    """Run a test once per importable kernel backend."""
    impl = kernels.available_backends()[request.param]
    for name in ("betweenness", "closeness_sums", "core_numbers", "kruskal"):
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    return request.param


def random_distance_matrix(rng, n):
    d = rng.uniform(0.0, 2.0, size=(n, n))
    d = np.triu(d, 1)
    d = d + d.T
    return DistanceMatrix([f"A{i}" for i in range(n)], d)


def make_network(n, pairs, distances=None, kind="asset-graph", threshold=2.0):
    """Network with the given (i, j) edges; distances default to 0.5."""
    edges = []
    for k, (a, b) in enumerate(pairs):
        i, j = min(a, b), max(a, b)
        d = 0.5 if distances is None else float(distances[k])
        edges.append(Edge(i, j, d, 1.0 - d))
    nodes = [Node(f"N{v}", "s") for v in range(n)]
    return AssetNetwork(nodes, sorted(edges, key=lambda e: (e.i, e.j)), kind,
                        threshold if kind == "asset-graph" else None)


def random_graph(rng, n, p):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return pairs


@pytest.fixture
def rng():
    return np.random.default_rng(20101231)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
