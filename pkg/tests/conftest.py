import itertools
import random

import networkx as nx
import numpy as np
import pytest
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from gvsmooth.domain import build_graph_domain, build_grid_domain, build_path_domain


def all_pairs_hops(dom):
    """Hop-count distance matrix computed by scipy, independent of the package's BFS."""
    edges = dom.edges()
    n = dom.n_vertices
    if not edges:
        return np.zeros((n, n))
    u, v = np.array(edges).T
    m = csr_matrix((np.ones(len(u)), (u, v)), shape=(n, n))
    return shortest_path(m, directed=False, unweighted=True)


def random_connected_graph(rng: random.Random, n: int, extra_p: float = 0.3):
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        a, b = order[i], order[rng.randrange(i)]
        edges.add((min(a, b), max(a, b)))
    for a, b in itertools.combinations(range(n), 2):
        if rng.random() < extra_p:
            edges.add((a, b))
    return build_graph_domain(n, sorted(edges))


def random_domain(rng: random.Random, max_path=64, max_side=16):
    kind = rng.choice(["path", "grid4", "grid8", "graph"])
    if kind == "path":
        return build_path_domain(rng.randint(2, max_path))
    if kind == "graph":
        return random_connected_graph(rng, rng.randint(2, 30), 0.08)
    w, h = rng.randint(1, max_side), rng.randint(2, max_side)
    return build_grid_domain(w, h, 4 if kind == "grid4" else 8)


def brute_force_gv_interpolants(dom, samples, n_levels):
    """Every assignment in {1..n}^V that is gradually varied and matches the samples.

    Returns an int array of shape (count, V).
    """
    v = dom.n_vertices
    grids = np.indices((n_levels,) * v).reshape(v, -1).T + 1
    ok = np.ones(len(grids), dtype=bool)
    for vert, idx in samples:
        ok &= grids[:, vert] == idx
    for a, b in dom.edges():
        ok &= np.abs(grids[:, a] - grids[:, b]) <= 1
    return grids[ok]


@pytest.fixture
def rng():
    return random.Random(20100519)


@pytest.fixture
def nx_graph():
    def convert(dom):
        g = nx.Graph()
        g.add_nodes_from(range(dom.n_vertices))
        g.add_edges_from(dom.edges())
        return g
    return convert


def pytest_terminal_summary(terminalreporter):
    lines = [
        value
        for report in terminalreporter.stats.get("passed", []) + terminalreporter.stats.get("failed", [])
        if report.when == "call"
        for key, value in report.user_properties
        if key == "acceptance"
    ]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
