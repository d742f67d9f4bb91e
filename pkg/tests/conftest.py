import math

import numpy as np
import pytest

from meandist import from_distance_matrix, from_graph

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def path3():
    return from_graph([("a", "b", 1.0), ("b", "c", 1.0)])


@pytest.fixture
def two_point():
    return from_distance_matrix([[0.0, 1.0], [1.0, 0.0]])


@pytest.fixture
def one_point():
    return from_distance_matrix([[0.0]])


@pytest.fixture
def two_atoms():
    return from_distance_matrix([[0.0, 3.13], [3.13, 0.0]])


def random_graph_space(rng: np.random.Generator, n_max: int = 50, scale: float = 1.0):
    """Random connected graph (spanning tree plus extra edges), random lengths and weights."""
    n = int(rng.integers(1, n_max + 1))
    edges = []
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges.append((u, v, float(rng.uniform(0.05, 1.0)) * scale))
    for _ in range(int(rng.integers(0, 2 * n + 1))):
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u != v:
            edges.append((u, v, float(rng.uniform(0.05, 1.0)) * scale))
    weights = rng.uniform(0.1, 3.0, size=n)
    return from_graph(edges, list(weights), nodes=range(n))


def closed_form_v2(r: float) -> float:
    return (1.0 - math.cos(r)) / 2.0
