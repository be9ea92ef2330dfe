"""Test fixtures and configuration"""
import numpy as np
import pytest

from src.graph import load_edge_list, planted_partition
from src.models import Graph


def make_graph(*lines):
    """Load a graph from edge-list lines"""
    return load_edge_list(list(lines))


def random_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    """Erdos-Renyi graph with string identifiers '0'..'n-1' (edges may be empty)"""
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(rows.size) < p
    return Graph.from_edges([str(i) for i in range(n)], zip(rows[keep], cols[keep]))


@pytest.fixture
def path_graph():
    """Path 1-2-3"""
    return make_graph("1 2", "2 3")


@pytest.fixture
def triangle():
    """Complete graph K3"""
    return make_graph("1 2", "2 3", "3 1")


@pytest.fixture
def star():
    """Star with center 1 and leaves 2, 3, 4"""
    return make_graph("1 2", "1 3", "1 4")


@pytest.fixture
def two_triangles():
    """Two disjoint triangles {1,2,3} and {4,5,6}"""
    return make_graph("1 2", "2 3", "3 1", "4 5", "5 6", "6 4")


@pytest.fixture
def triangle_plus_path():
    """Triangle {1,2,3} plus the disjoint path 4-5-6"""
    return make_graph("1 2", "2 3", "3 1", "4 5", "5 6")


@pytest.fixture
def rng():
    """Seeded generator for randomized checks"""
    return np.random.default_rng(12345)


@pytest.fixture
def planted():
    """Two blocks of 30 nodes, p_in=0.4, p_out=0.02"""
    return planted_partition([30, 30], 0.4, 0.02, seed=7)
