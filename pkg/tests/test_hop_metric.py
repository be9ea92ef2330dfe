"""Tests for high-order proximity counts and ratios"""
import io
import math
from collections import Counter

import numpy as np
import pytest

from src.exceptions import EnumerationBudgetError, ParameterError
from src.hop_metric import HopMetric
from src.models import Graph
from tests.conftest import make_graph, random_graph


def brute_force_ends(graph, k):
    """Ordered endpoint counts of all simple paths with k edges, by recursion"""
    neighbors = graph.neighbor_lists()
    ends = Counter()

    def extend(path):
        if len(path) == k + 1:
            ends[(path[0], path[-1])] += 1
            return
        for nxt in neighbors[path[-1]]:
            if nxt not in path:
                extend(path + [nxt])

    for start in range(graph.n):
        extend([start])
    return ends


def brute_force_ratio(graph, r, i, j, orders=None):
    """HOP ratio of (i, j) from brute-force endpoint counts"""
    orders = orders or [brute_force_ends(graph, k) for k in range(1, r + 1)]
    joint = marginal_i = marginal_j = 0.0
    for k, ends in enumerate(orders, start=1):
        total = sum(ends.values())
        if total == 0:
            continue
        w = 1.0 / k
        joint += w * (ends[(i, j)] + ends[(j, i)]) / total
        per_node = Counter()
        for (s, t), c in ends.items():
            per_node[s] += c
            per_node[t] += c
        marginal_i += w * per_node[i] / total
        marginal_j += w * per_node[j] / total
    if joint == 0:
        return 0.0
    return joint / (marginal_i * marginal_j)


def test_path_first_order(path_graph):
    """Test first-order counts on a path"""
    counts = HopMetric.enumerate_order_pairs(path_graph, 1)
    assert counts.total == 4
    assert counts.per_node[1] == 4
    assert counts.per_node[0] == 2
    assert counts.pair_count(0, 1) == 2


def test_path_second_order(path_graph):
    """Test second-order counts on a path"""
    counts = HopMetric.enumerate_order_pairs(path_graph, 2)
    assert counts.total == 2
    assert counts.pair_count(0, 2) == 2
    assert counts.per_node[1] == 0


def test_triangle_second_order(triangle):
    """Test second-order counts on a triangle"""
    counts = HopMetric.enumerate_order_pairs(triangle, 2)
    assert counts.total == 6
    for i in range(3):
        assert counts.per_node[i] == 4


def test_order_without_paths(path_graph):
    """Test an order longer than any simple path"""
    counts = HopMetric.enumerate_order_pairs(path_graph, 3)
    assert counts.total == 0
    assert counts.per_pair.nnz == 0


def test_order_must_be_positive(path_graph):
    """Test rejection of order zero"""
    with pytest.raises(ParameterError):
        HopMetric.enumerate_order_pairs(path_graph, 0)


def test_counts_match_brute_force(rng):
    """Test endpoint counts against recursive path enumeration"""
    for _ in range(200):
        graph = random_graph(rng, int(rng.integers(2, 9)), float(rng.uniform(0.2, 0.7)))
        for k in range(1, 5):
            expected = brute_force_ends(graph, k)
            counts = HopMetric.enumerate_order_pairs(graph, k)
            assert counts.total == sum(expected.values())
            for i in range(graph.n):
                for j in range(graph.n):
                    assert counts.pair_count(i, j) == expected[(i, j)] + expected[(j, i)]


def test_count_invariants(rng):
    """Test per-node and per-pair sums against the total"""
    for _ in range(30):
        graph = random_graph(rng, int(rng.integers(3, 10)), 0.4)
        for k in range(1, 4):
            for ordered in (True, False):
                counts = HopMetric.enumerate_order_pairs(graph, k, ordered=ordered)
                assert counts.per_node.sum() == 2 * counts.total
                upper = np.triu(counts.per_pair.toarray(), k=1).sum()
                assert upper == counts.total


def test_unordered_counts_are_half(rng):
    """Test unordered counts are half the ordered ones"""
    for _ in range(30):
        graph = random_graph(rng, int(rng.integers(3, 10)), 0.4)
        for k in range(1, 5):
            ordered = HopMetric.enumerate_order_pairs(graph, k, ordered=True)
            single = HopMetric.enumerate_order_pairs(graph, k, ordered=False)
            assert ordered.total == 2 * single.total


def test_counting_convention_does_not_change_ratios(rng):
    """Test ratios are the same under both counting conventions"""
    for _ in range(50):
        graph = random_graph(rng, int(rng.integers(3, 11)), 0.35)
        ordered = [HopMetric.enumerate_order_pairs(graph, k, ordered=True) for k in (1, 2, 3)]
        single = [HopMetric.enumerate_order_pairs(graph, k, ordered=False) for k in (1, 2, 3)]
        a = HopMetric.table_from_counts(ordered).ratios.toarray()
        b = HopMetric.table_from_counts(single).ratios.toarray()
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=0)


def test_vertex_transitive_marginals():
    """Test equal marginals on a vertex-transitive graph"""
    cycle = make_graph("1 2", "2 3", "3 4", "4 5", "5 6", "6 1")
    complete = make_graph(*[f"{i} {j}" for i in range(5) for j in range(i + 1, 5)])
    for graph in (cycle, complete):
        for k in (1, 2, 3):
            counts = HopMetric.enumerate_order_pairs(graph, k)
            assert len(set(counts.per_node.tolist())) == 1


def test_golden_path_ratio(path_graph):
    """Test the ratio of the path end pair"""
    counts = [HopMetric.enumerate_order_pairs(path_graph, k) for k in (1, 2)]
    assert HopMetric.hop_ratio(counts, (0, 2)) == pytest.approx(0.5, abs=1e-12)


def test_golden_triangle_ratio(triangle):
    """Test the ratio of a triangle pair"""
    counts = [HopMetric.enumerate_order_pairs(triangle, k) for k in (1, 2)]
    assert HopMetric.hop_ratio(counts, (0, 1)) == pytest.approx(0.5, abs=1e-12)


def test_golden_triangle_plus_path(triangle_plus_path):
    """Test ratios on a triangle with a pendant path"""
    counts = [HopMetric.enumerate_order_pairs(triangle_plus_path, k) for k in (1, 2)]
    # nodes 4 and 6 sit at indices 3 and 5
    expected = 0.125 / 0.325 ** 2
    assert HopMetric.hop_ratio(counts, (3, 5)) == pytest.approx(expected, abs=1e-9)
    assert HopMetric.hop_ratio(counts, (0, 3)) == 0.0


def test_ratio_matches_brute_force(rng):
    """Test ratios against brute force on random small graphs"""
    for _ in range(200):
        graph = random_graph(rng, int(rng.integers(3, 8)), 0.45)
        r = int(rng.integers(1, 4))
        orders = [brute_force_ends(graph, k) for k in range(1, r + 1)]
        counts = [HopMetric.enumerate_order_pairs(graph, k) for k in range(1, r + 1)]
        table = HopMetric.build_hop_table(graph, r)
        for i in range(graph.n):
            for j in range(i + 1, graph.n):
                expected = brute_force_ratio(graph, r, i, j, orders)
                assert HopMetric.hop_ratio(counts, (i, j)) == pytest.approx(expected, rel=1e-9, abs=1e-12)
                assert table.ratio(i, j) == pytest.approx(expected, rel=1e-9, abs=1e-12)


def test_ratio_is_symmetric(rng):
    """Test ratio symmetry in the pair"""
    for _ in range(20):
        graph = random_graph(rng, 8, 0.4)
        counts = [HopMetric.enumerate_order_pairs(graph, k) for k in (1, 2, 3)]
        for i in range(graph.n):
            for j in range(graph.n):
                assert HopMetric.hop_ratio(counts, (i, j)) == HopMetric.hop_ratio(counts, (j, i))


def test_relabeling_permutes_table(rng):
    """Test relabeling nodes permutes the table"""
    for _ in range(20):
        graph = random_graph(rng, 9, 0.35)
        perm = rng.permutation(graph.n)
        relabeled = Graph.from_edges(graph.node_ids, [(perm[i], perm[j]) for i, j in graph.edges()])
        original = HopMetric.build_hop_table(graph, 3).ratios.toarray()
        permuted = HopMetric.build_hop_table(relabeled, 3).ratios.toarray()
        np.testing.assert_allclose(permuted[np.ix_(perm, perm)], original, rtol=1e-12, atol=1e-15)


def test_first_order_table_pairs_are_edges(rng):
    """Test first-order table pairs are exactly the edges"""
    for _ in range(20):
        graph = random_graph(rng, 10, 0.3)
        table = HopMetric.build_hop_table(graph, 1)
        pairs = [(i, j) for i, j, _ in table.pairs()]
        assert pairs == [tuple(e) for e in graph.edges().tolist()]


def test_path_table_pairs(path_graph):
    """Test the table pairs of a path"""
    table = HopMetric.build_hop_table(path_graph, 2)
    assert [(i, j) for i, j, _ in table.pairs()] == [(0, 1), (0, 2), (1, 2)]
    assert len(table) == 3


def test_edgeless_graph_has_empty_table():
    """Test an edgeless graph gives an empty table"""
    graph = Graph.from_edges(["a", "b", "c"], [])
    table = HopMetric.build_hop_table(graph, 3)
    assert len(table) == 0


def test_order_bounds(path_graph):
    """Test rejection of orders outside 1..6"""
    with pytest.raises(ParameterError):
        HopMetric.build_hop_table(path_graph, 0)
    with pytest.raises(ParameterError):
        HopMetric.build_hop_table(path_graph, 7)


def test_budget_exceeded():
    """Test the enumeration budget for long and short orders"""
    complete = make_graph(*[f"{i} {j}" for i in range(7) for j in range(i + 1, 7)])
    with pytest.raises(EnumerationBudgetError):
        HopMetric.enumerate_order_pairs(complete, 4, budget=10)
    with pytest.raises(EnumerationBudgetError):
        HopMetric.enumerate_order_pairs(complete, 2, budget=10)


def test_short_order_budget_boundary(star):
    """Test the first and second order budget at its exact boundary"""
    # star with 3 leaves: 6 directed edges, 6 two-edge extensions through the center
    assert HopMetric.enumerate_order_pairs(star, 1, budget=6).total == 6
    with pytest.raises(EnumerationBudgetError):
        HopMetric.enumerate_order_pairs(star, 1, budget=5)
    assert HopMetric.enumerate_order_pairs(star, 2, budget=12).total == 6
    with pytest.raises(EnumerationBudgetError):
        HopMetric.enumerate_order_pairs(star, 2, budget=11)


def test_large_star_second_order_over_budget():
    """Test a high-degree hub is refused at second order"""
    hub = Graph.from_edges([str(i) for i in range(3001)], [(0, i) for i in range(1, 3001)])
    with pytest.raises(EnumerationBudgetError):
        HopMetric.enumerate_order_pairs(hub, 2, budget=100_000)
    assert HopMetric.enumerate_order_pairs(hub, 1, budget=100_000).total == 6000


def test_custom_weights(path_graph):
    """Test custom per-order weights and their validation"""
    counts = [HopMetric.enumerate_order_pairs(path_graph, k) for k in (1, 2)]
    # equal weights: joint(1,3) = 1, marginals 1/2 + 1 each
    assert HopMetric.hop_ratio(counts, (0, 2), weights=[1.0, 1.0]) == pytest.approx(1 / 1.5 ** 2)
    with pytest.raises(ParameterError):
        HopMetric.hop_ratio(counts, (0, 2), weights=[1.0])
    with pytest.raises(ParameterError):
        HopMetric.build_hop_table(path_graph, 2, weights=[1.0, 0.0])


def test_hop_index_and_dump(path_graph):
    """Test the log ratio and the table dump"""
    table = HopMetric.build_hop_table(path_graph, 2)
    assert table.hop_index(0, 2) == pytest.approx(math.log(0.5))
    empty = HopMetric.build_hop_table(Graph.from_edges(["a", "b"], []), 1)
    assert empty.hop_index(0, 1) == -math.inf

    stream = io.StringIO()
    table.dump(stream, path_graph.node_ids)
    lines = stream.getvalue().splitlines()
    assert lines[1] == "1 3 0.5"
    assert len(lines) == 3
