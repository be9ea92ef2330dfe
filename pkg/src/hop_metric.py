"""High-order proximity (HOP) metric based on weighted pointwise mutual information"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .config import DEFAULT_BUDGET, MAX_ORDER
from .exceptions import EnumerationBudgetError, ParameterError
from .models import Graph, HopTable, OrderPairCounts

logger = logging.getLogger(__name__)


class HopMetric:
    """Path-endpoint counting and HOP ratio computation.

    A k-th-order node pair is the endpoint pair of a simple path with exactly
    k edges. Orders with no path contribute nothing to any sum.
    """

    @staticmethod
    def enumerate_order_pairs(
        graph: Graph, k: int, ordered: bool = True, budget: int = DEFAULT_BUDGET
    ) -> OrderPairCounts:
        """Count the k-th-order node pairs of a graph.

        With ordered=True every simple path is counted once per direction,
        so |H_1| = 2m. With ordered=False each path is counted once.
        """
        if k < 1:
            raise ParameterError(f"Path order must be positive, got {k}")

        if k <= 2:
            ends = HopMetric._short_path_ends(graph, k, budget)
            if not ordered:
                ends = sp.triu(ends, k=1).tocsr()
        else:
            ends = HopMetric._dfs_path_ends(graph, k, ordered, budget)

        per_pair = (ends + ends.T).tocsr()
        per_pair.eliminate_zeros()
        per_node = (
            np.asarray(ends.sum(axis=1)).ravel() + np.asarray(ends.sum(axis=0)).ravel()
        ).astype(np.int64)
        total = int(ends.sum())
        logger.debug(f"Order {k}: |H_k|={total}, distinct pairs={per_pair.nnz // 2}")
        return OrderPairCounts(order=k, total=total, per_node=per_node, per_pair=per_pair)

    @staticmethod
    def _short_path_ends(graph: Graph, k: int, budget: int) -> sp.csr_matrix:
        """Ordered endpoint counts for k <= 2 via sparse products.

        Length-2 walks between distinct nodes are exactly the simple paths of
        length 2, so the diagonal of A^2 is all that has to go.
        """
        adjacency = graph.adjacency.astype(np.int64)
        extensions = adjacency.nnz
        if k == 2:
            degrees = np.diff(adjacency.indptr)
            extensions += int(np.sum(degrees * (degrees - 1)))
        if extensions > budget:
            raise EnumerationBudgetError(
                f"Order {k} needs {extensions} path extensions, budget is {budget}"
            )
        if k == 1:
            return adjacency.tocsr()
        ends = (adjacency @ adjacency).tolil()
        ends.setdiag(0)
        ends = ends.tocsr()
        ends.eliminate_zeros()
        return ends

    @staticmethod
    def _dfs_path_ends(graph: Graph, k: int, ordered: bool, budget: int) -> sp.csr_matrix:
        """Depth-bounded DFS from every start node, counting path endpoints"""
        n = graph.n
        neighbors = graph.neighbor_lists()
        rows: List[np.ndarray] = []
        cols: List[np.ndarray] = []
        vals: List[np.ndarray] = []
        extensions = 0

        for start in range(n):
            ends: List[int] = []
            path = [start]
            on_path = {start}
            stack = [iter(neighbors[start])]
            while stack:
                nxt = next(stack[-1], None)
                if nxt is None:
                    stack.pop()
                    on_path.discard(path.pop())
                    continue
                if nxt in on_path:
                    continue
                extensions += 1
                if extensions > budget:
                    raise EnumerationBudgetError(
                        f"Order {k} enumeration exceeded the budget of {budget} path extensions"
                    )
                if len(path) == k:
                    if ordered or nxt > start:
                        ends.append(nxt)
                    continue
                path.append(nxt)
                on_path.add(nxt)
                stack.append(iter(neighbors[nxt]))

            if ends:
                targets, counts = np.unique(np.asarray(ends, dtype=np.int64), return_counts=True)
                rows.append(np.full(targets.size, start, dtype=np.int64))
                cols.append(targets)
                vals.append(counts.astype(np.int64))

        if not rows:
            return sp.csr_matrix((n, n), dtype=np.int64)
        return sp.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
        ).tocsr()

    @staticmethod
    def _weight(order: int, weights: Optional[Sequence[float]]) -> float:
        if weights is None:
            return 1.0 / order
        return float(weights[order - 1])

    @staticmethod
    def _check_weights(r: int, weights: Optional[Sequence[float]]) -> None:
        if weights is None:
            return
        if len(weights) < r or any(w <= 0 for w in weights[:r]):
            raise ParameterError(f"Need {r} positive order weights")

    @staticmethod
    def hop_ratio(
        counts: Sequence[OrderPairCounts],
        pair: Tuple[int, int],
        weights: Optional[Sequence[float]] = None,
    ) -> float:
        """Return p(v_i, v_j) / (p(v_i) p(v_j)); 0 when the pair never co-occurs.

        The HOP index is the logarithm of this value.
        """
        HopMetric._check_weights(max((c.order for c in counts), default=0), weights)
        i, j = pair
        joint = 0.0
        marginal_i = 0.0
        marginal_j = 0.0
        for c in sorted(counts, key=lambda c: c.order):
            if c.total == 0:
                continue
            scale = HopMetric._weight(c.order, weights) / c.total
            joint += scale * c.pair_count(i, j)
            marginal_i += scale * c.per_node[i]
            marginal_j += scale * c.per_node[j]
        if joint == 0:
            return 0.0
        return joint / (marginal_i * marginal_j)

    @staticmethod
    def table_from_counts(
        counts: Sequence[OrderPairCounts], weights: Optional[Sequence[float]] = None
    ) -> HopTable:
        """Assemble the ratio table for every pair with a nonzero joint count"""
        counts = sorted(counts, key=lambda c: c.order)
        r = counts[-1].order if counts else 0
        HopMetric._check_weights(r, weights)
        n = counts[0].per_node.size if counts else 0

        joint = sp.csr_matrix((n, n), dtype=np.float64)
        marginal = np.zeros(n, dtype=np.float64)
        for c in counts:
            if c.total == 0:
                continue
            scale = HopMetric._weight(c.order, weights) / c.total
            joint = joint + c.per_pair.astype(np.float64) * scale
            marginal += scale * c.per_node

        joint = joint.tocoo()
        keep = joint.data > 0
        rows, cols = joint.row[keep], joint.col[keep]
        data = joint.data[keep] / (marginal[rows] * marginal[cols])
        ratios = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
        ratios.sort_indices()
        return HopTable(max_order=r, ratios=ratios)

    @staticmethod
    def build_hop_table(
        graph: Graph,
        r: int,
        weights: Optional[Sequence[float]] = None,
        budget: int = DEFAULT_BUDGET,
    ) -> HopTable:
        """Compute HOP ratios for all pairs co-occurring at some order <= r"""
        if not 1 <= r <= MAX_ORDER:
            raise ParameterError(f"Maximum order r must lie in [1, {MAX_ORDER}], got {r}")
        counts = [HopMetric.enumerate_order_pairs(graph, k, budget=budget) for k in range(1, r + 1)]
        table = HopMetric.table_from_counts(counts, weights)
        logger.debug(f"HOP table (r={r}) holds {len(table)} pairs")
        return table
