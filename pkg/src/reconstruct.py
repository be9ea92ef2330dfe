"""HOP-incorporated iterative network reconstruction"""
import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .config import DEFAULT_BUDGET, MAX_ORDER, MAX_PASSES
from .exceptions import ParameterError
from .hop_metric import HopMetric
from .models import Graph, PassRecord, ReconstructionReport

logger = logging.getLogger(__name__)


def _check_epsilon(epsilon: float) -> None:
    if not epsilon > 1:
        raise ParameterError(f"Threshold epsilon must exceed 1, got {epsilon}")


def reconstruct_once(
    graph: Graph,
    r: int,
    epsilon: float,
    weights: Optional[Sequence[float]] = None,
    budget: int = DEFAULT_BUDGET,
) -> Tuple[Graph, int]:
    """Add every non-adjacent pair whose HOP ratio reaches epsilon.

    Returns the enhanced graph (same node indexing) and the number of edges
    added. An infinite epsilon leaves the graph untouched.
    """
    _check_epsilon(epsilon)
    if not 1 <= r <= MAX_ORDER:
        raise ParameterError(f"Maximum order r must lie in [1, {MAX_ORDER}], got {r}")
    if math.isinf(epsilon):
        return graph, 0

    table = HopMetric.build_hop_table(graph, r, weights=weights, budget=budget)
    upper = sp.triu(table.ratios, k=1).tocoo()
    selected = upper.data >= epsilon
    rows, cols = upper.row[selected], upper.col[selected]
    if rows.size == 0:
        return graph, 0

    existing = np.asarray(graph.adjacency[rows, cols]).ravel() > 0
    pairs = np.column_stack([rows[~existing], cols[~existing]])
    if pairs.size == 0:
        return graph, 0
    enhanced = graph.with_added_edges(pairs)
    return enhanced, enhanced.m - graph.m


def reconstruct_iterative(
    graph: Graph,
    r: int,
    epsilon: float,
    d: int,
    weights: Optional[Sequence[float]] = None,
    budget: int = DEFAULT_BUDGET,
) -> ReconstructionReport:
    """Apply reconstruct_once d times, recomputing HOP on each pass's output.

    A pass that adds nothing is a fixed point: the remaining passes are
    recorded with zero additions without recomputation. A disabled threshold
    executes no pass at all.
    """
    if not 1 <= d <= MAX_PASSES:
        raise ParameterError(f"Pass count d must lie in [1, {MAX_PASSES}], got {d}")
    _check_epsilon(epsilon)

    if math.isinf(epsilon):
        logger.info("Reconstruction disabled (epsilon -> inf)")
        return ReconstructionReport(passes=[], final_graph=graph, executed=0)

    passes = []
    executed = 0
    current = graph
    for t in range(1, d + 1):
        before = current.m
        if passes and passes[-1].edges_added == 0:
            passes.append(PassRecord(edges_before=before, edges_added=0, edges_after=before))
            continue
        current, added = reconstruct_once(current, r, epsilon, weights=weights, budget=budget)
        executed += 1
        passes.append(PassRecord(edges_before=before, edges_added=added, edges_after=current.m))
        logger.info(f"Reconstruction pass {t}/{d}: {before} -> {current.m} edges (+{added})")

    return ReconstructionReport(passes=passes, final_graph=current, executed=executed)
