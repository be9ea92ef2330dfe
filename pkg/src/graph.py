"""Network ingestion, export and basic structure queries"""
import logging
from typing import Dict, Iterable, List, Sequence, TextIO, Tuple, Union

import networkx as nx
import numpy as np

from .exceptions import (
    CoverageError,
    EmptyGraphError,
    ParameterError,
    ParseError,
    UnknownNodeError,
)
from .models import Graph, GroundTruth

logger = logging.getLogger(__name__)

Line = Union[str, bytes]


def _decoded_lines(source: Iterable[Line]) -> Iterable[Tuple[int, str]]:
    for line_number, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError:
                raise ParseError("not valid UTF-8", line_number)
        yield line_number, raw.strip()


def load_edge_list(source: Iterable[Line]) -> Graph:
    """Parse an undirected edge list (SNAP convention).

    Comment lines start with '#'. Node indices follow first appearance;
    repeated and reversed edges collapse and self-loop lines are dropped.
    """
    index: Dict[str, int] = {}
    edges: List[Tuple[int, int]] = []
    skipped_loops = 0

    for line_number, line in _decoded_lines(source):
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 2 node identifiers, found {len(tokens)}", line_number)
        u, v = tokens
        if u == v:
            skipped_loops += 1
            continue
        i = index.setdefault(u, len(index))
        j = index.setdefault(v, len(index))
        edges.append((i, j))

    if not edges:
        raise EmptyGraphError("Edge list contains no edges")

    graph = Graph.from_edges(list(index), edges)
    if skipped_loops:
        logger.info(f"Dropped {skipped_loops} self-loop line(s)")
    logger.info(f"Loaded graph with n={graph.n}, m={graph.m}")
    return graph


def read_edge_list(path: str) -> Graph:
    """Load an edge-list file"""
    with open(path, "rb") as f:
        return load_edge_list(f)


def load_communities(source: Iterable[Line], graph: Graph) -> GroundTruth:
    """Parse one community per line; the first assignment of a node wins.

    Lines whose nodes were all claimed by earlier lines are dropped so every
    community stays non-empty.
    """
    index = graph.index_of()
    labels = np.full(graph.n, -1, dtype=np.int64)
    overlap_count = 0
    k_true = 0

    for line_number, line in _decoded_lines(source):
        tokens = line.split()
        if not tokens:
            continue
        claimed = 0
        for token in tokens:
            node = index.get(token)
            if node is None:
                raise UnknownNodeError(token, line_number)
            if labels[node] >= 0:
                if labels[node] != k_true:
                    overlap_count += 1
                continue
            labels[node] = k_true
            claimed += 1
        if claimed:
            k_true += 1
        else:
            logger.warning(f"Community on line {line_number} lost all nodes to earlier lines")

    missing = [graph.node_ids[i] for i in np.flatnonzero(labels < 0)]
    if missing:
        raise CoverageError(missing)
    if overlap_count:
        logger.warning(f"{overlap_count} overlapping assignment(s) resolved by first-wins")
    logger.info(f"Loaded {k_true} ground-truth communities")
    return GroundTruth(labels=labels, k_true=k_true, overlap_count=overlap_count)


def read_communities(path: str, graph: Graph) -> GroundTruth:
    """Load a ground-truth community file for graph"""
    with open(path, "rb") as f:
        return load_communities(f, graph)


def degree_vector(graph: Graph) -> np.ndarray:
    """Node degrees, entry i = sum_j a_ij"""
    return np.diff(graph.adjacency.indptr).astype(np.int64)


def export_edge_list(graph: Graph, stream: TextIO) -> None:
    """Write one 'id_i id_j' line per undirected edge"""
    for i, j in graph.edges():
        stream.write(f"{graph.node_ids[i]} {graph.node_ids[j]}\n")


def write_edge_list(graph: Graph, path: str) -> None:
    """Write the edge list of graph to path"""
    with open(path, "w", encoding="utf-8") as f:
        export_edge_list(graph, f)


def planted_partition(
    sizes: Sequence[int], p_in: float, p_out: float, seed: int = 0
) -> Tuple[Graph, GroundTruth]:
    """Sample a block-structured graph with known communities.

    Each pair inside a block is joined with probability p_in, each pair across
    blocks with probability p_out. Node identifiers are '0'..'n-1'.
    """
    if not sizes or min(sizes) < 1:
        raise ParameterError("Block sizes must be positive")
    if not (0 <= p_in <= 1 and 0 <= p_out <= 1):
        raise ParameterError("Edge probabilities must lie in [0, 1]")

    probs = np.full((len(sizes), len(sizes)), p_out)
    np.fill_diagonal(probs, p_in)
    sampled = nx.stochastic_block_model(list(sizes), probs.tolist(), seed=seed)

    labels = np.repeat(np.arange(len(sizes)), sizes)
    n = labels.size
    graph = Graph.from_edges([str(i) for i in range(n)], sampled.edges())
    truth = GroundTruth(labels=labels.astype(np.int64), k_true=len(sizes))
    return graph, truth
