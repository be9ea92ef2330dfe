"""Data models for the community detector"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, TextIO, Tuple

import numpy as np
import scipy.sparse as sp

from .exceptions import ShapeError, ValidationError


def _symmetric_binary(n: int, rows: np.ndarray, cols: np.ndarray) -> sp.csr_matrix:
    """Build a symmetric 0/1 CSR matrix without diagonal from index pairs"""
    keep = rows != cols
    rows, cols = rows[keep], cols[keep]
    data = np.ones(2 * rows.size, dtype=np.float64)
    matrix = sp.coo_matrix(
        (data, (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
        shape=(n, n),
    ).tocsr()
    matrix.sum_duplicates()
    matrix.data[:] = 1.0
    matrix.sort_indices()
    return matrix


@dataclass(frozen=True)
class Graph:
    """Undirected, unweighted network over dense internal indices 0..n-1.

    The adjacency is a symmetric binary CSR matrix without self-loops and is
    treated as read-only once the graph exists.
    """
    node_ids: Tuple[str, ...]
    adjacency: sp.csr_matrix

    def __post_init__(self):
        n = len(self.node_ids)
        if self.adjacency.shape != (n, n):
            raise ShapeError(f"Adjacency shape {self.adjacency.shape} does not match {n} nodes")
        if self.adjacency.diagonal().any():
            raise ValidationError("Adjacency must not contain self-loops")
        if self.adjacency.nnz and not np.all(self.adjacency.data == 1.0):
            raise ValidationError("Adjacency entries must be binary")
        if (self.adjacency != self.adjacency.T).nnz:
            raise ValidationError("Adjacency must be symmetric")

    @classmethod
    def from_edges(cls, node_ids: Sequence[str], edges: Iterable[Tuple[int, int]]) -> "Graph":
        """Build a graph from internal-index pairs; duplicates and self-loops collapse"""
        pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        adjacency = _symmetric_binary(len(node_ids), pairs[:, 0], pairs[:, 1])
        return cls(node_ids=tuple(str(v) for v in node_ids), adjacency=adjacency)

    @property
    def n(self) -> int:
        """Number of nodes"""
        return len(self.node_ids)

    @property
    def m(self) -> int:
        """Number of undirected edges"""
        return self.adjacency.nnz // 2

    def neighbors(self, i: int) -> np.ndarray:
        """Sorted neighbor indices of node i"""
        start, end = self.adjacency.indptr[i], self.adjacency.indptr[i + 1]
        return self.adjacency.indices[start:end]

    def neighbor_lists(self) -> List[List[int]]:
        """Adjacency lists by internal index"""
        return [self.neighbors(i).tolist() for i in range(self.n)]

    def has_edge(self, i: int, j: int) -> bool:
        """Whether i and j are adjacent"""
        return bool(self.adjacency[i, j])

    def edges(self) -> np.ndarray:
        """Undirected edges as an (m, 2) array with i < j, in row-major order"""
        upper = sp.triu(self.adjacency, k=1).tocoo()
        order = np.lexsort((upper.col, upper.row))
        return np.column_stack([upper.row[order], upper.col[order]]).astype(np.int64)

    def with_added_edges(self, pairs: np.ndarray) -> "Graph":
        """Return a new graph holding the current edges plus the given index pairs"""
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        current = self.edges()
        merged = np.vstack([current, pairs]) if pairs.size else current
        adjacency = _symmetric_binary(self.n, merged[:, 0], merged[:, 1])
        return Graph(node_ids=self.node_ids, adjacency=adjacency)

    def index_of(self) -> Dict[str, int]:
        """Map from node identifier to internal index"""
        return {node_id: i for i, node_id in enumerate(self.node_ids)}


@dataclass(frozen=True)
class GroundTruth:
    """Disjoint reference communities; labels[i] is the community of node i"""
    labels: np.ndarray
    k_true: int
    overlap_count: int = 0

    def __post_init__(self):
        if self.labels.ndim != 1:
            raise ShapeError("Ground-truth labels must be a vector")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.k_true):
            raise ValidationError("Ground-truth label out of range")

    @property
    def n(self) -> int:
        return int(self.labels.size)


@dataclass(frozen=True)
class OrderPairCounts:
    """Path-endpoint statistics for one order k.

    per_pair is symmetric: per_pair[i, j] = N_k(v_i, v_j). per_node[v] counts
    the elements of H_k containing v, so per_node sums to 2 * total.
    """
    order: int
    total: int
    per_node: np.ndarray
    per_pair: sp.csr_matrix

    def pair_count(self, i: int, j: int) -> int:
        return int(self.per_pair[i, j])


@dataclass(frozen=True)
class HopTable:
    """Sparse symmetric table of p(v_i, v_j) / (p(v_i) p(v_j)) ratios"""
    max_order: int
    ratios: sp.csr_matrix

    def ratio(self, i: int, j: int) -> float:
        return float(self.ratios[i, j])

    def hop_index(self, i: int, j: int) -> float:
        """Natural-log HOP index; -inf for pairs that never co-occur"""
        value = self.ratio(i, j)
        return math.log(value) if value > 0 else -math.inf

    def pairs(self) -> Iterator[Tuple[int, int, float]]:
        """Pairs i < j with a positive ratio, in row-major order"""
        upper = sp.triu(self.ratios, k=1).tocoo()
        order = np.lexsort((upper.col, upper.row))
        for idx in order:
            yield int(upper.row[idx]), int(upper.col[idx]), float(upper.data[idx])

    def __len__(self) -> int:
        return sp.triu(self.ratios, k=1).nnz

    def dump(self, stream: TextIO, node_ids: Sequence[str]) -> None:
        for i, j, value in self.pairs():
            stream.write(f"{node_ids[i]} {node_ids[j]} {value:.9g}\n")


@dataclass(frozen=True)
class PassRecord:
    """Edge counts of a single reconstruction pass"""
    edges_before: int
    edges_added: int
    edges_after: int

    def to_dict(self) -> Dict[str, int]:
        return {
            "edges_before": self.edges_before,
            "edges_added": self.edges_added,
            "edges_after": self.edges_after,
        }


@dataclass
class ReconstructionReport:
    """Outcome of the iterative reconstruction"""
    passes: List[PassRecord]
    final_graph: Graph
    executed: int = 0

    @property
    def total_added(self) -> int:
        """Edges added over all executed passes"""
        return sum(p.edges_added for p in self.passes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passes": [p.to_dict() for p in self.passes],
            "executed": self.executed,
            "edges_final": self.final_graph.m,
        }


@dataclass
class FactorSet:
    """Nonnegative factors X, Y, U, each n x K"""
    X: np.ndarray
    Y: np.ndarray
    U: np.ndarray

    def __post_init__(self):
        if not (self.X.shape == self.Y.shape == self.U.shape) or self.X.ndim != 2:
            raise ShapeError(
                f"Factor shapes disagree: X{self.X.shape} Y{self.Y.shape} U{self.U.shape}"
            )

    @property
    def shape(self) -> Tuple[int, int]:
        return self.X.shape

    def copy(self) -> "FactorSet":
        return FactorSet(self.X.copy(), self.Y.copy(), self.U.copy())


@dataclass(frozen=True)
class LaplacianPieces:
    """W~ (equal to the enhanced adjacency) and its degree vector D~"""
    similarity: sp.csr_matrix
    degrees: np.ndarray

    def laplacian(self) -> sp.csr_matrix:
        return (sp.diags(self.degrees) - self.similarity).tocsr()


@dataclass(frozen=True)
class Partition:
    """Hard node-to-community assignment"""
    assignment: np.ndarray

    @property
    def n(self) -> int:
        return int(self.assignment.size)

    @property
    def n_communities(self) -> int:
        return int(np.unique(self.assignment).size)


@dataclass(frozen=True)
class Contingency:
    """Predicted-by-true co-occurrence counts"""
    table: np.ndarray
    row_sums: np.ndarray
    col_sums: np.ndarray
    n: int


@dataclass
class TrialRecord:
    """Result of one seeded training run"""
    trial: int
    seed: int
    iters: int
    objective: float
    nmi: Optional[float]
    purity: Optional[float]
    wall_ms: float
    partition: Optional[Partition] = field(default=None, repr=False)
    factors: Optional[np.ndarray] = field(default=None, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "iters": self.iters,
            "objective": self.objective,
            "nmi": self.nmi,
            "purity": self.purity,
            "wall_ms": self.wall_ms,
        }


@dataclass
class RunReport:
    """Everything one pipeline run produced"""
    config: Dict[str, Any]
    reconstruction: ReconstructionReport
    trials: List[TrialRecord]
    aggregate: Dict[str, Any]

    @property
    def best_trial(self) -> TrialRecord:
        """Trial with the lowest final objective (first on ties)"""
        return min(self.trials, key=lambda t: t.objective)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config,
            "reconstruction": self.reconstruction.to_dict(),
            "trials": [t.to_dict() for t in self.trials],
            "aggregate": self.aggregate,
        }
