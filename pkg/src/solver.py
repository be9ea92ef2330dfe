"""Symmetric graph-regularized NMF (SGN), the SNMF baseline and hard assignment"""
import logging
from typing import Tuple, Union

import numpy as np
import scipy.sparse as sp

from .config import SgnConfig
from .exceptions import ShapeError
from .models import FactorSet, Graph, LaplacianPieces, Partition

logger = logging.getLogger(__name__)

Matrix = Union[sp.spmatrix, np.ndarray]
AdjacencyLike = Union[Graph, Matrix]

# (0, 0.5) is open at both ends
_INIT_LOW = np.nextafter(0.0, 1.0)
_INIT_HIGH = 0.5
_LOG_EVERY = 25
# relative rise of the objective tolerated before warning
_INCREASE_SLACK = 1e-8


def _as_matrix(adjacency: AdjacencyLike) -> Matrix:
    if isinstance(adjacency, Graph):
        return adjacency.adjacency
    return adjacency


def _frobenius_sq(matrix: Matrix) -> float:
    if sp.issparse(matrix):
        return float(matrix.multiply(matrix).sum())
    return float(np.sum(matrix * matrix))


def _check_shapes(matrix: Matrix, factors: FactorSet) -> None:
    n = matrix.shape[0]
    if matrix.shape != (n, n) or factors.shape[0] != n:
        raise ShapeError(f"Adjacency {matrix.shape} incompatible with factors {factors.shape}")


def _safe_ratio(numerator: np.ndarray, denominator: np.ndarray, factor: str) -> np.ndarray:
    """Elementwise ratio; 1 where the denominator vanishes so the entry stays put"""
    guarded = int(np.count_nonzero(denominator <= 0))
    if guarded:
        logger.debug(f"{factor} update: {guarded} zero denominator(s) left unchanged")
    ratio = np.ones_like(numerator)
    np.divide(numerator, denominator, out=ratio, where=denominator > 0)
    return ratio


def init_factors(n: int, K: int, seed: int) -> FactorSet:
    """Draw X, Y, U uniformly from (0, 0.5) with a seeded generator"""
    rng = np.random.default_rng(seed)
    X = rng.uniform(_INIT_LOW, _INIT_HIGH, size=(n, K))
    Y = rng.uniform(_INIT_LOW, _INIT_HIGH, size=(n, K))
    U = rng.uniform(_INIT_LOW, _INIT_HIGH, size=(n, K))
    return FactorSet(X=X, Y=Y, U=U)


def laplacian_pieces(adjacency: AdjacencyLike) -> LaplacianPieces:
    """W~ equals the (enhanced) adjacency; D~ holds its row sums"""
    matrix = sp.csr_matrix(_as_matrix(adjacency), dtype=np.float64)
    degrees = np.asarray(matrix.sum(axis=1)).ravel()
    return LaplacianPieces(similarity=matrix, degrees=degrees)


def sgn_objective(
    adjacency: AdjacencyLike, factors: FactorSet, cfg: SgnConfig, lap: LaplacianPieces
) -> float:
    """J = 1/4 |XX^T - A|^2 + lam/2 Tr(X^T L X) + theta/2 (|YU^T - A|^2 + |X - Y|^2 + |X - U|^2)

    Norms are expanded so no n x n dense product is formed.
    """
    A = _as_matrix(adjacency)
    _check_shapes(A, factors)
    X, Y, U = factors.X, factors.Y, factors.U
    norm_a = _frobenius_sq(A)

    XtX = X.T @ X
    fit_x = np.sum(XtX * XtX) - 2.0 * np.sum(X * (A @ X)) + norm_a
    fit_yu = np.sum((Y.T @ Y) * (U.T @ U)) - 2.0 * np.sum(Y * (A @ U)) + norm_a
    smooth = np.sum(X * (lap.degrees[:, None] * X - lap.similarity @ X))
    tie_y = np.sum((X - Y) ** 2)
    tie_u = np.sum((X - U) ** 2)

    return float(
        0.25 * fit_x
        + 0.5 * cfg.lam * smooth
        + 0.5 * cfg.theta * (fit_yu + tie_y + tie_u)
    )


def sgn_step(
    adjacency: AdjacencyLike, factors: FactorSet, cfg: SgnConfig, lap: LaplacianPieces
) -> FactorSet:
    """One X -> Y -> U multiplicative update round.

    The X ratio uses the pre-update X on both sides; Y sees the new X and U
    sees the new X and Y.
    """
    A = _as_matrix(adjacency)
    _check_shapes(A, factors)
    X, Y, U = factors.X, factors.Y, factors.U
    theta, lam, beta = cfg.theta, cfg.lam, cfg.beta

    numerator = (1.0 + lam) * (A @ X) + theta * Y + theta * U
    denominator = X @ (X.T @ X) + 2.0 * theta * X + lam * lap.degrees[:, None] * X
    X_new = X * (1.0 - beta + beta * _safe_ratio(numerator, denominator, "X"))

    numerator = A @ U + X_new
    denominator = Y @ (U.T @ U) + Y
    Y_new = Y * _safe_ratio(numerator, denominator, "Y")

    # A is symmetric, so A^T Y is computed as A Y
    numerator = A @ Y_new + X_new
    denominator = U @ (Y_new.T @ Y_new) + U
    U_new = U * _safe_ratio(numerator, denominator, "U")

    return FactorSet(X=np.asarray(X_new), Y=np.asarray(Y_new), U=np.asarray(U_new))


def sgn_train(adjacency: AdjacencyLike, cfg: SgnConfig) -> Tuple[FactorSet, np.ndarray]:
    """Train SGN from a seeded initialization.

    Stops when two consecutive objective values differ by less than tol or
    after max_iters steps. The trace holds the objective after every step.
    """
    cfg.validate()
    A = _as_matrix(adjacency)
    lap = laplacian_pieces(A)
    factors = init_factors(A.shape[0], cfg.K, cfg.seed)

    previous = sgn_objective(A, factors, cfg, lap)
    trace = []
    for iteration in range(1, cfg.max_iters + 1):
        factors = sgn_step(A, factors, cfg, lap)
        current = sgn_objective(A, factors, cfg, lap)
        trace.append(current)
        if current > previous + _INCREASE_SLACK * max(1.0, abs(previous)):
            logger.warning(
                f"SGN objective rose at iteration {iteration}: {previous:.6f} -> {current:.6f}"
            )
        if iteration % _LOG_EVERY == 0:
            logger.debug(f"SGN iteration {iteration}: objective={current:.6f}")
        if abs(current - previous) < cfg.tol:
            logger.debug(f"SGN converged after {iteration} iterations (objective={current:.6f})")
            break
        previous = current
    else:
        logger.warning(f"SGN reached the iteration cap ({cfg.max_iters}) before converging")

    return factors, np.asarray(trace)


def snmf_objective(adjacency: AdjacencyLike, X: np.ndarray) -> float:
    """J = 1/2 |A - XX^T|^2"""
    A = _as_matrix(adjacency)
    XtX = X.T @ X
    return float(0.5 * (np.sum(XtX * XtX) - 2.0 * np.sum(X * (A @ X)) + _frobenius_sq(A)))


def snmf_step(adjacency: AdjacencyLike, X: np.ndarray) -> np.ndarray:
    """x_ik <- x_ik (0.5 + (AX)_ik / (2 XX^T X)_ik)"""
    A = _as_matrix(adjacency)
    if A.shape[0] != X.shape[0]:
        raise ShapeError(f"Adjacency {A.shape} incompatible with factor {X.shape}")
    numerator = np.asarray(A @ X)
    denominator = 2.0 * (X @ (X.T @ X))
    active = denominator > 0
    if not active.all():
        logger.debug(f"SNMF update: {int((~active).sum())} zero denominator(s) left unchanged")
    multiplier = np.ones_like(X, dtype=np.float64)
    multiplier[active] = 0.5 + numerator[active] / denominator[active]
    return X * multiplier


def snmf_train(
    adjacency: AdjacencyLike, K: int, seed: int, tol: float = 1e-1, max_iters: int = 200
) -> Tuple[np.ndarray, np.ndarray]:
    """Baseline SNMF with the stabilized multiplicative rule.

    X starts from the same draw as the SGN factor X for the same seed.
    """
    A = _as_matrix(adjacency)
    X = init_factors(A.shape[0], K, seed).X

    previous = snmf_objective(A, X)
    trace = []
    for iteration in range(1, max_iters + 1):
        X = snmf_step(A, X)
        current = snmf_objective(A, X)
        trace.append(current)
        if abs(current - previous) < tol:
            logger.debug(f"SNMF converged after {iteration} iterations (objective={current:.6f})")
            break
        previous = current
    else:
        logger.warning(f"SNMF reached the iteration cap ({max_iters}) before converging")

    return X, np.asarray(trace)


def assign(X: np.ndarray) -> Partition:
    """Each node joins its argmax column; ties go to the smallest index"""
    return Partition(assignment=np.argmax(np.asarray(X), axis=1).astype(np.int64))
