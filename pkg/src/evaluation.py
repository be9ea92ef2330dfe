"""External clustering quality metrics: NMI and Purity"""
import math
from typing import Union

import numpy as np
from scipy.stats import entropy
from sklearn.metrics import mutual_info_score
from sklearn.metrics.cluster import contingency_matrix

from .exceptions import ValidationError
from .models import Contingency, GroundTruth, Partition

Labels = Union[Partition, GroundTruth, np.ndarray]

AVERAGE_METHODS = ("geometric", "arithmetic")


def _labels(value: Labels) -> np.ndarray:
    if isinstance(value, Partition):
        return value.assignment
    if isinstance(value, GroundTruth):
        return value.labels
    return np.asarray(value)


def contingency(pred: Labels, truth: Labels) -> Contingency:
    """Predicted clusters as rows, true communities as columns"""
    pred_labels, true_labels = _labels(pred), _labels(truth)
    if pred_labels.shape != true_labels.shape:
        raise ValidationError(
            f"Partition covers {pred_labels.size} nodes, ground truth {true_labels.size}"
        )
    table = contingency_matrix(true_labels, pred_labels).T.astype(np.int64)
    return Contingency(
        table=table,
        row_sums=table.sum(axis=1),
        col_sums=table.sum(axis=0),
        n=int(pred_labels.size),
    )


def nmi(pred: Labels, truth: Labels, average_method: str = "geometric") -> float:
    """I(pred; truth) normalized by sqrt(H_p H_t) (or their mean).

    Zero entropy on either side yields 0, except when both sides are the
    same single cluster, which yields 1.
    """
    if average_method not in AVERAGE_METHODS:
        raise ValueError(f"Unknown NMI normalization: {average_method}")
    table = contingency(pred, truth)
    h_pred = float(entropy(table.row_sums))
    h_true = float(entropy(table.col_sums))

    if h_pred == 0 or h_true == 0:
        single = table.table.shape == (1, 1)
        return 1.0 if single else 0.0

    mutual_info = mutual_info_score(None, None, contingency=table.table)
    if average_method == "geometric":
        normalizer = math.sqrt(h_pred * h_true)
    else:
        normalizer = 0.5 * (h_pred + h_true)
    return float(min(max(mutual_info / normalizer, 0.0), 1.0))


def purity(pred: Labels, truth: Labels) -> float:
    """Fraction of nodes in the majority true community of their cluster"""
    table = contingency(pred, truth)
    return float(table.table.max(axis=1).sum() / table.n)
