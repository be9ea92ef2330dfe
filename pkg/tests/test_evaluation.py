"""Tests for NMI and Purity scoring"""
import numpy as np
import pytest

from src.evaluation import contingency, nmi, purity
from src.exceptions import ValidationError
from src.models import GroundTruth, Partition


def test_identical_partitions():
    """Test perfect scores for identical partitions"""
    labels = np.array([0, 0, 1, 1])
    assert nmi(labels, labels) == pytest.approx(1.0)
    assert purity(labels, labels) == 1.0


def test_independent_partitions():
    """Test zero NMI for independent partitions"""
    pred = np.array([0, 0, 1, 1])
    truth = np.array([0, 1, 0, 1])
    assert nmi(pred, truth) == pytest.approx(0.0, abs=1e-12)
    assert purity(pred, truth) == pytest.approx(0.5)


def test_single_cluster_against_two_communities():
    """Test scores of a single cluster against two communities"""
    pred = np.zeros(4, dtype=int)
    truth = np.array([0, 0, 1, 1])
    assert nmi(pred, truth) == 0.0
    assert purity(pred, truth) == pytest.approx(0.5)


def test_both_single_cluster():
    """Test the degenerate case of one cluster on both sides"""
    labels = np.zeros(5, dtype=int)
    assert nmi(labels, labels) == 1.0


def test_label_names_do_not_matter():
    """Test that label values are irrelevant"""
    pred = np.array([5, 5, 2, 2, 9])
    truth = np.array([0, 0, 1, 1, 2])
    assert nmi(pred, truth) == pytest.approx(1.0)
    assert purity(pred, truth) == 1.0


def test_accepts_model_types():
    """Test scoring Partition and GroundTruth objects"""
    partition = Partition(assignment=np.array([1, 1, 0, 0]))
    truth = GroundTruth(labels=np.array([0, 0, 1, 1]), k_true=2)
    assert nmi(partition, truth) == pytest.approx(1.0)
    assert purity(partition, truth) == 1.0


def test_contingency_orientation():
    """Test contingency rows are clusters and columns communities"""
    table = contingency(np.array([0, 0, 0, 1]), np.array([0, 1, 1, 1]))
    np.testing.assert_array_equal(table.table, [[1, 2], [0, 1]])
    np.testing.assert_array_equal(table.row_sums, [3, 1])
    np.testing.assert_array_equal(table.col_sums, [1, 3])
    assert table.n == 4


def test_size_mismatch():
    """Test rejection of partitions of different sizes"""
    with pytest.raises(ValidationError):
        nmi(np.array([0, 1]), np.array([0, 1, 1]))
    with pytest.raises(ValidationError):
        purity(np.array([0, 1]), np.array([0, 1, 1]))


def test_permutation_invariance(rng):
    """Test invariance under relabeling"""
    pred = rng.integers(0, 4, size=40)
    truth = rng.integers(0, 3, size=40)
    base_nmi, base_purity = nmi(pred, truth), purity(pred, truth)
    for _ in range(100):
        perm = rng.permutation(40)
        assert nmi(pred[perm], truth[perm]) == pytest.approx(base_nmi, abs=1e-12)
        assert purity(pred[perm], truth[perm]) == base_purity
        relabel = rng.permutation(4)
        assert nmi(relabel[pred], truth) == pytest.approx(base_nmi, abs=1e-12)


def test_nmi_is_symmetric(rng):
    """Test NMI symmetry in its arguments"""
    for _ in range(50):
        a = rng.integers(0, 5, size=30)
        b = rng.integers(0, 3, size=30)
        assert nmi(a, b) == pytest.approx(nmi(b, a), abs=1e-12)


def test_scores_stay_in_unit_interval(rng):
    """Test that NMI and Purity lie in [0, 1]"""
    for _ in range(50):
        a = rng.integers(0, 6, size=25)
        b = rng.integers(0, 6, size=25)
        for average in ("geometric", "arithmetic"):
            assert 0.0 <= nmi(a, b, average) <= 1.0
        assert 0.0 < purity(a, b) <= 1.0


def test_arithmetic_normalization_is_not_larger(rng):
    """Test arithmetic normalization against the geometric one"""
    for _ in range(30):
        a = rng.integers(0, 4, size=30)
        b = rng.integers(0, 2, size=30)
        # arithmetic mean >= geometric mean of the entropies
        assert nmi(a, b, "arithmetic") <= nmi(a, b, "geometric") + 1e-12


def test_unknown_normalization():
    """Test rejection of an unknown NMI normalization"""
    labels = np.array([0, 1])
    with pytest.raises(ValueError):
        nmi(labels, labels, "max")
