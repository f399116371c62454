"""External clustering validity indices: adjusted Rand index and NMI."""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import UsageError

__all__ = ["ContingencyTable", "adjusted_rand_index", "ari", "contingency_table", "nmi",
           "normalized_mutual_info"]


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray
    row_sums: np.ndarray
    col_sums: np.ndarray
    n: int


def _labels(a, b, min_n):
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.shape != b.shape:
        raise UsageError(f"label vectors differ in length: {a.size} vs {b.size}")
    if a.size < min_n:
        raise UsageError(f"need at least {min_n} labels, got {a.size}")
    return a, b


def contingency_table(labels_a, labels_b):
    """Cross-tabulate two labelings (any hashable-free integer/str labels)."""
    a, b = _labels(labels_a, labels_b, 0)
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    counts = np.zeros((ia.max(initial=-1) + 1, ib.max(initial=-1) + 1), dtype=np.int64)
    np.add.at(counts, (ia, ib), 1)
    return ContingencyTable(counts, counts.sum(axis=1), counts.sum(axis=0), int(a.size))


def _comb2(x):
    x = np.asarray(x, dtype=np.float64)
    return x * (x - 1.0) / 2.0


def adjusted_rand_index(labels_a, labels_b):
    """Hubert-Arabie adjusted Rand index.

    Returns 1.0 when the expected and maximum indices coincide (e.g. both
    labelings put everything in one cluster).
    """
    a, b = _labels(labels_a, labels_b, 2)
    t = contingency_table(a, b)
    index = _comb2(t.counts).sum()
    sa = _comb2(t.row_sums).sum()
    sb = _comb2(t.col_sums).sum()
    expected = sa * sb / _comb2(t.n)
    maximum = (sa + sb) / 2.0
    if maximum == expected:
        return 1.0
    return float((index - expected) / (maximum - expected))


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return -math.fsum(p * np.log(p))


def normalized_mutual_info(labels_a, labels_b):
    """Mutual information normalised by the arithmetic mean of the entropies.

    Natural logarithms; ``0 log 0 = 0``. Two single-cluster labelings give 1,
    exactly one single-cluster labeling gives 0.
    """
    a, b = _labels(labels_a, labels_b, 1)
    t = contingency_table(a, b)
    ha = _entropy(t.row_sums, t.n)
    hb = _entropy(t.col_sums, t.n)
    if ha == 0.0 and hb == 0.0:
        return 1.0
    if ha == 0.0 or hb == 0.0:
        return 0.0
    i, j = np.nonzero(t.counts)
    nij = t.counts[i, j].astype(np.float64)
    # fsum is order independent, so nmi(a, b) == nmi(b, a) bit for bit
    mi = math.fsum(nij / t.n * np.log(t.n * nij / (t.row_sums[i] * t.col_sums[j])))
    return float(min(1.0, max(0.0, mi / ((ha + hb) / 2.0))))


ari = adjusted_rand_index
nmi = normalized_mutual_info
