"""Wilcoxon rank-sum testing and per-feature class-separability profiles.

For each feature, a p-value matrix holds the two-sided rank-sum p between
every pair of classes; the feature's significance score is the mean over the
distinct off-diagonal pairs. Low scores mark features whose value alone
separates classes well.

Small tie-free samples (pooled size <= 20) use the exact permutation
distribution of the rank sum; everything else uses the normal approximation
with average ranks for ties, tie-corrected variance and a 0.5 continuity
correction. Two samples with all values identical get p = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ClassLabel, Dataset, values_for
from .errors import EmptyInputError

EXACT_LIMIT = 20  # largest pooled size for the exact path


def _exact_two_sided_p(ranks_a_sum: int, n_a: int, n: int) -> float:
    """P(|W - mean| >= |observed - mean|) for the rank sum W of n_a ranks
    drawn without replacement from 1..n, by exact counting."""
    # count[k][w] = subsets of {1..r} of size k with rank sum w
    max_w = n * (n + 1) // 2
    counts = [[0] * (max_w + 1) for _ in range(n_a + 1)]
    counts[0][0] = 1
    for r in range(1, n + 1):
        for k in range(min(r, n_a), 0, -1):
            row_k, row_prev = counts[k], counts[k - 1]
            for w in range(max_w, r - 1, -1):
                if row_prev[w - r]:
                    row_k[w] += row_prev[w - r]
    total = math.comb(n, n_a)
    # compare |2W - 2mu| so half-integer means stay in integer arithmetic
    two_mu = n_a * (n + 1)
    observed = abs(2 * ranks_a_sum - two_mu)
    extreme = sum(
        c for w, c in enumerate(counts[n_a]) if c and abs(2 * w - two_mu) >= observed
    )
    return extreme / total


def _average_ranks(pooled: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties sharing the mean of the ranks they span."""
    uniq, inverse, counts = np.unique(pooled, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    starts = ends - counts
    avg = (starts + 1 + ends) / 2.0
    return avg[inverse]


def rank_sum_p(a, b) -> float:
    """Two-sided Wilcoxon rank-sum (Mann-Whitney) p-value."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise EmptyInputError("rank-sum test needs two nonempty samples")
    n_a, n_b = a.size, b.size
    n = n_a + n_b
    pooled = np.concatenate([a, b])
    if np.all(pooled == pooled[0]):
        return 1.0
    has_ties = np.unique(pooled).size < n
    ranks = _average_ranks(pooled)
    w_a = float(ranks[:n_a].sum())
    if n <= EXACT_LIMIT and not has_ties:
        return _exact_two_sided_p(int(round(w_a)), n_a, n)
    u1 = n_a * n_b + n_a * (n_a + 1) / 2.0 - w_a
    u2 = n_a * n_b - u1
    _, counts = np.unique(pooled, return_counts=True)
    tie_term = float(((counts**3) - counts).sum())
    var = n_a * n_b / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0.0:
        return 1.0
    z = (max(u1, u2) - n_a * n_b / 2.0 - 0.5) / math.sqrt(var)
    p = math.erfc(z / math.sqrt(2.0))
    return min(1.0, max(0.0, p))


@dataclass(frozen=True)
class PValueMatrix:
    """Symmetric class-pair p-values for one feature; diagonal fixed at 1."""

    labels: tuple[ClassLabel, ...]
    p: np.ndarray
    feature_index: int

    def __post_init__(self):
        arr = np.asarray(self.p, dtype=np.float64).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "p", arr)

    def pair(self, a: ClassLabel, b: ClassLabel) -> float:
        i = self.labels.index(a)
        j = self.labels.index(b)
        return float(self.p[i, j])

    def average_off_diagonal(self) -> float:
        k = len(self.labels)
        iu = np.triu_indices(k, 1)
        return float(self.p[iu].mean())


@dataclass(frozen=True)
class SignificanceProfile:
    """Per-feature mean pairwise p-value, with the underlying matrices."""

    feature_names: tuple[str, ...]
    average_p: tuple[float, ...]
    matrices: tuple[PValueMatrix, ...]


def pvalue_matrix(ds: Dataset, feature_index: int) -> PValueMatrix:
    """Rank-sum p between every pair of classes for one feature."""
    labels = ds.present_labels()
    if len(labels) < 2:
        raise EmptyInputError("p-value matrix needs at least two classes")
    k = len(labels)
    p = np.ones((k, k))
    columns = [values_for(ds, feature_index, lab) for lab in labels]
    for i in range(k):
        for j in range(i + 1, k):
            pij = rank_sum_p(columns[i], columns[j])
            p[i, j] = pij
            p[j, i] = pij
    return PValueMatrix(labels=labels, p=p, feature_index=feature_index)


def significance_profile(ds: Dataset) -> SignificanceProfile:
    """Average pairwise p-value per feature, over all distinct class pairs."""
    matrices = tuple(pvalue_matrix(ds, f) for f in range(len(ds.feature_names)))
    averages = tuple(m.average_off_diagonal() for m in matrices)
    return SignificanceProfile(
        feature_names=ds.feature_names,
        average_p=averages,
        matrices=matrices,
    )
