import itertools
import math

import numpy as np
import pytest

from tendonsense import (
    FeatureVector,
    build_dataset,
    label_for,
    pvalue_matrix,
    rank_sum_p,
    significance_profile,
)
from tendonsense.errors import EmptyInputError


def enumerate_exact_p(a, b):
    """Two-sided rank-sum p by literal enumeration over rank subsets."""
    pooled = sorted(list(a) + list(b))
    n, n_a = len(pooled), len(a)
    ranks = {v: i + 1 for i, v in enumerate(pooled)}  # tie-free by construction
    w_obs = sum(ranks[v] for v in a)
    mu2 = n_a * (n + 1)  # 2 * mean rank sum
    obs = abs(2 * w_obs - mu2)
    extreme = total = 0
    for subset in itertools.combinations(range(1, n + 1), n_a):
        total += 1
        if abs(2 * sum(subset) - mu2) >= obs:
            extreme += 1
    return extreme / total


class TestRankSum:
    def test_fully_separated_triples(self):
        assert rank_sum_p([1, 2, 3], [4, 5, 6]) == 0.1

    def test_interleaved_pairs(self):
        assert rank_sum_p([1, 3], [2, 4]) == pytest.approx(2.0 / 3.0, abs=1e-15)

    def test_all_identical(self):
        assert rank_sum_p([7, 7, 7], [7, 7, 7]) == 1.0

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            rank_sum_p([], [1.0])

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = rng.normal(size=int(rng.integers(1, 40)))
            b = rng.normal(size=int(rng.integers(1, 40)))
            assert rank_sum_p(a, b) == rank_sum_p(b, a)

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            a = rng.normal(size=12)
            b = rng.normal(size=9) + 0.4
            base = rank_sum_p(a, b)
            assert rank_sum_p(np.exp(a), np.exp(b)) == base
            assert rank_sum_p(a**3, b**3) == base

    def test_exact_path_matches_enumeration(self):
        rng = np.random.default_rng(5)
        for n_a in range(1, 6):
            for n_b in range(1, 6):
                a = rng.normal(size=n_a)
                b = rng.normal(size=n_b)
                assert rank_sum_p(a, b) == pytest.approx(
                    enumerate_exact_p(a, b), abs=1e-12)

    def test_normal_approx_close_to_exact_on_small_samples(self):
        # 0.05 holds from two-per-side up; singleton samples are too discrete
        # for any normal approximation (worst case exact 0.5 vs 0.371 at
        # sizes (1,3)) and get the measured 0.13 ceiling instead
        rng = np.random.default_rng(6)
        for n_a in range(1, 7):
            for n_b in range(1, 7):
                for _ in range(5):
                    a = rng.normal(size=n_a)
                    b = rng.normal(size=n_b)
                    exact = enumerate_exact_p(a, b)
                    approx = _normal_approx(a, b)
                    bound = 0.05 if min(n_a, n_b) >= 2 else 0.13
                    assert abs(approx - exact) <= bound

    def test_large_separated_samples(self):
        a = np.arange(60.0)
        b = np.arange(60.0) + 100.0
        assert rank_sum_p(a, b) < 1e-10

    def test_ties_use_average_ranks(self):
        # heavy ties push the statistic through the tie-corrected variance
        a = [1.0, 1.0, 1.0, 2.0] * 8
        b = [1.0, 2.0, 2.0, 2.0] * 8
        p = rank_sum_p(a, b)
        assert 0.0 < p < 0.05


def _normal_approx(a, b):
    """rank_sum_p's approximate branch, reached via oversize tie-free input."""
    import tendonsense.stats as stats_mod

    old = stats_mod.EXACT_LIMIT
    stats_mod.EXACT_LIMIT = 0
    try:
        return rank_sum_p(a, b)
    finally:
        stats_mod.EXACT_LIMIT = old


F = label_for("texture", "F")
R1 = label_for("texture", "R1")
R2 = label_for("texture", "R2")


def three_class_dataset(rng, n=60):
    rows = []
    for lab, shift in ((F, 0.0), (R1, 5.0), (R2, 10.0)):
        for _ in range(n):
            rows.append((
                FeatureVector(
                    values=(rng.normal(shift), 1.0, rng.normal()),
                    names=("sep", "const", "noise"),
                ),
                lab,
            ))
    return build_dataset(rows, task="texture", mode="FC")


class TestPValueMatrix:
    def test_symmetric_unit_diagonal(self):
        ds = three_class_dataset(np.random.default_rng(8))
        m = pvalue_matrix(ds, 0)
        assert np.array_equal(m.p, m.p.T)
        assert np.all(np.diag(m.p) == 1.0)
        assert np.all((m.p >= 0.0) & (m.p <= 1.0))

    def test_constant_feature_all_ones(self):
        ds = three_class_dataset(np.random.default_rng(9))
        m = pvalue_matrix(ds, 1)
        assert np.all(m.p == 1.0)

    def test_disjoint_ranges_tiny_p(self):
        ds = three_class_dataset(np.random.default_rng(10))
        m = pvalue_matrix(ds, 0)
        assert m.pair(F, R2) < 1e-10

    def test_needs_two_classes(self):
        rows = [(FeatureVector((1.0,), ("x",)), F) for _ in range(5)]
        ds = build_dataset(rows, task="texture", mode="FC")
        with pytest.raises(EmptyInputError):
            pvalue_matrix(ds, 0)


class TestSignificanceProfile:
    def test_values_in_unit_interval(self):
        ds = three_class_dataset(np.random.default_rng(11))
        prof = significance_profile(ds)
        assert len(prof.average_p) == 3
        assert all(0.0 <= v <= 1.0 for v in prof.average_p)
        assert prof.average_p[0] < 0.05      # separated feature
        assert prof.average_p[1] == 1.0      # constant feature
        assert prof.average_p[2] > 0.05      # identically distributed noise

    def test_row_order_invariance(self):
        rng = np.random.default_rng(12)
        ds = three_class_dataset(rng)
        perm = np.random.default_rng(0).permutation(len(ds.rows))
        shuffled = build_dataset([ds.rows[i] for i in perm], ds.task, ds.mode)
        a = significance_profile(ds)
        b = significance_profile(shuffled)
        assert a.average_p == b.average_p

    def test_texture_corpus_dc_profile(self, texture_fc_ds):
        prof = significance_profile(texture_fc_ds)
        assert prof.average_p[0] == 1.0

    def test_texture_corpus_most_bins_significant(self, texture_fc_ds):
        prof = significance_profile(texture_fc_ds)
        avg = np.array(prof.average_p[1:])
        assert (avg < 0.05).mean() >= 0.80

    def test_stiffness_corpus_profile(self, stiffness_fc_ds):
        prof = significance_profile(stiffness_fc_ds)
        assert prof.feature_names == ("slope", "intercept", "r")
        assert all(v < 0.05 for v in prof.average_p)
