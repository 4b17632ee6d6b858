import math

import numpy as np
import pytest

from ctdgmetrics.distances import (
    average_ranks,
    feature_ks_distance,
    js_divergence,
    kl_divergence,
    ks_distance,
    mmd_distance,
    spearman,
)


def brute_ks(a, b):
    """Independent oracle: scan every pooled point for the ECDF sup-difference."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    best = 0.0
    for t in np.concatenate([a, b]):
        fa = np.sum(a <= t) / len(a)
        fb = np.sum(b <= t) / len(b)
        best = max(best, abs(fa - fb))
    return best


def brute_mmd(a, b, bandwidth):
    """Independent oracle: double-loop Gaussian kernel sums."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    if a.ndim == 1:
        a = a[:, None]
    if b.ndim == 1:
        b = b[:, None]
    gamma = 1.0 / (2.0 * bandwidth**2)

    def ksum(x, y):
        total = 0.0
        for i in range(len(x)):
            for j in range(len(y)):
                total += math.exp(-gamma * float(np.sum((x[i] - y[j]) ** 2)))
        return total / (len(x) * len(y))

    return ksum(a, a) + ksum(b, b) - 2 * ksum(a, b)


def test_ks_identical():
    assert ks_distance([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0


def test_ks_disjoint():
    assert ks_distance(np.zeros(5), np.ones(7)) == 1.0


def test_ks_hand_example():
    assert abs(ks_distance([1, 2, 3], [2, 3, 4]) - 1.0 / 3.0) < 1e-15


def test_ks_matches_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(100):
        a = rng.standard_normal(int(rng.integers(1, 40)))
        b = rng.standard_normal(int(rng.integers(1, 40)))
        assert ks_distance(a, b) == brute_ks(a, b)


def test_ks_monotone_transform_invariant():
    rng = np.random.default_rng(1)
    a, b = rng.standard_normal(30), rng.standard_normal(25)
    f = lambda x: np.exp(3 * x) + 1
    assert abs(ks_distance(a, b) - ks_distance(f(a), f(b))) < 1e-15


def test_ks_empty_error():
    with pytest.raises(ValueError, match="empty"):
        ks_distance([], [1.0])


def test_mmd_identical_is_zero():
    rng = np.random.default_rng(2)
    a = rng.standard_normal(50)
    assert mmd_distance(a, a.copy()) == 0.0


def test_mmd_constant_series_closed_form():
    a = np.zeros(10)
    b = np.full(12, 10.0)
    expected = 2.0 * (1.0 - math.exp(-50.0))
    assert abs(mmd_distance(a, b, bandwidth=1.0) - expected) < 1e-12


def test_mmd_matches_brute_force():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a = rng.standard_normal(int(rng.integers(2, 30)))
        b = rng.standard_normal(int(rng.integers(2, 30)))
        assert abs(mmd_distance(a, b, bandwidth=0.7) - brute_mmd(a, b, 0.7)) < 1e-10


def test_mmd_vector_samples():
    rng = np.random.default_rng(4)
    a = rng.standard_normal((20, 3))
    b = rng.standard_normal((25, 3)) + 2.0
    assert mmd_distance(a, b) > mmd_distance(a, a.copy())


def test_mmd_bandwidth_validation():
    with pytest.raises(ValueError, match="bandwidth"):
        mmd_distance([1.0], [2.0], bandwidth=0.0)


def test_mmd_nonnegative():
    rng = np.random.default_rng(5)
    for _ in range(20):
        a = rng.standard_normal(15)
        b = a + rng.standard_normal(15) * 1e-9
        assert mmd_distance(a, b) >= 0.0


def test_kl_identical_zero():
    rng = np.random.default_rng(6)
    a = rng.standard_normal(100)
    assert kl_divergence(a, a.copy()) < 1e-12


def test_kl_two_bin_hand_example():
    # Two values per side in opposite bins: smoothed histograms are
    # (0.75, 0.25) vs (0.25, 0.75), whose KL is 0.5 * ln 3.
    a = np.array([0.0, 0.0])
    b = np.array([1.0, 1.0])
    expected = 0.5 * math.log(3.0)
    assert abs(kl_divergence(a, b, bins=2) - expected) < 1e-12
    assert round(expected, 3) == 0.549


def test_kl_asymmetric_witness():
    rng = np.random.default_rng(7)
    a = rng.standard_normal(200)
    b = rng.standard_normal(200) * 3 + 1
    assert kl_divergence(a, b) != kl_divergence(b, a)


def test_js_identical_zero():
    a = np.linspace(0, 1, 50)
    assert js_divergence(a, a.copy()) == 0.0


def test_js_disjoint_masses_near_ln2():
    a = np.zeros(500)
    b = np.ones(500)
    assert abs(js_divergence(a, b, bins=2) - math.log(2)) < 0.05


def test_js_matches_kl_decomposition():
    rng = np.random.default_rng(8)
    a = rng.standard_normal((60, 2))
    b = rng.standard_normal((80, 2)) + 0.5
    bins = 16
    from ctdgmetrics.distances import _paired_histograms

    pa, pb = _paired_histograms(a, b, bins)
    m = 0.5 * (pa + pb)
    expected = np.mean(
        0.5 * np.sum(pa * np.log(pa / m), axis=1) + 0.5 * np.sum(pb * np.log(pb / m), axis=1)
    )
    assert abs(js_divergence(a, b, bins) - expected) < 1e-12


def test_js_symmetric():
    rng = np.random.default_rng(9)
    a, b = rng.standard_normal(40), rng.standard_normal(60) + 1
    assert abs(js_divergence(a, b) - js_divergence(b, a)) < 1e-15


def test_js_bounded_by_ln2():
    rng = np.random.default_rng(10)
    for _ in range(10):
        a, b = rng.standard_normal(30), rng.standard_normal(30) * 5 + 10
        assert 0.0 <= js_divergence(a, b) <= math.log(2) + 1e-12


def test_feature_ks_averages_channels():
    a = np.column_stack([np.zeros(10), np.zeros(10)])
    b = np.column_stack([np.ones(10), np.zeros(10)])
    assert feature_ks_distance(a, b) == 0.5  # one channel disjoint, one identical


def test_spearman_monotone():
    assert spearman([1, 2, 3], [10, 20, 30]) == 1.0
    assert spearman([1, 2, 3], [3, 2, 1]) == -1.0


def test_spearman_hand_example():
    assert abs(spearman([1, 2, 3, 4], [1, 3, 2, 4]) - 0.8) < 1e-12


def test_spearman_constant_is_nan():
    assert math.isnan(spearman([1, 2, 3], [5, 5, 5]))
    assert math.isnan(spearman([2, 2, 2], [1, 2, 3]))


def test_spearman_validation():
    with pytest.raises(ValueError, match="equal length"):
        spearman([1, 2, 3], [1, 2])
    with pytest.raises(ValueError, match="at least 3"):
        spearman([1, 2], [1, 2])


def test_spearman_monotone_transform_invariant():
    rng = np.random.default_rng(11)
    x = rng.standard_normal(50)
    y = rng.standard_normal(50)
    assert abs(spearman(x, y) - spearman(np.exp(x), y)) < 1e-12
    assert abs(spearman(x, y) - spearman(x, y**3)) < 1e-12


def test_spearman_with_ties_uses_average_ranks():
    np.testing.assert_array_equal(average_ranks([10, 20, 20, 30]), [1.0, 2.5, 2.5, 4.0])
    np.testing.assert_array_equal(average_ranks([5, 5, 5]), [2.0, 2.0, 2.0])
    rho = spearman([1, 1, 2, 3], [1, 2, 3, 4])
    assert -1.0 <= rho <= 1.0


def test_distance_axioms():
    rng = np.random.default_rng(12)
    a, b = rng.standard_normal(30), rng.standard_normal(30) + 1
    assert ks_distance(a, a.copy()) == 0
    assert abs(ks_distance(a, b) - ks_distance(b, a)) < 1e-15
    assert abs(mmd_distance(a, b, 1.0) - mmd_distance(b, a, 1.0)) < 1e-12
