"""Two-sample distance estimators and the rank-correlation scoring statistic."""

from __future__ import annotations

import math

import numpy as np

#: Default number of histogram bins per channel for the divergence estimators.
DEFAULT_BINS = 32

#: Pool size above which the median-heuristic bandwidth is estimated from an
#: evenly spaced subsample of the sorted pool instead of all O(n^2) pairs.
_BANDWIDTH_MAX_POOL = 2048


def ks_distance(a, b) -> float:
    """Kolmogorov-Smirnov statistic: sup |ECDF_a - ECDF_b| over the pooled values."""
    a = _as_series(a, "a")
    b = _as_series(b, "b")
    a_sorted = np.sort(a)
    b_sorted = np.sort(b)
    pooled = np.concatenate([a_sorted, b_sorted])
    cdf_a = np.searchsorted(a_sorted, pooled, side="right") / len(a)
    cdf_b = np.searchsorted(b_sorted, pooled, side="right") / len(b)
    return float(np.max(np.abs(cdf_a - cdf_b)))


def mmd_distance(a, b, bandwidth: float | None = None) -> float:
    """Biased squared maximum mean discrepancy with a Gaussian RBF kernel.

    k(x, y) = exp(-||x - y||^2 / (2 * bandwidth^2)). When ``bandwidth`` is
    None it is set to the median pairwise distance of the pooled sample
    (1.0 if that median vanishes). Accepts scalar series or sample matrices
    with one vector per row. The V-statistic estimate is non-negative and
    exactly 0 for identical samples.
    """
    a = _as_sample(a, "a")
    b = _as_sample(b, "b")
    if a.shape[1] != b.shape[1]:
        raise ValueError("samples have different dimensions")
    if bandwidth is None:
        bandwidth = _median_bandwidth(np.concatenate([a, b]))
    elif bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    gamma = 1.0 / (2.0 * bandwidth * bandwidth)
    k_aa = _kernel_mean(a, a, gamma)
    k_bb = _kernel_mean(b, b, gamma)
    k_ab = _kernel_mean(a, b, gamma)
    return max(k_aa + k_bb - 2.0 * k_ab, 0.0)


def kl_divergence(a, b, bins: int = DEFAULT_BINS) -> float:
    """Kullback-Leibler divergence KL(hist_a || hist_b), averaged over channels.

    Per-channel histograms share the pooled min/max range and get one
    Laplace pseudo-count per bin, so the estimate is finite. Asymmetric.
    """
    pa, pb = _paired_histograms(a, b, bins)
    return float(np.mean(np.sum(pa * np.log(pa / pb), axis=1)))


def js_divergence(a, b, bins: int = DEFAULT_BINS) -> float:
    """Jensen-Shannon divergence on the same smoothed histograms as KL.

    Symmetric and bounded by ln 2.
    """
    pa, pb = _paired_histograms(a, b, bins)
    m = 0.5 * (pa + pb)
    js = 0.5 * np.sum(pa * np.log(pa / m), axis=1) + 0.5 * np.sum(pb * np.log(pb / m), axis=1)
    return float(np.mean(js))


def feature_ks_distance(a, b) -> float:
    """Per-channel KS statistic averaged over feature channels."""
    a = _as_sample(a, "a")
    b = _as_sample(b, "b")
    if a.shape[1] != b.shape[1]:
        raise ValueError("samples have different dimensions")
    return float(np.mean([ks_distance(a[:, j], b[:, j]) for j in range(a.shape[1])]))


def spearman(x, y) -> float:
    """Spearman rank correlation with average ranks for ties.

    Returns NaN when either series is constant (the correlation is
    undefined); callers report that case as "no response".
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(x) != len(y):
        raise ValueError("series must have equal length")
    if len(x) < 3:
        raise ValueError("need at least 3 observations")
    rx = average_ranks(x)
    ry = average_ranks(y)
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    denom = math.sqrt(float(rx @ rx) * float(ry @ ry))
    if denom == 0.0:
        return float("nan")
    return float(rx @ ry) / denom


def average_ranks(x) -> np.ndarray:
    """Ranks 1..n with ties assigned the mean of their covered ranks."""
    x = np.asarray(x)
    _, inverse, counts = np.unique(x, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    group_rank = ends - (counts - 1) / 2.0
    return group_rank[inverse]


def _paired_histograms(a, b, bins: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-channel smoothed histograms over the pooled range, as probabilities."""
    if bins < 1:
        raise ValueError("bins must be positive")
    a = _as_sample(a, "a")
    b = _as_sample(b, "b")
    if a.shape[1] != b.shape[1]:
        raise ValueError("samples have different dimensions")
    d = a.shape[1]
    pa = np.empty((d, bins))
    pb = np.empty((d, bins))
    for j in range(d):
        lo = min(a[:, j].min(), b[:, j].min())
        hi = max(a[:, j].max(), b[:, j].max())
        if hi <= lo:
            hi = lo + 1.0
        counts_a, _ = np.histogram(a[:, j], bins=bins, range=(lo, hi))
        counts_b, _ = np.histogram(b[:, j], bins=bins, range=(lo, hi))
        pa[j] = counts_a + 1.0  # Laplace smoothing keeps every bin positive
        pb[j] = counts_b + 1.0
    pa /= pa.sum(axis=1, keepdims=True)
    pb /= pb.sum(axis=1, keepdims=True)
    return pa, pb


def _as_series(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size == 0:
        raise ValueError(f"series {name!r} is empty")
    return x


def _as_sample(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.ndim != 2 or x.shape[0] == 0 or x.shape[1] == 0:
        raise ValueError(f"sample {name!r} must be a non-empty 1-d or 2-d array")
    return x


def _sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    diff = a[:, None, :] - b[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _kernel_mean(a: np.ndarray, b: np.ndarray, gamma: float, block: int = 512) -> float:
    # Row blocks bound peak memory to block * len(b) kernel entries.
    total = 0.0
    for i in range(0, len(a), block):
        total += float(np.exp(-gamma * _sq_dists(a[i : i + block], b)).sum())
    return total / (len(a) * len(b))


def _median_bandwidth(pool: np.ndarray) -> float:
    n = len(pool)
    if n > _BANDWIDTH_MAX_POOL:
        # Evenly spaced quantile subsample keeps the estimate deterministic
        # and the pairwise matrix bounded.
        order = np.lexsort(pool.T[::-1])
        idx = np.linspace(0, n - 1, _BANDWIDTH_MAX_POOL).astype(np.int64)
        pool = pool[order][idx]
    d = np.sqrt(_sq_dists(pool, pool))
    med = float(np.median(d[np.triu_indices(len(pool), k=1)]))
    return med if med > 0 else 1.0
