import math

import numpy as np
import pytest

from ctdgmetrics.events import Ctdg
from ctdgmetrics.snapshots import discretize, nyquist_resolution, snapshot_count


def random_ctdg(rng, num_events=30, num_nodes=8, integer_times=True):
    src = rng.integers(0, num_nodes, num_events)
    dst = rng.integers(0, num_nodes, num_events)
    if integer_times:
        t = np.sort(rng.integers(0, num_events * 2, num_events).astype(float))
    else:
        t = np.sort(rng.random(num_events) * 10)
    return Ctdg.from_arrays(src, dst, t)


def cumulative_edges(g, upto=None):
    # Brute-force oracle: the undirected edge set of all events (up to a time).
    edges = set()
    for i in range(g.num_events):
        if upto is not None and g.t[i] > upto:
            break
        a, b = int(g.src[i]), int(g.dst[i])
        edges.add((min(a, b), max(a, b)))
    return edges


def test_nyquist_uniform_spacing():
    g = Ctdg.from_arrays([0, 1, 2, 3], [1, 2, 3, 0], [0.0, 1.0, 2.0, 3.0])
    assert nyquist_resolution(g) == 1.0


def test_nyquist_min_gap():
    g = Ctdg.from_arrays([0, 1, 2], [1, 2, 0], [0.0, 0.5, 2.0])
    assert nyquist_resolution(g) == 0.5


def test_nyquist_degenerate_time_axis():
    g = Ctdg.from_arrays([0, 1], [1, 2], [1.0, 1.0])
    with pytest.raises(ValueError, match="degenerate time axis"):
        nyquist_resolution(g)
    with pytest.raises(ValueError, match="at least 2"):
        nyquist_resolution(Ctdg.from_arrays([0], [1], [0.0]))


def test_discretize_two_events():
    g = Ctdg.from_arrays([0, 1], [1, 2], [0.0, 1.0])
    snaps = discretize(g, 1.0)
    assert len(snaps) == 2
    assert snaps[0].edges == {(0, 1)}
    assert snaps[1].edges == {(0, 1), (1, 2)}


def test_discretize_phi_equals_tmax_two_snapshots():
    rng = np.random.default_rng(7)
    for _ in range(10):
        g = random_ctdg(rng)
        if g.t_max == g.t[0]:
            continue
        snaps = discretize(g, g.t_max)
        assert len(snaps) == 2
        assert snaps[-1].edges == cumulative_edges(g)


def test_snapshot_count_formula():
    rng = np.random.default_rng(3)
    for _ in range(20):
        g = random_ctdg(rng)
        for phi in (0.5, 1.0, 2.5, g.t_max or 1.0):
            snaps = discretize(g, phi)
            assert len(snaps) == math.floor(g.t_max / phi) + 1
            assert len(snaps) == snapshot_count(g, phi)


def test_events_at_multiples_of_phi():
    g = Ctdg.from_arrays([0, 1, 2, 3], [1, 2, 3, 4], [0.0, 1.0, 2.0, 3.0])
    snaps = discretize(g, 1.0)
    for k, s in enumerate(snaps):
        assert s.edges == cumulative_edges(g, upto=k * 1.0)


def test_nyquist_separates_distinct_timestamps():
    from ctdgmetrics.snapshots import iter_snapshot_boundaries

    rng = np.random.default_rng(11)
    for _ in range(20):
        g = random_ctdg(rng, num_events=25)
        if len(np.unique(g.t)) < 2:
            continue
        phi = nyquist_resolution(g)
        start = 0
        for _, end in iter_snapshot_boundaries(g, phi):
            assert len({float(t) for t in g.t[start:end]}) <= 1
            start = end


def test_final_nyquist_snapshot_is_lossless():
    rng = np.random.default_rng(23)
    for _ in range(20):
        g = random_ctdg(rng, num_events=40)
        if len(np.unique(g.t)) < 2:
            continue
        snaps = discretize(g, nyquist_resolution(g))
        assert snaps[-1].edges == cumulative_edges(g)


def test_discretize_rejects_bad_phi():
    g = Ctdg.from_arrays([0], [1], [0.0])
    with pytest.raises(ValueError, match="positive"):
        discretize(g, 0.0)


def test_snapshot_degrees_and_self_loop():
    g = Ctdg.from_arrays([0, 1, 2], [1, 2, 2], [0.0, 0.0, 0.0])
    (s,) = discretize(g, 1.0)
    assert s.degrees == {0: 1, 1: 2, 2: 3}  # self-loop (2,2) adds 2
    assert s.nodes == {0, 1, 2}
