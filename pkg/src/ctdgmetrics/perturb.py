"""Controlled perturbations turning a reference graph into a degraded copy.

Each scheme takes a perturbation probability p and a seed, preserves the
event count, and is the identity at p = 0. Fidelity schemes (edge rewiring,
time perturbation, event permutation) degrade topology, timing, or the
feature-topology pairing; diversity schemes (mode dropping, mode collapse)
degrade cluster structure found by grouping per-node embeddings.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.cluster import KMeans
from sklearn.exceptions import ConvergenceWarning

from .embedding import RandomProjectionEmbedder
from .events import Ctdg

FIDELITY_KINDS = ("edge_rewiring", "time_perturbation", "event_permutation")
DIVERSITY_KINDS = ("mode_dropping", "mode_collapse")
PERTURBATION_KINDS = FIDELITY_KINDS + DIVERSITY_KINDS


@dataclass
class ModeAssignment:
    """Clustering of nodes into modes.

    ``assignment`` maps every participating node to a cluster id;
    ``representatives`` maps each cluster to the member node closest to the
    cluster mean in embedding space; ``mean_features`` maps each cluster to
    the mean feature vector of the events whose source lies in the cluster
    (falling back to events touching the cluster at all).
    """

    assignment: dict[int, int]
    representatives: dict[int, int]
    mean_features: dict[int, np.ndarray]

    @property
    def num_modes(self) -> int:
        return len(self.representatives)


def _validate_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"perturbation probability must be in [0, 1], got {p}")


def edge_rewire(g: Ctdg, p: float, seed=None) -> Ctdg:
    """Rewire each event's destination to a random other node with probability p.

    The new destination is drawn uniformly from the node universe excluding
    the source (no self-loops are introduced). Timestamps and features are
    untouched.
    """
    _validate_p(p)
    if g.num_nodes < 2:
        raise ValueError("need at least 2 nodes to rewire")
    rng = np.random.default_rng(seed)
    universe = g.node_universe
    z = len(universe)
    hit = rng.random(g.num_events) < p
    draws = rng.integers(0, z - 1, g.num_events)
    dst = g.dst.copy()
    src_pos = np.searchsorted(universe, g.src)
    # Skip the source's slot so the draw is uniform over the other z-1 nodes.
    draws = draws + (draws >= src_pos)
    dst[hit] = universe[draws[hit]]
    return Ctdg(g.src.copy(), dst, g.t.copy(), g.features.copy())


def time_perturb(g: Ctdg, p: float, seed=None) -> Ctdg:
    """Redraw interior timestamps uniformly between their neighbors with probability p.

    Event i's new timestamp is drawn from (t[i-1], t[i+1]); the lower bound
    also covers the already-updated left neighbor, so every redrawn
    timestamp stays inside its original bracket and event order is preserved
    by construction. The first and last events keep their timestamps.
    """
    _validate_p(p)
    if g.num_events < 3:
        raise ValueError("need at least 3 events to perturb timestamps")
    rng = np.random.default_rng(seed)
    hit = rng.random(g.num_events) < p
    u = rng.random(g.num_events)
    t = g.t.copy()
    for i in range(1, g.num_events - 1):
        if not hit[i]:
            continue
        lo = max(t[i - 1], g.t[i - 1])
        hi = g.t[i + 1]
        if hi > lo:
            t[i] = lo + u[i] * (hi - lo)
    return Ctdg(g.src.copy(), g.dst.copy(), t, g.features.copy())


def event_permute(g: Ctdg, p: float, seed=None, swap: bool = False) -> Ctdg:
    """Replace each event's features with another event's with probability p.

    Topology and timestamps are unchanged. By default the donor's features
    are copied (the overall feature multiset may change); with ``swap=True``
    the selected events exchange features pairwise, preserving the multiset.
    """
    _validate_p(p)
    if g.feature_dim == 0:
        raise ValueError("no features to permute")
    if g.num_events < 2:
        raise ValueError("need at least 2 events to permute features")
    rng = np.random.default_rng(seed)
    hit = rng.random(g.num_events) < p
    features = g.features.copy()
    if swap:
        selected = np.flatnonzero(hit)
        shuffled = rng.permutation(selected)
        half = len(shuffled) // 2
        left, right = shuffled[:half], shuffled[half : 2 * half]
        features[left], features[right] = g.features[right], g.features[left]
    else:
        donors = rng.integers(0, g.num_events - 1, g.num_events)
        idx = np.arange(g.num_events)
        donors = donors + (donors >= idx)  # never donate to yourself
        features[hit] = g.features[donors[hit]]
    return Ctdg(g.src.copy(), g.dst.copy(), g.t.copy(), features)


def cluster_modes(
    g: Ctdg,
    *,
    embed_dim: int = 100,
    matrix_kind: str = "structured",
    n_clusters: int | None = None,
    seed=None,
) -> ModeAssignment:
    """Group nodes into modes by k-means over their stage-1 embeddings.

    Defaults to k = max(2, round(sqrt(z))) clusters. If fitting yields fewer
    than 2 non-empty clusters it retries with k = 2, and if the embeddings
    are fully degenerate (all identical) it falls back to a deterministic
    arbitrary two-way split.
    """
    if g.num_nodes < 4:
        raise ValueError("need at least 4 nodes to cluster modes")
    rng = np.random.default_rng(seed)
    kmeans_seed = int(rng.integers(0, 2**31 - 1))
    embedder = RandomProjectionEmbedder(
        embed_dim=embed_dim,
        descriptor_dim=1,
        matrix_kind=matrix_kind,
        random_state=int(rng.integers(0, 2**31 - 1)),
    ).fit([g])
    embeddings, nodes = embedder.node_embeddings(g)
    z = len(nodes)
    k = n_clusters if n_clusters is not None else max(2, round(np.sqrt(z)))
    k = min(k, z)

    labels = _kmeans_labels(embeddings, k, kmeans_seed)
    if len(np.unique(labels)) < 2 and k != 2:
        labels = _kmeans_labels(embeddings, 2, kmeans_seed)
    if len(np.unique(labels)) < 2:
        labels = np.zeros(z, dtype=np.int64)
        labels[rng.permutation(z)[: z // 2]] = 1
    if len(np.unique(labels)) < 2:
        raise ValueError("mode clustering degenerated to a single cluster")

    assignment = {int(nodes[i]): int(labels[i]) for i in range(z)}
    representatives: dict[int, int] = {}
    for cid in np.unique(labels):
        members = np.flatnonzero(labels == cid)
        center = embeddings[members].mean(axis=0)
        dists = np.linalg.norm(embeddings[members] - center, axis=1)
        best = members[np.lexsort((nodes[members], dists))[0]]
        representatives[int(cid)] = int(nodes[best])
    mean_features = _mode_mean_features(g, assignment, sorted(representatives))
    return ModeAssignment(assignment, representatives, mean_features)


def mode_drop(g: Ctdg, modes: ModeAssignment, p: float, seed=None) -> Ctdg:
    """Drop whole modes with probability p, backfilling from survivors.

    Every event touching a dropped mode is replaced by a uniformly chosen
    surviving-mode event (endpoints and features) while keeping its original
    timestamp, so the event count and the time axis are preserved. At least
    one mode always survives.
    """
    _validate_p(p)
    if modes.num_modes < 2:
        raise ValueError("need at least 2 modes")
    rng = np.random.default_rng(seed)
    mode_ids = sorted(modes.representatives)
    dropped = {cid for cid in mode_ids if rng.random() < p}
    if len(dropped) == len(mode_ids):
        dropped.discard(mode_ids[int(rng.integers(0, len(mode_ids)))])

    cluster = modes.assignment
    affected = np.array(
        [cluster[int(s)] in dropped or cluster[int(d)] in dropped for s, d in zip(g.src, g.dst)]
    )
    donors_pool = np.flatnonzero(~affected)
    if donors_pool.size == 0:
        # No event avoids the dropped modes entirely; fall back to events
        # with at least one surviving endpoint.
        partial = np.array(
            [cluster[int(s)] not in dropped or cluster[int(d)] not in dropped for s, d in zip(g.src, g.dst)]
        )
        donors_pool = np.flatnonzero(partial)
    if donors_pool.size == 0:
        raise ValueError("no surviving events to draw replacements from")

    src = g.src.copy()
    dst = g.dst.copy()
    features = g.features.copy()
    idx = np.flatnonzero(affected)
    picks = donors_pool[rng.integers(0, donors_pool.size, idx.size)]
    src[idx] = g.src[picks]
    dst[idx] = g.dst[picks]
    features[idx] = g.features[picks]
    return Ctdg(src, dst, g.t.copy(), features)


def mode_collapse(g: Ctdg, modes: ModeAssignment, p: float, seed=None) -> Ctdg:
    """Collapse events onto their mode representatives with probability p.

    A selected event is rewired so both endpoints become their clusters'
    representative nodes and its features become the mean feature of the
    source node's mode. Timestamps are unchanged.
    """
    _validate_p(p)
    if modes.num_modes < 2:
        raise ValueError("need at least 2 modes")
    rng = np.random.default_rng(seed)
    hit = rng.random(g.num_events) < p
    cluster = modes.assignment
    reps = modes.representatives
    src = g.src.copy()
    dst = g.dst.copy()
    features = g.features.copy()
    for i in np.flatnonzero(hit):
        s_mode = cluster[int(g.src[i])]
        d_mode = cluster[int(g.dst[i])]
        src[i] = reps[s_mode]
        dst[i] = reps[d_mode]
        if g.feature_dim:
            features[i] = modes.mean_features[s_mode]
    return Ctdg(src, dst, g.t.copy(), features)


def _kmeans_labels(embeddings: np.ndarray, k: int, seed: int) -> np.ndarray:
    with warnings.catch_warnings():
        # Duplicate embeddings legitimately yield fewer clusters; the caller
        # falls back explicitly, so the convergence warning is just noise.
        warnings.simplefilter("ignore", ConvergenceWarning)
        return KMeans(n_clusters=k, random_state=seed, n_init=10).fit_predict(embeddings)


def _mode_mean_features(g: Ctdg, assignment: dict[int, int], mode_ids) -> dict[int, np.ndarray]:
    if g.feature_dim == 0:
        return {cid: np.empty(0) for cid in mode_ids}
    src_modes = np.array([assignment[int(s)] for s in g.src])
    dst_modes = np.array([assignment[int(d)] for d in g.dst])
    out: dict[int, np.ndarray] = {}
    for cid in mode_ids:
        rows = g.features[src_modes == cid]
        if rows.size == 0:
            rows = g.features[(src_modes == cid) | (dst_modes == cid)]
        if rows.size == 0:
            rows = g.features
        out[cid] = rows.mean(axis=0)
    return out
