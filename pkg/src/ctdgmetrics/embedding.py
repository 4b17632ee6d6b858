"""Fixed-dimensional graph descriptors via two-stage random projection.

An event stream is turned into one matrix of fixed shape regardless of its
length or node count: events are reduced to normalized (timestamp, features)
tuples and concatenated per node in time order; a first shared random
projection maps each variable-length node payload to an ``embed_dim`` vector;
a second shared projection maps each embedding coordinate across the node
axis to ``descriptor_dim`` values. Because Johnson-Lindenstrauss maps
preserve similarity independently of the input dimension, descriptors of
graphs with different sizes remain comparable, and two descriptor matrices
are scored with the Frobenius cosine distance.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .events import Ctdg
from .projections import DenseRandomMatrix, StructuredRandomMatrix

MATRIX_KINDS = ("structured", "dense")
NORMALIZATION_MODES = ("per-graph", "reference")


@dataclass(frozen=True)
class NormStats:
    """Per-channel min/max used to normalize timestamps and features."""

    t_min: float
    t_max: float
    f_min: np.ndarray
    f_max: np.ndarray


@dataclass
class NodeSequence:
    """Time-ordered concatenation of the reduced events touching one node."""

    node: int
    first_seen: float
    payload: np.ndarray  # length = participation count * (1 + feature_dim)


@dataclass
class GraphDescriptor:
    """Fixed-shape matrix representation of one graph plus the shared
    projection parameters it was produced under. Descriptors are only
    comparable when their params match."""

    matrix: np.ndarray  # (embed_dim, descriptor_dim)
    params: dict

    def save(self, path: str | Path) -> None:
        """Serialize to JSON with a params header and a base64 float64 blob."""
        payload = {
            "params": self.params,
            "shape": list(self.matrix.shape),
            "data": base64.b64encode(np.ascontiguousarray(self.matrix).tobytes()).decode("ascii"),
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
            fh.write("\n")

    @staticmethod
    def load(path: str | Path) -> "GraphDescriptor":
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        matrix = np.frombuffer(base64.b64decode(payload["data"]), dtype=np.float64)
        return GraphDescriptor(matrix.reshape(payload["shape"]).copy(), payload["params"])


def compute_norm_stats(g: Ctdg) -> NormStats:
    """Min-max statistics per channel over the whole event stream."""
    if g.num_events == 0:
        raise ValueError("cannot normalize an empty graph")
    if g.feature_dim:
        f_min = g.features.min(axis=0)
        f_max = g.features.max(axis=0)
    else:
        f_min = np.empty(0)
        f_max = np.empty(0)
    return NormStats(float(g.t[0]), float(g.t[-1]), f_min, f_max)


def normalize_events(g: Ctdg, stats: NormStats | None = None) -> tuple[np.ndarray, NormStats]:
    """Reduce events to rows ``(t, f1, ..., fk)`` min-max scaled per channel.

    Node identifiers are dropped. ``stats`` defaults to the graph's own
    statistics; pass reference-graph stats to normalize a generated graph on
    the reference scale (values may then leave [0, 1]). Constant channels map
    to 0.
    """
    if stats is None:
        stats = compute_norm_stats(g)
    out = np.empty((g.num_events, 1 + g.feature_dim), dtype=np.float64)
    t_span = stats.t_max - stats.t_min
    out[:, 0] = (g.t - stats.t_min) / t_span if t_span > 0 else 0.0
    if g.feature_dim:
        span = stats.f_max - stats.f_min
        safe = np.where(span > 0, span, 1.0)
        out[:, 1:] = np.where(span > 0, (g.features - stats.f_min) / safe, 0.0)
    return out, stats


def build_node_sequences(g: Ctdg, reduced: np.ndarray | None = None) -> list[NodeSequence]:
    """One payload per participating node, ordered by first appearance.

    Every event contributes its reduced row to both endpoint sequences (a
    self-loop therefore contributes twice to its node). Nodes are ordered by
    the timestamp of their first event, ties broken by ascending node id.
    """
    payloads, lengths, nodes, first_seen = _node_payload_matrix(g, reduced)
    return [
        NodeSequence(int(nodes[i]), float(first_seen[i]), payloads[i, : lengths[i]].copy())
        for i in range(len(nodes))
    ]


def _node_payload_matrix(
    g: Ctdg, reduced: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Node payloads stacked into one zero-padded matrix.

    Returns ``(payloads, lengths, nodes, first_seen)`` where row i of
    ``payloads`` holds node ``nodes[i]``'s concatenated reduced events in
    time order (zero-padded on the right to the graph's longest payload),
    and rows are ordered by (first appearance, node id).
    """
    if g.num_events == 0:
        raise ValueError("cannot build node sequences for an empty graph")
    if reduced is None:
        reduced, _ = normalize_events(g)
    k = g.num_events
    unit = reduced.shape[1]

    # Interleave endpoints so that, per node, contributions sort by event
    # time and a self-loop contributes its src slot before its dst slot.
    endpoints = np.empty(2 * k, dtype=np.int64)
    endpoints[0::2] = g.src
    endpoints[1::2] = g.dst
    event_idx = np.repeat(np.arange(k), 2)

    order = np.argsort(endpoints, kind="stable")
    sorted_nodes = endpoints[order]
    sorted_events = event_idx[order]
    nodes, starts, counts = np.unique(sorted_nodes, return_index=True, return_counts=True)
    first_seen = g.t[sorted_events[starts]]

    node_order = np.lexsort((nodes, first_seen))
    rank = np.empty(len(nodes), dtype=np.int64)
    rank[node_order] = np.arange(len(nodes))

    group = np.repeat(np.arange(len(nodes)), counts)
    seq = np.arange(2 * k) - np.repeat(starts, counts)
    rows = rank[group]
    cols = (seq * unit)[:, None] + np.arange(unit)[None, :]

    payloads = np.zeros((len(nodes), int(counts.max()) * unit), dtype=np.float64)
    payloads[rows[:, None], cols] = reduced[sorted_events]
    return payloads, counts[node_order] * unit, nodes[node_order], first_seen[node_order]


class RandomProjectionEmbedder(TransformerMixin, BaseEstimator):
    """Embed event-stream graphs into fixed-shape descriptor matrices.

    Fitting scans a collection of graphs for the longest node payload and the
    largest node count, then instantiates the two shared projections sized to
    cover the whole collection; transforming maps each graph to an
    ``(embed_dim, descriptor_dim)`` descriptor. Graphs compared against each
    other must be transformed by the same fitted embedder.

    Parameters
    ----------
    embed_dim : int, default=100
        Dimension of the per-node embeddings produced by the first stage.
    descriptor_dim : int, default=100
        Number of descriptors per embedding coordinate from the second stage.
    matrix_kind : {"structured", "dense"}, default="structured"
        Projection family: implicit Hadamard-Rademacher (O(L log L) apply,
        O(L) storage) or explicit orthonormalized Gaussian.
    normalization : {"per-graph", "reference"}, default="per-graph"
        Whether each transformed graph is min-max scaled with its own
        statistics or with those of the first graph seen by ``fit``.
    random_state : int or None
        Seed for both projections. None draws fresh entropy.

    Attributes
    ----------
    max_payload_ : int
        Longest node payload across the fitted graphs (first-stage rows).
    max_nodes_ : int
        Largest node count across the fitted graphs (second-stage rows).
    node_projection_, graph_projection_ :
        The shared stage-1 and stage-2 projection matrices.
    """

    def __init__(
        self,
        embed_dim: int = 100,
        descriptor_dim: int = 100,
        matrix_kind: str = "structured",
        normalization: str = "per-graph",
        random_state: int | None = None,
    ):
        self.embed_dim = embed_dim
        self.descriptor_dim = descriptor_dim
        self.matrix_kind = matrix_kind
        self.normalization = normalization
        self.random_state = random_state

    def fit(self, graphs, y=None):
        graphs = _check_graphs(graphs)
        if self.embed_dim < 1 or self.descriptor_dim < 1:
            raise ValueError("embed_dim and descriptor_dim must be positive")
        if self.matrix_kind not in MATRIX_KINDS:
            raise ValueError(f"matrix_kind must be one of {MATRIX_KINDS}")
        if self.normalization not in NORMALIZATION_MODES:
            raise ValueError(f"normalization must be one of {NORMALIZATION_MODES}")

        max_payload = 0
        max_nodes = 0
        for g in graphs:
            payload_unit = 1 + g.feature_dim
            counts = np.zeros(g.num_nodes, dtype=np.int64)
            universe = g.node_universe
            counts += np.bincount(np.searchsorted(universe, g.src), minlength=g.num_nodes)
            counts += np.bincount(np.searchsorted(universe, g.dst), minlength=g.num_nodes)
            max_payload = max(max_payload, int(counts.max()) * payload_unit)
            max_nodes = max(max_nodes, g.num_nodes)

        root = np.random.SeedSequence(self.random_state)
        seed_nodes, seed_graph = root.spawn(2)
        self.max_payload_ = max_payload
        self.max_nodes_ = max_nodes
        self.reference_stats_ = compute_norm_stats(graphs[0]) if self.normalization == "reference" else None
        if self.matrix_kind == "structured":
            self.node_projection_ = StructuredRandomMatrix(max_payload, self.embed_dim, seed_nodes)
            self.graph_projection_ = StructuredRandomMatrix(max_nodes, self.descriptor_dim, seed_graph)
        else:
            self.node_projection_ = DenseRandomMatrix(max_payload, self.embed_dim, seed_nodes)
            self.graph_projection_ = DenseRandomMatrix(max_nodes, self.descriptor_dim, seed_graph)
        self._params_header = {
            "embed_dim": self.embed_dim,
            "descriptor_dim": self.descriptor_dim,
            "matrix_kind": self.matrix_kind,
            "normalization": self.normalization,
            "seed_entropy": root.entropy,
            "max_payload": max_payload,
            "max_nodes": max_nodes,
        }
        return self

    def transform(self, graphs) -> list[GraphDescriptor]:
        check_is_fitted(self, "node_projection_")
        graphs = _check_graphs(graphs)
        return [self._embed(g) for g in graphs]

    def node_embeddings(self, g: Ctdg) -> tuple[np.ndarray, np.ndarray]:
        """Stage-1 embeddings only: (z, embed_dim) array plus the node ids
        row-aligned with it (first-appearance order)."""
        check_is_fitted(self, "node_projection_")
        embeddings, nodes = self._stage1(g)
        return embeddings, nodes

    def _stage1(self, g: Ctdg) -> tuple[np.ndarray, np.ndarray]:
        reduced, _ = normalize_events(g, self.reference_stats_)
        payloads, _, nodes, _ = _node_payload_matrix(g, reduced)
        if payloads.shape[1] > self.max_payload_:
            raise ValueError(
                f"node payload length {payloads.shape[1]} exceeds fitted maximum {self.max_payload_}"
            )
        return self.node_projection_.apply_batch(payloads), nodes

    def _embed(self, g: Ctdg) -> GraphDescriptor:
        embeddings, nodes = self._stage1(g)
        if len(nodes) > self.max_nodes_:
            raise ValueError(
                f"node count {len(nodes)} exceeds fitted maximum {self.max_nodes_}"
            )
        # One row per embedding coordinate, nodes along columns (absent node
        # slots stay zero); the second projection mixes across the node axis.
        stacked = np.zeros((self.embed_dim, self.max_nodes_), dtype=np.float64)
        stacked[:, : embeddings.shape[0]] = embeddings.T
        matrix = self.graph_projection_.apply_batch(stacked)
        return GraphDescriptor(matrix, dict(self._params_header))


def descriptor_distance(a: GraphDescriptor, b: GraphDescriptor) -> float:
    """Frobenius cosine distance between two descriptor matrices.

    d = 1 - <A, B>_F / (||A||_F ||B||_F), in [0, 2]; 0 for identical
    (or positively scaled) descriptors, 2 for antipodal ones.
    """
    if a.matrix.shape != b.matrix.shape:
        raise ValueError("descriptor shapes differ")
    if a.params != b.params:
        raise ValueError("descriptors were produced under different parameters")
    na = float(np.linalg.norm(a.matrix))
    nb = float(np.linalg.norm(b.matrix))
    if na == 0.0 or nb == 0.0:
        raise ValueError("degenerate descriptor: zero matrix has no cosine distance")
    inner = float(np.tensordot(a.matrix, b.matrix))
    # Rounding can push the cosine a hair outside [-1, 1]; clamp to the
    # documented range so identical descriptors score exactly 0.
    return min(max(1.0 - inner / (na * nb), 0.0), 2.0)


def embedding_distance(
    g_ref: Ctdg,
    g_gen: Ctdg,
    *,
    embed_dim: int = 100,
    descriptor_dim: int = 100,
    matrix_kind: str = "structured",
    normalization: str = "per-graph",
    random_state: int | None = None,
) -> float:
    """Fit an embedder on the pair and return their descriptor distance."""
    emb = RandomProjectionEmbedder(
        embed_dim=embed_dim,
        descriptor_dim=descriptor_dim,
        matrix_kind=matrix_kind,
        normalization=normalization,
        random_state=random_state,
    ).fit([g_ref, g_gen])
    da, db = emb.transform([g_ref, g_gen])
    return descriptor_distance(da, db)


def _check_graphs(graphs) -> list[Ctdg]:
    if isinstance(graphs, Ctdg):
        graphs = [graphs]
    graphs = list(graphs)
    if not graphs:
        raise ValueError("need at least one graph")
    for g in graphs:
        if not isinstance(g, Ctdg):
            raise TypeError(f"expected Ctdg, got {type(g).__name__}")
        if g.num_events == 0:
            raise ValueError("cannot embed an empty graph")
    return graphs
