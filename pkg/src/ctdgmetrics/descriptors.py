"""Classical per-snapshot and per-node graph statistics.

Snapshot statistics (mean degree, largest connected component, number of
components, power-law exponent) are evaluated over the cumulative snapshot
sequence; :func:`snapshot_series` maintains degree and component state
incrementally so a full series costs O(events + snapshots) instead of
rebuilding each snapshot from scratch.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .events import Ctdg
from .snapshots import Snapshot, iter_snapshot_boundaries

#: Finite stand-in reported when all node degrees are equal and the
#: power-law exponent diverges; keeps downstream estimators finite.
PLE_CAP = 1.0 + 1e6

SNAPSHOT_DESCRIPTORS = ("mean_degree", "lcc", "nc", "ple")


class UnionFind:
    """Disjoint sets with union by size and path compression.

    Tracks the number of components and the largest component size as
    elements are added and merged (no deletions).
    """

    def __init__(self):
        self.parent: dict[int, int] = {}
        self.size: dict[int, int] = {}
        self.num_components = 0
        self.largest = 0

    def add(self, x: int) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1
            self.num_components += 1
            if self.largest < 1:
                self.largest = 1

    def find(self, x: int) -> int:
        root = x
        parent = self.parent
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        if self.size[ra] > self.largest:
            self.largest = self.size[ra]
        self.num_components -= 1


@dataclass
class DescriptorSeries:
    """A sequence of scalar descriptor values fed to a distance estimator.

    ``mask`` marks entries where the descriptor is defined; estimators
    receive ``valid_values()``. ``meta`` records degeneracies encountered
    while computing the series (e.g. how often the PLE cap was hit).
    """

    values: np.ndarray
    kind: str  # "per-snapshot" or "per-node"
    descriptor: str
    mask: np.ndarray = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.mask is None:
            self.mask = np.ones(len(self.values), dtype=bool)
        else:
            self.mask = np.asarray(self.mask, dtype=bool)

    def __len__(self) -> int:
        return len(self.values)

    def valid_values(self) -> np.ndarray:
        return self.values[self.mask]

    def to_csv(self, path) -> None:
        """One value per row; masked entries are written as ``nan``."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for v, ok in zip(self.values, self.mask):
                fh.write((repr(float(v)) if ok else "nan") + "\n")


def mean_degree(s: Snapshot) -> float:
    """Average degree over nodes present in the snapshot; 0 when empty."""
    if not s.nodes:
        return 0.0
    return sum(s.degrees.values()) / len(s.nodes)


def lcc(s: Snapshot) -> float:
    """Size (node count) of the largest connected component; 0 when empty."""
    uf = _components(s)
    return float(uf.largest)


def num_components(s: Snapshot) -> float:
    """Number of connected components among referenced nodes; 0 when empty."""
    uf = _components(s)
    return float(uf.num_components)


def ple(s: Snapshot) -> float:
    """Hill power-law exponent of the degree sequence.

    Computes 1 + |V| / sum(log(d(v) / d_min)) over nodes with positive
    degree, d_min being the minimum positive degree. Returns ``PLE_CAP``
    when all degrees are equal (the sum vanishes).
    """
    counts = Counter(d for d in s.degrees.values() if d > 0)
    if not counts:
        raise ValueError("power-law exponent undefined: no node with positive degree")
    return _ple_from_degree_counts(counts)


def activity_rate(g: Ctdg) -> DescriptorSeries:
    """Per-node event participation counts, ordered by node id.

    Every event contributes once to its source and once to its destination,
    so a self-loop adds 2 to its node and the series sums to 2 * num_events.
    """
    if g.num_events == 0:
        return DescriptorSeries(np.empty(0), "per-node", "activity_rate")
    endpoints = np.concatenate([g.src, g.dst])
    _, counts = np.unique(endpoints, return_counts=True)
    return DescriptorSeries(counts.astype(np.float64), "per-node", "activity_rate")


def snapshot_series(g: Ctdg, descriptor: str, phi: float) -> DescriptorSeries:
    """Evaluate one snapshot statistic over the discretization of ``g``.

    Degree tables, component structure, and the degree histogram are
    maintained incrementally across snapshot boundaries; snapshots are never
    rebuilt from scratch. For ``ple``, entries on empty snapshots are masked
    out and occurrences of the degenerate all-equal-degrees cap are counted
    in ``meta['ple_capped']``.
    """
    if descriptor not in SNAPSHOT_DESCRIPTORS:
        raise ValueError(f"unknown descriptor {descriptor!r}; expected one of {SNAPSHOT_DESCRIPTORS}")
    need_components = descriptor in ("lcc", "nc")
    need_degree_hist = descriptor == "ple"

    edges: set[tuple[int, int]] = set()
    degrees: dict[int, int] = {}
    sum_degree = 0
    uf = UnionFind() if need_components else None
    degree_counts: Counter = Counter() if need_degree_hist else None

    src, dst = g.src, g.dst
    values: list[float] = []
    mask: list[bool] = []
    capped = 0
    start = 0
    for _, end in iter_snapshot_boundaries(g, phi):
        for i in range(start, end):
            a, b = int(src[i]), int(dst[i])
            e = (a, b) if a <= b else (b, a)
            if e in edges:
                continue
            edges.add(e)
            if uf is not None:
                uf.add(a)
                uf.add(b)
                uf.union(a, b)
            step = 2 if a == b else 1
            for x in (a, b) if a != b else (a,):
                d_old = degrees.get(x, 0)
                d_new = d_old + step
                degrees[x] = d_new
                sum_degree += step
                if degree_counts is not None:
                    if d_old:
                        degree_counts[d_old] -= 1
                        if not degree_counts[d_old]:
                            del degree_counts[d_old]
                    degree_counts[d_new] += 1
        start = end

        if descriptor == "mean_degree":
            values.append(sum_degree / len(degrees) if degrees else 0.0)
            mask.append(True)
        elif descriptor == "lcc":
            values.append(float(uf.largest))
            mask.append(True)
        elif descriptor == "nc":
            values.append(float(uf.num_components))
            mask.append(True)
        else:  # ple
            if not degrees:
                values.append(float("nan"))
                mask.append(False)
            else:
                v = _ple_from_degree_counts(degree_counts)
                if v == PLE_CAP:
                    capped += 1
                values.append(v)
                mask.append(True)

    meta = {"phi": phi}
    if need_degree_hist:
        meta["ple_capped"] = capped
    return DescriptorSeries(np.array(values), "per-snapshot", descriptor, np.array(mask), meta)


def _components(s: Snapshot) -> UnionFind:
    uf = UnionFind()
    for x in s.nodes:
        uf.add(x)
    for a, b in s.edges:
        uf.union(a, b)
    return uf


def _ple_from_degree_counts(counts: Counter) -> float:
    # Iterating degrees in sorted order keeps the floating-point sum
    # identical between the incremental path and from-scratch recomputation.
    nv = 0
    dmin = min(counts)
    s = 0.0
    for d in sorted(counts):
        c = counts[d]
        nv += c
        if d > dmin:
            s += c * math.log(d / dmin)
    if s == 0.0:
        return PLE_CAP
    return 1.0 + nv / s
