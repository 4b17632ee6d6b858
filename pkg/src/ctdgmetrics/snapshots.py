"""Discretization of event streams into cumulative static snapshots."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .events import Ctdg


@dataclass(frozen=True)
class Snapshot:
    """Induced static graph at one point in time.

    Edges are undirected and deduplicated (canonical ``(min, max)`` pairs);
    nodes are every id referenced by an event so far. Degrees follow the
    usual convention that a self-loop adds 2.
    """

    time: float
    edges: frozenset[tuple[int, int]]
    nodes: frozenset[int]
    degrees: dict[int, int]

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)


def nyquist_resolution(g: Ctdg) -> float:
    """Minimum positive inter-event time gap.

    Discretizing at this resolution puts every pair of events with distinct
    timestamps into distinct snapshots.
    """
    if g.num_events < 2:
        raise ValueError("need at least 2 events to estimate a resolution")
    gaps = np.diff(g.t)
    gaps = gaps[gaps > 0]
    if gaps.size == 0:
        raise ValueError("degenerate time axis: all timestamps identical")
    return float(gaps.min())


def snapshot_count(g: Ctdg, phi: float) -> int:
    """Number of snapshots at resolution ``phi``: floor(t_max / phi) + 1."""
    if phi <= 0:
        raise ValueError("temporal resolution must be positive")
    return int(math.floor(g.t_max / phi)) + 1


def iter_snapshot_boundaries(g: Ctdg, phi: float) -> Iterator[tuple[float, int]]:
    """Yield ``(boundary_time, end_index)`` pairs for each snapshot.

    Snapshot i covers events with t <= i * phi; the final snapshot closes at
    the last event so that discretization never drops trailing events.
    """
    count = snapshot_count(g, phi)
    t = g.t
    k = len(t)
    pos = 0
    for i in range(count):
        boundary = i * phi
        if i == count - 1:
            pos = k
        else:
            while pos < k and t[pos] <= boundary:
                pos += 1
        yield boundary, pos


def discretize(g: Ctdg, phi: float) -> list[Snapshot]:
    """Materialize the snapshot sequence of ``g`` at resolution ``phi``.

    Snapshots are built incrementally, each extending the previous edge set
    with the newly arrived events. Intended for small graphs and oracle
    checks; streaming statistics should use
    :func:`ctdgmetrics.descriptors.snapshot_series` instead.
    """
    out: list[Snapshot] = []
    edges: set[tuple[int, int]] = set()
    nodes: set[int] = set()
    degrees: dict[int, int] = {}
    start = 0
    for boundary, end in iter_snapshot_boundaries(g, phi):
        for i in range(start, end):
            a, b = int(g.src[i]), int(g.dst[i])
            nodes.add(a)
            nodes.add(b)
            e = (a, b) if a <= b else (b, a)
            if e not in edges:
                edges.add(e)
                degrees[a] = degrees.get(a, 0) + 1
                degrees[b] = degrees.get(b, 0) + 1
        start = end
        out.append(Snapshot(boundary, frozenset(edges), frozenset(nodes), dict(degrees)))
    return out
