"""Event-stream representation of continuous-time dynamic graphs."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np


@dataclass(frozen=True)
class Event:
    """A single timestamped interaction: source, destination, time, edge features."""

    src: int
    dst: int
    t: float
    features: tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class Ctdg:
    """A continuous-time dynamic graph: a time-ordered sequence of events.

    Columns are stored as parallel arrays (``src``, ``dst``, ``t``,
    ``features``) sorted by timestamp, ties keeping input order. The node
    universe is the set of ids that appear as a source or destination.
    Instances are treated as immutable; do not mutate the arrays in place.
    """

    src: np.ndarray
    dst: np.ndarray
    t: np.ndarray
    features: np.ndarray

    def __post_init__(self) -> None:
        k = len(self.t)
        if len(self.src) != k or len(self.dst) != k or self.features.shape[0] != k:
            raise ValueError("event columns have mismatched lengths")
        if self.features.ndim != 2:
            raise ValueError("features must be a 2-d array (num_events, feature_dim)")
        if k and np.any(np.diff(self.t) < 0):
            raise ValueError("events must be non-decreasing in t")
        if k and (self.src.min() < 0 or self.dst.min() < 0):
            raise ValueError("node ids must be non-negative")
        if k and self.t.min() < 0:
            raise ValueError("timestamps must be non-negative")

    @property
    def num_events(self) -> int:
        return len(self.t)

    @property
    def feature_dim(self) -> int:
        return self.features.shape[1]

    @property
    def node_universe(self) -> np.ndarray:
        """Sorted array of distinct node ids appearing in any event."""
        return np.unique(np.concatenate([self.src, self.dst])) if len(self.t) else np.empty(0, dtype=np.int64)

    @property
    def num_nodes(self) -> int:
        return len(self.node_universe)

    @property
    def t_max(self) -> float:
        return float(self.t[-1]) if len(self.t) else 0.0

    def event(self, i: int) -> Event:
        return Event(int(self.src[i]), int(self.dst[i]), float(self.t[i]), tuple(self.features[i]))

    def events(self) -> Iterator[Event]:
        for i in range(self.num_events):
            yield self.event(i)

    def equals(self, other: "Ctdg") -> bool:
        """Exact content equality (all four columns bitwise equal)."""
        return (
            np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.features, other.features)
        )

    def truncated(self, num_events: int) -> "Ctdg":
        """The sub-graph made of the first ``num_events`` events."""
        return self.window(0, num_events)

    def window(self, start: int, stop: int) -> "Ctdg":
        """The sub-graph made of events ``start`` to ``stop`` (end-exclusive)."""
        stop = min(stop, self.num_events)
        return Ctdg(
            self.src[start:stop].copy(),
            self.dst[start:stop].copy(),
            self.t[start:stop].copy(),
            self.features[start:stop].copy(),
        )

    @staticmethod
    def from_arrays(src, dst, t, features=None) -> "Ctdg":
        """Build a graph from event columns, stably sorting by timestamp."""
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        t = np.asarray(t, dtype=np.float64)
        if features is None:
            features = np.empty((len(t), 0), dtype=np.float64)
        features = np.asarray(features, dtype=np.float64)
        if features.ndim == 1:
            features = features.reshape(len(t), -1) if features.size else features.reshape(len(t), 0)
        order = np.argsort(t, kind="stable")
        return Ctdg(src[order], dst[order], t[order], features[order])

    @staticmethod
    def from_events(events: Sequence[Event]) -> "Ctdg":
        src = [e.src for e in events]
        dst = [e.dst for e in events]
        t = [e.t for e in events]
        feats = [e.features for e in events]
        dims = {len(f) for f in feats}
        if len(dims) > 1:
            raise ValueError(f"inconsistent feature dimensions: {sorted(dims)}")
        d = dims.pop() if dims else 0
        features = np.array(feats, dtype=np.float64).reshape(len(events), d)
        return Ctdg.from_arrays(src, dst, t, features)


def load_events_csv(path: str | Path) -> Ctdg:
    """Load a graph from an event CSV with rows ``src,dst,t,f1,...,fk``.

    A single header line is skipped if its first field is not numeric. The
    feature count k must be consistent across rows. Raises ValueError with
    the offending line number on malformed input.
    """
    path = Path(path)
    src: list[int] = []
    dst: list[int] = []
    t: list[float] = []
    feats: list[list[float]] = []
    feature_dim: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if lineno == 1 and not _is_number(parts[0]):
                continue  # header
            if len(parts) < 3:
                raise ValueError(f"{path}:{lineno}: expected at least src,dst,t, got {len(parts)} fields")
            try:
                s, d = int(float(parts[0])), int(float(parts[1]))
                ts = float(parts[2])
                fs = [float(x) for x in parts[3:]]
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: malformed row: {exc}") from None
            if feature_dim is None:
                feature_dim = len(fs)
            elif len(fs) != feature_dim:
                raise ValueError(
                    f"{path}:{lineno}: inconsistent feature dimension {len(fs)} (expected {feature_dim})"
                )
            src.append(s)
            dst.append(d)
            t.append(ts)
            feats.append(fs)
    if not src:
        raise ValueError(f"{path}: no events found")
    features = np.array(feats, dtype=np.float64).reshape(len(src), feature_dim or 0)
    return Ctdg.from_arrays(src, dst, t, features)


def write_events_csv(g: Ctdg, path: str | Path) -> None:
    """Write a graph to event CSV (no header, full float precision)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i in range(g.num_events):
            row = [str(int(g.src[i])), str(int(g.dst[i])), repr(float(g.t[i]))]
            row.extend(repr(float(x)) for x in g.features[i])
            fh.write(",".join(row) + "\n")


def ctdg_manifest(g: Ctdg) -> dict:
    """Bookkeeping summary of a graph: counts, span, and a content checksum."""
    h = hashlib.sha256()
    for i in range(g.num_events):
        row = f"{int(g.src[i])},{int(g.dst[i])},{float(g.t[i])!r}," + ",".join(
            repr(float(x)) for x in g.features[i]
        )
        h.update(row.encode("utf-8"))
        h.update(b"\n")
    return {
        "num_events": g.num_events,
        "num_nodes": g.num_nodes,
        "feature_dim": g.feature_dim,
        "t_min": float(g.t[0]) if g.num_events else None,
        "t_max": float(g.t[-1]) if g.num_events else None,
        "checksum": h.hexdigest(),
    }


def write_manifest(g: Ctdg, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(ctdg_manifest(g), fh, indent=2, sort_keys=True)
        fh.write("\n")


def augment_featureless(g: Ctdg) -> Ctdg:
    """Give a featureless graph a constant feature of 1 per event.

    Leaves graphs that already carry features untouched.
    """
    if g.feature_dim > 0:
        return g
    ones = np.ones((g.num_events, 1), dtype=np.float64)
    return Ctdg(g.src.copy(), g.dst.copy(), g.t.copy(), ones)


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False
