"""Similarity metrics for continuous-time dynamic graphs.

Event streams are compared either through fixed-dimensional random-projection
descriptors (:class:`RandomProjectionEmbedder` + :func:`descriptor_distance`)
or through classical snapshot and node-behavior statistics fed to two-sample
distance estimators. The :mod:`ctdgmetrics.harness` module reproduces the
full evaluation protocol: perturbation sensitivity, sample efficiency, and
runtime benchmarks.
"""

from .descriptors import (
    DescriptorSeries,
    activity_rate,
    lcc,
    mean_degree,
    num_components,
    ple,
    snapshot_series,
)
from .distances import (
    feature_ks_distance,
    js_divergence,
    kl_divergence,
    ks_distance,
    mmd_distance,
    spearman,
)
from .embedding import (
    GraphDescriptor,
    NodeSequence,
    NormStats,
    RandomProjectionEmbedder,
    build_node_sequences,
    descriptor_distance,
    embedding_distance,
    normalize_events,
)
from .events import (
    Ctdg,
    Event,
    augment_featureless,
    ctdg_manifest,
    load_events_csv,
    write_events_csv,
)
from .grid import generate_grid
from .perturb import (
    ModeAssignment,
    cluster_modes,
    edge_rewire,
    event_permute,
    mode_collapse,
    mode_drop,
    time_perturb,
)
from .projections import DenseRandomMatrix, StructuredRandomMatrix, hadamard_transform
from .snapshots import Snapshot, discretize, nyquist_resolution

__version__ = "0.1.0"

__all__ = [
    "Ctdg",
    "DenseRandomMatrix",
    "DescriptorSeries",
    "Event",
    "GraphDescriptor",
    "ModeAssignment",
    "NodeSequence",
    "NormStats",
    "RandomProjectionEmbedder",
    "Snapshot",
    "StructuredRandomMatrix",
    "activity_rate",
    "augment_featureless",
    "build_node_sequences",
    "cluster_modes",
    "ctdg_manifest",
    "descriptor_distance",
    "discretize",
    "edge_rewire",
    "embedding_distance",
    "event_permute",
    "feature_ks_distance",
    "generate_grid",
    "hadamard_transform",
    "js_divergence",
    "kl_divergence",
    "ks_distance",
    "lcc",
    "load_events_csv",
    "mean_degree",
    "mmd_distance",
    "mode_collapse",
    "mode_drop",
    "normalize_events",
    "num_components",
    "nyquist_resolution",
    "ple",
    "snapshot_series",
    "spearman",
    "time_perturb",
    "write_events_csv",
]
