"""Coauthorship and thematic network analysis for conference proceedings."""

__version__ = "0.1.0"

from .build import (
    build_coauthor,
    build_jel,
    cluster_metrics,
    group_partition,
    intra_extra_edges,
    window_series,
)
from .corpus import (
    AuthorRecord,
    Corpus,
    PaperEntry,
    annotate,
    generate_corpus,
    normalize_name,
    parse_corpus,
    yearly_counts,
)
from .estimators import (
    CentralityProfile,
    ClusterProfile,
    CoauthorNetwork,
    ComponentAnalysis,
    JELNetwork,
    KCoreDecomposition,
)
from .exceptions import ConvergenceError, CorpusError, GraphError
from .graph import (
    Multigraph,
    component_metrics_table,
    connected_components,
    density,
    distance,
    edge_counts,
    from_edge_list,
    geodesic_stats,
    induced_subgraph,
)
from .metrics import metric_frame

__all__ = [
    "AuthorRecord",
    "CentralityProfile",
    "ClusterProfile",
    "CoauthorNetwork",
    "ComponentAnalysis",
    "ConvergenceError",
    "Corpus",
    "CorpusError",
    "GraphError",
    "JELNetwork",
    "KCoreDecomposition",
    "Multigraph",
    "PaperEntry",
    "annotate",
    "build_coauthor",
    "build_jel",
    "cluster_metrics",
    "component_metrics_table",
    "connected_components",
    "density",
    "distance",
    "edge_counts",
    "from_edge_list",
    "generate_corpus",
    "geodesic_stats",
    "group_partition",
    "induced_subgraph",
    "intra_extra_edges",
    "metric_frame",
    "normalize_name",
    "parse_corpus",
    "window_series",
    "yearly_counts",
]
