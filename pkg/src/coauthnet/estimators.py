"""scikit-learn style wrappers.

Builders are transformers from a :class:`~coauthnet.corpus.Corpus` to a
:class:`~coauthnet.graph.Multigraph`; analysers ``fit`` on a graph and expose
results as trailing-underscore attributes.  ``get_params``/``set_params`` and
``sklearn.base.clone`` work as usual.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import build, graph as graph_mod, metrics, stats
from .validation import check_corpus, check_graph, check_year_range


class CoauthorNetwork(TransformerMixin, BaseEstimator):
    """Corpus -> coauthorship multigraph.

    Parameters
    ----------
    year_range : tuple of int, optional
        Inclusive window of meeting years.
    gender : {"female", "male"}, optional
        Keep only the induced subnetwork on that gender.
    include_singles : bool
        Add authors without any coauthored paper as isolates.
    """

    def __init__(self, year_range=None, gender=None, include_singles=False):
        self.year_range = year_range
        self.gender = gender
        self.include_singles = include_singles

    def fit(self, corpus, y=None):
        check_corpus(corpus)
        self.graph_ = self.transform(corpus)
        self.n_nodes_ = self.graph_.g
        return self

    def transform(self, corpus):
        check_corpus(corpus)
        return build.build_coauthor(
            corpus,
            year_range=check_year_range(self.year_range),
            gender_filter=self.gender,
            include_singles=self.include_singles,
        )


class JELNetwork(TransformerMixin, BaseEstimator):
    """Corpus -> thematic multigraph over JEL codes."""

    def __init__(self, coauthored_only=False):
        self.coauthored_only = coauthored_only

    def fit(self, corpus, y=None):
        self.graph_ = self.transform(corpus)
        self.n_nodes_ = self.graph_.g
        return self

    def transform(self, corpus):
        check_corpus(corpus)
        return build.build_jel(corpus, coauthored_only=self.coauthored_only)


class CentralityProfile(TransformerMixin, BaseEstimator):
    """Graph -> per-node metric frame (see :func:`coauthnet.metrics.metric_frame`)."""

    def __init__(self, include_rw=False, damping=0.85):
        self.include_rw = include_rw
        self.damping = damping

    def fit(self, graph, y=None):
        check_graph(graph)
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")
        self.frame_ = metrics.metric_frame(graph, include_rw=self.include_rw, damping=self.damping)
        return self

    def transform(self, graph):
        check_is_fitted(self, "frame_")
        check_graph(graph)
        return metrics.metric_frame(graph, include_rw=self.include_rw, damping=self.damping)

    def fit_transform(self, graph, y=None):
        return self.fit(graph).frame_

    def get_feature_names_out(self, input_features=None):
        cols = list(metrics.METRIC_COLUMNS)
        if self.include_rw:
            cols += list(metrics.RW_COLUMNS)
        return cols


class KCoreDecomposition(BaseEstimator):
    """Coreness scores and connected k-cores of a graph."""

    def fit(self, graph, y=None):
        check_graph(graph)
        result = metrics.kcore(graph)
        self.coreness_ = result.coreness
        self.cores_ = result.cores
        self.max_k_ = result.max_k
        return self

    def predict(self, graph):
        """Coreness per node of ``graph`` (refits nothing)."""
        check_is_fitted(self, "coreness_")
        return metrics.coreness(check_graph(graph))


class ComponentAnalysis(BaseEstimator):
    """Component table plus small-world diagnostics."""

    def fit(self, graph, y=None):
        check_graph(graph)
        self.components_ = graph_mod.connected_components(graph)
        self.table_ = graph_mod.component_metrics_table(graph)
        self.edge_counts_ = graph_mod.edge_counts(graph)
        self.small_world_ = stats.small_world_report(graph)
        return self


class ClusterProfile(BaseEstimator):
    """Group-level (affiliation, JEL letter, gender) metrics of a graph.

    Parameters
    ----------
    key : {"affiliation", "jel_first_letter", "gender"}
    """

    def __init__(self, key="affiliation"):
        self.key = key

    def fit(self, graph, y=None):
        check_graph(graph)
        self.partition_ = build.group_partition(graph, self.key)
        self.rows_ = build.cluster_metrics(graph, self.partition_)
        self.intra_extra_ = build.intra_extra_edges(graph, self.partition_)
        self.correlations_ = (
            stats.correlation_matrix(stats.rows_frame(self.rows_)) if len(self.rows_) >= 2 else None
        )
        return self
