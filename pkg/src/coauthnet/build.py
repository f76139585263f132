"""Network construction from a :class:`~coauthnet.corpus.Corpus`."""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

import pandas as pd

from .corpus import UNCLASSIFIED, Corpus, normalize_gender
from .exceptions import GraphError
from .graph import (
    ClusterMetricsRow,
    Multigraph,
    _pair,
    induced_subgraph,
    subgraph_metrics,
)

logger = logging.getLogger(__name__)

PARTITION_KEYS = ("affiliation", "jel_first_letter", "gender")


def _in_window(year, year_range):
    return year_range is None or year_range[0] <= year <= year_range[1]


def build_coauthor(
    corpus: Corpus,
    year_range: tuple[int, int] | None = None,
    gender_filter: str | None = None,
    include_singles: bool = False,
) -> Multigraph:
    """Coauthorship multigraph: each k-author paper adds the k-clique.

    Only authors with at least one coauthored paper inside the window become
    nodes unless ``include_singles`` is set, in which case single authors join
    as isolates.  ``gender_filter`` restricts to the induced subgraph on that
    gender (unknown-gender authors never survive a filter).
    """
    if year_range is not None and year_range[0] > year_range[1]:
        raise GraphError(f"invalid year range {year_range}")
    edges: Counter = Counter()
    members: set = set()
    for entry in corpus.entries:
        if not _in_window(entry.year, year_range):
            continue
        if entry.coauthored:
            members.update(entry.authors)
            for u, v in combinations(entry.authors, 2):
                edges[_pair(u, v)] += 1
        elif include_singles:
            members.update(entry.authors)
    nodes = {}
    for name in members:
        rec = corpus.directory[name]
        nodes[name] = {"name": name, "gender": rec.gender, "affiliation": rec.affiliation}
    graph = Multigraph(nodes, edges, {"kind": "coauthor"})
    if gender_filter is not None:
        gender = normalize_gender(gender_filter)
        keep = [n for n in graph.nodes if graph.attr(n, "gender") == gender]
        graph = induced_subgraph(graph, keep)
    return graph


def window_series(
    corpus: Corpus, windows: Sequence[tuple[int, int]], **kwargs
) -> list[Multigraph]:
    """One coauthorship graph per (inclusive) year window."""
    checked = []
    for lo, hi in windows:
        if lo > hi:
            raise GraphError(f"invalid year range {lo}:{hi}")
        checked.append((lo, hi))
    ordered = sorted(checked)
    for (a_lo, a_hi), (b_lo, b_hi) in zip(ordered, ordered[1:]):
        if b_lo <= a_hi:
            raise GraphError(f"overlapping windows {a_lo}:{a_hi} and {b_lo}:{b_hi}")
    return [build_coauthor(corpus, year_range=w, **kwargs) for w in checked]


def decade_windows(first: int = 1960, last: int = 2014) -> list[tuple[int, int]]:
    """Ten-year windows from ``first`` with a truncated final window ending at ``last``."""
    out = []
    lo = first
    while lo <= last:
        out.append((lo, min(lo + 9, last)))
        lo += 10
    return out


def build_jel(corpus: Corpus, coauthored_only: bool = False) -> Multigraph:
    """Thematic network: JEL codes linked when they tag the same paper.

    A paper with a single code, or the same code twice, adds a self-loop.  The
    two loop sources are counted separately in ``graph.attrs``.
    """
    edges: Counter = Counter()
    seen: Counter = Counter()
    single = repeated = 0
    for entry in corpus.entries:
        if coauthored_only and not entry.coauthored:
            continue
        codes = entry.jel
        seen.update(set(codes))
        if len(codes) == 1:
            single += 1
            edges[(codes[0], codes[0])] += 1
        elif codes[0] == codes[1]:
            repeated += 1
            edges[(codes[0], codes[0])] += 1
        else:
            edges[_pair(codes[0], codes[1])] += 1
    nodes = {code: {"name": code, "letter": code[0]} for code in seen}
    if single or repeated:
        logger.info("JEL self-loops: %d single-code papers, %d repeated-code papers", single, repeated)
    return Multigraph(
        nodes,
        edges,
        {"kind": "jel", "loops_single_code": single, "loops_repeated_code": repeated},
    )


def group_partition(graph: Multigraph, key: str) -> dict[str, str]:
    """Total map node -> group label; missing attributes map to ``"unclassified"``."""
    if key not in PARTITION_KEYS:
        raise ValueError(f"unknown partition key {key!r}; expected one of {PARTITION_KEYS}")
    out = {}
    for n in graph.nodes:
        if key == "jel_first_letter":
            label = graph.attr(n, "letter") or (n[0].upper() if n else "")
        else:
            label = graph.attr(n, key)
        out[n] = label if label else UNCLASSIFIED
    return out


def _groups(graph: Multigraph, partition: Mapping) -> dict[str, list[str]]:
    """Accept ``node -> label`` or ``label -> nodes`` and return ``label -> nodes``."""
    if not partition:
        return {}
    sample = next(iter(partition.values()))
    groups: dict[str, list[str]] = defaultdict(list)
    if isinstance(sample, str):
        for node, label in partition.items():
            if node not in graph:
                raise GraphError(f"unknown node {node!r}")
            groups[label].append(node)
    else:
        for label, members in partition.items():
            members = list(members)
            if not members:
                raise GraphError(f"empty partition class {label!r}")
            for node in members:
                if node not in graph:
                    raise GraphError(f"unknown node {node!r}")
            groups[label] = members
    return dict(groups)


def cluster_metrics(graph: Multigraph, partition: Mapping) -> list[ClusterMetricsRow]:
    """Induced-subgraph metrics per group, sorted by N descending then label."""
    groups = _groups(graph, partition)
    rows = [subgraph_metrics(induced_subgraph(graph, members), str(label))
            for label, members in groups.items()]
    rows.sort(key=lambda r: (-r.N, r.label))
    return rows


@dataclass(frozen=True)
class IntraExtra:
    """Edge classification against a partition.

    ``matrix`` is a symmetric group-by-group count of edges (with multiplicity);
    its diagonal holds intra-group edges, self-loops included.
    """

    intra: dict[str, int]
    extra: dict[str, int]
    matrix: pd.DataFrame

    @property
    def total(self) -> int:
        return sum(self.intra.values()) + sum(self.extra.values()) // 2


def intra_extra_edges(graph: Multigraph, partition: Mapping) -> IntraExtra:
    groups = _groups(graph, partition)
    label_of = {n: label for label, members in groups.items() for n in members}
    missing = [n for n in graph.nodes if n not in label_of]
    if missing:
        raise GraphError(f"partition does not cover node {missing[0]!r}")
    labels = sorted(groups)
    matrix = pd.DataFrame(0, index=labels, columns=labels, dtype=int)
    intra = dict.fromkeys(labels, 0)
    extra = dict.fromkeys(labels, 0)
    for (u, v), m in graph.edges.items():
        a, b = label_of[u], label_of[v]
        if a == b:
            intra[a] += m
            matrix.loc[a, a] += m
        else:
            extra[a] += m
            extra[b] += m
            matrix.loc[a, b] += m
            matrix.loc[b, a] += m
    return IntraExtra(intra, extra, matrix)
