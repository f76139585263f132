"""Undirected multigraph with edge bookkeeping, components and geodesics.

Every distance or centrality computation runs on the *simple view*: edges
deduplicated, self-loops dropped.  Multiplicities and loops only feed the edge
counts (``EwD``, ``SL``) and export widths.
"""

from __future__ import annotations

import csv
import io
from collections import Counter, deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .exceptions import GraphError


def _pair(u, v):
    return (u, v) if u <= v else (v, u)


class Multigraph:
    """Immutable undirected multigraph on string node ids.

    Parameters
    ----------
    nodes : mapping or iterable
        Node ids, optionally mapped to an attribute dict.
    edges : mapping
        ``{(u, v): multiplicity}``; pairs are unordered, ``u == v`` is a loop.
    attrs : mapping, optional
        Graph-level metadata (provenance counters and the like).
    """

    __slots__ = ("_nodes", "_attrs", "_edges", "_adj", "_index", "attrs")

    def __init__(self, nodes=(), edges: Mapping | None = None, attrs: Mapping | None = None):
        if isinstance(nodes, Mapping):
            node_attrs = {str(n): dict(a or {}) for n, a in nodes.items()}
        else:
            node_attrs = {str(n): {} for n in nodes}
        order = tuple(sorted(node_attrs))
        self._nodes = order
        self._attrs = {n: node_attrs[n] for n in order}
        self._index = {n: i for i, n in enumerate(order)}

        merged: Counter = Counter()
        for (u, v), m in (edges or {}).items():
            u, v = str(u), str(v)
            if u not in self._index or v not in self._index:
                missing = u if u not in self._index else v
                raise GraphError(f"edge endpoint {missing!r} is not a declared node")
            m = int(m)
            if m < 1:
                raise GraphError(f"edge ({u!r}, {v!r}) has multiplicity {m} < 1")
            merged[_pair(u, v)] += m
        self._edges = dict(sorted(merged.items()))

        adj: dict[str, set] = {n: set() for n in order}
        for u, v in self._edges:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        self._adj = {n: tuple(sorted(nb)) for n, nb in adj.items()}
        self.attrs = dict(attrs or {})

    # -- basic accessors -----------------------------------------------------

    @property
    def nodes(self) -> tuple[str, ...]:
        return self._nodes

    @property
    def g(self) -> int:
        return len(self._nodes)

    def __len__(self):
        return len(self._nodes)

    def __contains__(self, node):
        return node in self._index

    def __repr__(self):
        c = edge_counts(self)
        return f"Multigraph(g={self.g}, UE={c.UE}, TE={c.TE}, SL={c.SL})"

    def node_attrs(self, node) -> dict:
        self._check(node)
        return dict(self._attrs[node])

    def attr(self, node, key, default=None):
        return self._attrs[node].get(key, default)

    @property
    def edges(self) -> dict[tuple[str, str], int]:
        """``{(u, v): multiplicity}`` with ``u <= v``, loops included."""
        return dict(self._edges)

    def neighbors(self, node) -> tuple[str, ...]:
        """Distinct non-loop neighbours (simple view), sorted."""
        self._check(node)
        return self._adj[node]

    def index(self, node) -> int:
        self._check(node)
        return self._index[node]

    def simple_edges(self) -> list[tuple[str, str]]:
        return [e for e in self._edges if e[0] != e[1]]

    def loops(self) -> dict[str, int]:
        return {u: m for (u, v), m in self._edges.items() if u == v}

    def adjacency_matrix(self, nodes=None) -> np.ndarray:
        """Dense 0/1 adjacency of the simple view, rows in ``nodes`` order."""
        order = self._nodes if nodes is None else tuple(nodes)
        pos = {n: i for i, n in enumerate(order)}
        a = np.zeros((len(order), len(order)))
        for u, v in self.simple_edges():
            if u in pos and v in pos:
                a[pos[u], pos[v]] = a[pos[v], pos[u]] = 1.0
        return a

    def index_adjacency(self) -> list[list[int]]:
        """Simple-view adjacency lists over integer node positions."""
        return [[self._index[w] for w in self._adj[n]] for n in self._nodes]

    def with_node_attrs(self, updates: Mapping[str, Mapping]) -> "Multigraph":
        """Copy with extra node attributes merged in."""
        nodes = {n: {**self._attrs[n], **dict(updates.get(n, {}))} for n in self._nodes}
        return Multigraph(nodes, self._edges, self.attrs)

    def _check(self, node):
        if node not in self._index:
            raise GraphError(f"unknown node {node!r}")


def from_edge_list(nodes, weighted_pairs: Iterable, attrs: Mapping | None = None) -> Multigraph:
    """Build a :class:`Multigraph` from ``(u, v)`` or ``(u, v, multiplicity)`` tuples."""
    edges: Counter = Counter()
    for item in weighted_pairs:
        if len(item) == 2:
            u, v, m = item[0], item[1], 1
        else:
            u, v, m = item
        edges[_pair(str(u), str(v))] += int(m)
    return Multigraph(nodes, edges, attrs)


# ---------------------------------------------------------------------------
# Edge bookkeeping
# ---------------------------------------------------------------------------


class EdgeCounts(NamedTuple):
    UE: int  # unique non-loop edges
    EwD: int  # duplicate non-loop multiplicity (total - unique)
    TE: int  # all edges with multiplicity, loops included
    SL: int  # unique self-loops

    @property
    def UE_with_loops(self) -> int:
        return self.UE + self.SL


def edge_counts(graph: Multigraph) -> EdgeCounts:
    ue = ew_total = sl = sl_total = 0
    for (u, v), m in graph._edges.items():
        if u == v:
            sl += 1
            sl_total += m
        else:
            ue += 1
            ew_total += m
    return EdgeCounts(ue, ew_total - ue, ew_total + sl_total, sl)


# ---------------------------------------------------------------------------
# Components and geodesics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentDecomposition:
    """Components sorted by size descending, ties by smallest member id."""

    components: tuple[frozenset, ...]

    @property
    def labels(self) -> list[str]:
        return [f"G{i + 1}" for i in range(len(self.components))]

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.components]

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def membership(self) -> dict[str, int]:
        return {n: i for i, comp in enumerate(self.components) for n in comp}


def connected_components(graph: Multigraph) -> ComponentDecomposition:
    seen: set = set()
    comps = []
    for start in graph.nodes:
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in graph._adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    comps.sort(key=lambda c: (-len(c), min(c)))
    return ComponentDecomposition(tuple(comps))


def bfs_distances(graph: Multigraph, source) -> dict[str, int]:
    """Hop counts from ``source`` to every reachable node (itself at 0)."""
    graph._check(source)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in graph._adj[u]:
            if w not in dist:
                dist[w] = du
                queue.append(w)
    return dist


def distance(graph: Multigraph, a, b) -> int | None:
    """Geodesic hop count between ``a`` and ``b``; ``None`` when unreachable."""
    graph._check(a)
    graph._check(b)
    return bfs_distances(graph, a).get(b)


class GeodesicStats(NamedTuple):
    MGD: int  # diameter: largest finite distance
    AGD: float | None  # None when the graph has no non-loop edge
    finite_pair_count: int  # ordered pairs, self-pairs included


def geodesic_stats(graph: Multigraph) -> GeodesicStats:
    """Diameter and average geodesic distance.

    The average runs over every ordered pair ``(i, j)`` with a finite distance,
    self-pairs included at distance 0; K_n therefore gives ``(n - 1) / n``.
    """
    adj = graph.index_adjacency()
    n = len(adj)
    total = pairs = diameter = 0
    has_edge = False
    for s in range(n):
        if adj[s]:
            has_edge = True
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = du
                    total += du
                    pairs += 1
                    if du > diameter:
                        diameter = du
                    queue.append(w)
        pairs += 1  # the self-pair
    agd = total / pairs if has_edge else None
    return GeodesicStats(diameter, agd, pairs)


def density(graph: Multigraph) -> float | None:
    """``2 * UE / (g * (g - 1))``; ``None`` for fewer than two nodes."""
    g = graph.g
    if g < 2:
        return None
    return 2.0 * edge_counts(graph).UE / (g * (g - 1))


def induced_subgraph(graph: Multigraph, node_set) -> Multigraph:
    """Nodes in ``node_set`` with every edge (multiplicity, loops) inside it."""
    keep = set(node_set)
    for n in keep:
        graph._check(n)
    nodes = {n: graph._attrs[n] for n in graph.nodes if n in keep}
    edges = {e: m for e, m in graph._edges.items() if e[0] in keep and e[1] in keep}
    return Multigraph(nodes, edges, graph.attrs)


# ---------------------------------------------------------------------------
# Per-group metric rows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClusterMetricsRow:
    """Induced-subgraph statistics for one component or group.

    ``MVCC``/``MECC`` are the node count and total edge count (multiplicity and
    loops included) of the largest connected component; ``AGD`` and ``D`` are
    ``None`` when the subgraph has no non-loop edge.
    """

    label: str
    N: int
    UE: int
    EwD: int
    TE: int
    SL: int
    CC: int
    SVCC: int
    MVCC: int
    MECC: int
    MGD: int
    AGD: float | None
    D: float | None

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


COMPONENT_COLUMNS = ("N", "UE", "EwD", "TE", "MGD", "AGD", "D")
AFFILIATION_COLUMNS = ("N", "UE", "EwD", "TE", "CC", "SVCC", "MVCC", "MECC", "MGD", "AGD", "D")
JEL_COLUMNS = ("N", "TE", "SL", "CC", "SVCC", "MVCC", "MECC", "MGD", "AGD", "D")


def subgraph_metrics(graph: Multigraph, label: str) -> ClusterMetricsRow:
    """Full :class:`ClusterMetricsRow` for ``graph`` taken as one group."""
    counts = edge_counts(graph)
    comps = connected_components(graph)
    geo = geodesic_stats(graph)
    if len(comps):
        largest = induced_subgraph(graph, comps.components[0])
        mvcc, mecc = largest.g, edge_counts(largest).TE
    else:
        mvcc = mecc = 0
    no_edge = counts.UE == 0
    return ClusterMetricsRow(
        label=label,
        N=graph.g,
        UE=counts.UE,
        EwD=counts.EwD,
        TE=counts.TE,
        SL=counts.SL,
        CC=len(comps),
        SVCC=sum(1 for c in comps if len(c) == 1),
        MVCC=mvcc,
        MECC=mecc,
        MGD=geo.MGD,
        AGD=None if no_edge else geo.AGD,
        D=None if no_edge else density(graph),
    )


def component_metrics_table(graph: Multigraph) -> list[ClusterMetricsRow]:
    """One row per connected component, labelled ``G1..Gn`` by size."""
    comps = connected_components(graph)
    return [
        subgraph_metrics(induced_subgraph(graph, comp), label)
        for label, comp in zip(comps.labels, comps.components)
    ]


# ---------------------------------------------------------------------------
# Edge-list exchange format
# ---------------------------------------------------------------------------

NODE_SIDECAR_SUFFIX = ".nodes.csv"


def _sidecar(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + NODE_SIDECAR_SUFFIX)


def dumps_edge_list(graph: Multigraph) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["u", "v", "multiplicity"])
    for (u, v), m in graph._edges.items():
        writer.writerow([u, v, m])
    return buf.getvalue()


def dumps_node_table(graph: Multigraph) -> str:
    keys = sorted({k for a in graph._attrs.values() for k in a})
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["node", *keys])
    for n in graph.nodes:
        writer.writerow([n, *(graph._attrs[n].get(k, "") for k in keys)])
    return buf.getvalue()


def write_edge_list(graph: Multigraph, path) -> Path:
    """Write ``u,v,multiplicity`` rows plus a ``<path>.nodes.csv`` attribute sidecar."""
    path = Path(path)
    path.write_text(dumps_edge_list(graph), encoding="utf-8")
    _sidecar(path).write_text(dumps_node_table(graph), encoding="utf-8")
    return path


def read_edge_list(path) -> Multigraph:
    """Inverse of :func:`write_edge_list`; the sidecar is optional."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphError(f"cannot read {path}: {exc}") from exc
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0][:3]] != ["u", "v", "multiplicity"]:
        raise GraphError(f"{path}: expected header u,v,multiplicity")
    nodes: dict[str, dict] = {}
    side = _sidecar(path)
    if side.exists():
        srows = list(csv.reader(io.StringIO(side.read_text(encoding="utf-8"))))
        keys = srows[0][1:]
        for r in srows[1:]:
            if r:
                nodes[r[0]] = {k: v for k, v in zip(keys, r[1:]) if v != ""}
    pairs = []
    for lineno, r in enumerate(rows[1:], start=2):
        if not r:
            continue
        if len(r) != 3:
            raise GraphError(f"{path}:{lineno}: expected 3 fields")
        try:
            m = int(r[2])
        except ValueError:
            raise GraphError(f"{path}:{lineno}: bad multiplicity {r[2]!r}") from None
        nodes.setdefault(r[0], {})
        nodes.setdefault(r[1], {})
        pairs.append((r[0], r[1], m))
    return from_edge_list(nodes, pairs)
