"""Per-node centralities, k-cores and random-walk (current-flow) measures.

All functions read the simple view of a :class:`~coauthnet.graph.Multigraph`
and return plain ``{node: value}`` mappings unless noted otherwise.
"""

from __future__ import annotations

import heapq
import io
import logging
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np
import pandas as pd
from scipy import sparse

from .exceptions import ConvergenceError, GraphError
from .graph import Multigraph, connected_components, induced_subgraph

logger = logging.getLogger(__name__)

LABEL_COLUMNS = ("name", "gender", "affiliation")
METRIC_COLUMNS = (
    "degree",
    "degree_norm",
    "betweenness",
    "betweenness_norm",
    "closeness",
    "eigenvector",
    "pagerank",
    "clustering",
    "coreness",
)
RW_COLUMNS = ("rw_betweenness", "rw_closeness")


# ---------------------------------------------------------------------------
# Degree
# ---------------------------------------------------------------------------


class DegreeScore(NamedTuple):
    count: int
    normalized: float


def degree(graph: Multigraph) -> dict[str, DegreeScore]:
    """Distinct-neighbour count and its ``/(g - 1)`` normalization (0 when g < 2)."""
    g = graph.g
    return {
        n: DegreeScore(len(graph.neighbors(n)), len(graph.neighbors(n)) / (g - 1) if g > 1 else 0.0)
        for n in graph.nodes
    }


# ---------------------------------------------------------------------------
# Shortest-path betweenness
# ---------------------------------------------------------------------------


class BetweennessScore(NamedTuple):
    pair_sum: float  # sum over unordered pairs {j, k} not containing i
    paper_raw: float  # 2 * pair_sum, the ordered-pair convention
    normalized: float  # 2 * pair_sum / ((g - 1)(g - 2)); 0 when g < 3


def _brandes_pair_sums(adj: list[list[int]]) -> list[float]:
    n = len(adj)
    cb = [0.0] * n
    for s in range(n):
        order = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        dist = [-1] * n
        sigma[s] = 1
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            dv = dist[v] + 1
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dv
                    queue.append(w)
                if dist[w] == dv:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while order:
            w = order.pop()
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                cb[w] += delta[w]
    # every unordered pair was visited from both ends
    return [x / 2.0 for x in cb]


def betweenness(graph: Multigraph) -> dict[str, BetweennessScore]:
    """Shortest-path betweenness by dependency accumulation over BFS trees."""
    g = graph.g
    sums = _brandes_pair_sums(graph.index_adjacency())
    denom = (g - 1) * (g - 2)
    return {
        n: BetweennessScore(s, 2.0 * s, 2.0 * s / denom if denom > 0 else 0.0)
        for n, s in zip(graph.nodes, sums)
    }


@dataclass(frozen=True)
class ShortestPathTally:
    """Explicit geodesic counts, for cross-checking on small graphs.

    ``sigma[(j, k)]`` is the number of geodesics between ``j < k`` and
    ``through[(i, j, k)]`` how many of them pass through ``i``.
    """

    sigma: dict
    through: dict

    def pair_sums(self, nodes) -> dict[str, float]:
        out = dict.fromkeys(nodes, 0.0)
        for (i, j, k), c in self.through.items():
            out[i] += c / self.sigma[(j, k)]
        return out


def enumerate_geodesics(graph: Multigraph) -> ShortestPathTally:
    """Enumerate every shortest path explicitly (exponential; small graphs only)."""
    sigma: dict = {}
    through: dict = {}
    for j, k in combinations(graph.nodes, 2):
        paths = []
        best = None
        stack = [(j, (j,))]
        # depth-first over simple paths with a length bound that tightens
        while stack:
            node, path = stack.pop()
            if best is not None and len(path) - 1 > best:
                continue
            if node == k:
                if best is None or len(path) - 1 < best:
                    best = len(path) - 1
                    paths = [path]
                elif len(path) - 1 == best:
                    paths.append(path)
                continue
            for w in graph.neighbors(node):
                if w not in path:
                    stack.append((w, path + (w,)))
        if not paths:
            continue
        sigma[(j, k)] = len(paths)
        for p in paths:
            for i in p[1:-1]:
                through[(i, j, k)] = through.get((i, j, k), 0) + 1
    return ShortestPathTally(sigma, through)


# ---------------------------------------------------------------------------
# Closeness
# ---------------------------------------------------------------------------


def closeness(graph: Multigraph) -> dict[str, float]:
    """``1 / sum of distances to reachable nodes``; isolated nodes score 0."""
    adj = graph.index_adjacency()
    n = len(adj)
    out = {}
    for s, node in enumerate(graph.nodes):
        dist = [-1] * n
        dist[s] = 0
        total = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    total += dist[w]
                    queue.append(w)
        out[node] = 1.0 / total if total else 0.0
    return out


# ---------------------------------------------------------------------------
# Spectral measures
# ---------------------------------------------------------------------------


def _sparse_adjacency(graph: Multigraph, nodes=None) -> sparse.csr_matrix:
    order = graph.nodes if nodes is None else nodes
    pos = {n: i for i, n in enumerate(order)}
    rows, cols = [], []
    for u, v in graph.simple_edges():
        if u in pos and v in pos:
            rows += [pos[u], pos[v]]
            cols += [pos[v], pos[u]]
    n = len(order)
    return sparse.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))


def eigenvector(graph: Multigraph, tol: float = 1e-10, max_iter: int = 100_000) -> dict[str, float]:
    """Leading adjacency eigenvector of the largest component, summing to 1.

    Power iteration runs on ``A + I``: the shift keeps the same eigenvectors but
    makes the Perron root strictly dominant, so bipartite components converge.
    Nodes outside the largest component get 0.
    """
    comps = connected_components(graph)
    if not len(comps) or len(comps.components[0]) < 2:
        raise GraphError("eigenvector centrality needs at least one edge")
    members = tuple(sorted(comps.components[0]))
    a = _sparse_adjacency(graph, members)
    shifted = a + sparse.identity(len(members), format="csr")
    x = np.full(len(members), 1.0 / len(members))
    for it in range(1, max_iter + 1):
        y = shifted @ x
        y /= y.sum()
        if np.abs(y - x).sum() < tol:
            x = y
            break
        x = y
    else:
        raise ConvergenceError("eigenvector power iteration did not converge", max_iter)
    out = dict.fromkeys(graph.nodes, 0.0)
    out.update(zip(members, x.tolist()))
    return out


def pagerank(
    graph: Multigraph, damping: float = 0.85, tol: float = 1e-10, max_iter: int = 100_000
) -> dict[str, float]:
    """Damped random-surfer scores on the simple graph, scaled to mean 1.

    Undirected edges are reciprocal links.  Isolated (dangling) nodes spread
    their mass uniformly, like a teleport, so they only ever receive the
    uniform share.
    """
    n = graph.g
    if n == 0:
        return {}
    a = _sparse_adjacency(graph)
    deg = np.asarray(a.sum(axis=1)).ravel()
    dangling = deg == 0
    inv = np.divide(1.0, deg, out=np.zeros(n), where=~dangling)
    x = np.full(n, 1.0 / n)
    for it in range(1, max_iter + 1):
        y = damping * (a @ (x * inv)) + (damping * x[dangling].sum() + 1.0 - damping) / n
        y /= y.sum()
        if np.abs(y - x).sum() < tol:
            x = y
            break
        x = y
    else:
        raise ConvergenceError("pagerank did not converge", max_iter)
    return dict(zip(graph.nodes, (x * n).tolist()))


# ---------------------------------------------------------------------------
# Local structure
# ---------------------------------------------------------------------------


def clustering_coefficient(graph: Multigraph) -> dict[str, float]:
    nbrs = {n: set(graph.neighbors(n)) for n in graph.nodes}
    out = {}
    for n in graph.nodes:
        k = len(nbrs[n])
        if k < 2:
            out[n] = 0.0
            continue
        links = sum(len(nbrs[u] & nbrs[n]) for u in nbrs[n]) / 2
        out[n] = links / (k * (k - 1) / 2)
    return out


@dataclass(frozen=True)
class KCoreResult:
    """Coreness per node plus the connected k-cores for each k >= 1."""

    coreness: dict
    cores: dict  # k -> tuple of frozensets (connected components of the k-core)

    @property
    def max_k(self) -> int:
        return max(self.coreness.values(), default=0)

    def core(self, k: int) -> tuple[frozenset, ...]:
        return self.cores.get(k, ())

    def max_core(self) -> tuple[frozenset, ...]:
        return self.core(self.max_k)


def coreness(graph: Multigraph) -> dict[str, int]:
    """Coreness by repeated removal of a minimum-degree node."""
    deg = {n: len(graph.neighbors(n)) for n in graph.nodes}
    heap = [(d, n) for n, d in deg.items()]
    heapq.heapify(heap)
    removed: set = set()
    out = {}
    k = 0
    while heap:
        d, v = heapq.heappop(heap)
        if v in removed or d != deg[v]:
            continue
        k = max(k, d)
        out[v] = k
        removed.add(v)
        for w in graph.neighbors(v):
            if w not in removed:
                deg[w] -= 1
                heapq.heappush(heap, (deg[w], w))
    return {n: out[n] for n in graph.nodes}


def kcore(graph: Multigraph) -> KCoreResult:
    core = coreness(graph)
    cores = {}
    for k in range(1, max(core.values(), default=0) + 1):
        sub = induced_subgraph(graph, [n for n, c in core.items() if c >= k])
        cores[k] = connected_components(sub).components
    return KCoreResult(core, cores)


# ---------------------------------------------------------------------------
# Random-walk (current-flow) measures
# ---------------------------------------------------------------------------


def _laplacian(graph: Multigraph, members) -> np.ndarray:
    a = graph.adjacency_matrix(members)
    return np.diag(a.sum(axis=1)) - a


def _log_dropped_loops(graph: Multigraph):
    loops = graph.loops()
    if loops:
        logger.info("random-walk measures: %d self-loops dropped from the Laplacian", len(loops))


def rw_betweenness(graph: Multigraph, normalized: bool = False) -> dict[str, float]:
    """Current-flow (random-walk) betweenness.

    For every source/sink pair ``{s, t}`` of a component a unit current is
    injected at ``s`` and withdrawn at ``t``; a node's throughput is half the
    absolute current on its incident edges.  The raw score sums throughput over
    pairs not containing the node, which equals shortest-path betweenness on
    trees.  ``normalized=True`` gives the pair average with endpoints counted
    as 1 (range [0, 1] up to rounding).
    """
    _log_dropped_loops(graph)
    out = dict.fromkeys(graph.nodes, 0.0)
    for comp in connected_components(graph):
        n = len(comp)
        if n < 3:
            continue
        members = tuple(sorted(comp))
        lap = _laplacian(graph, members)
        grounded = np.zeros((n, n))
        grounded[:-1, :-1] = np.linalg.inv(lap[:-1, :-1])
        pos = {v: i for i, v in enumerate(members)}
        edges = [(pos[u], pos[v]) for u, v in graph.simple_edges() if u in pos]
        head = np.array([e[0] for e in edges])
        tail = np.array([e[1] for e in edges])
        m = len(edges)
        incidence = sparse.csr_matrix(
            (np.ones(2 * m), (np.r_[head, tail], np.r_[np.arange(m), np.arange(m)])), shape=(n, m)
        )
        score = np.zeros(n)
        for s in range(n - 1):
            # column t holds node potentials for unit current s -> t
            pot = grounded[:, [s]] - grounded[:, s + 1:]
            flow = np.abs(pot[head] - pot[tail])
            thru = 0.5 * (incidence @ flow)
            thru[s, :] = 0.0
            thru[np.arange(s + 1, n), np.arange(n - s - 1)] = 0.0
            score += thru.sum(axis=1)
        if normalized:
            score = (score + (n - 1)) / (n * (n - 1) / 2)
        out.update(zip(members, score.tolist()))
    return out


def hitting_times(graph: Multigraph, members) -> np.ndarray:
    """Mean first-passage times ``H[i, j]`` (walker from i reaching j) on a connected node set."""
    lap = _laplacian(graph, members)
    deg = np.diag(lap).copy()
    pinv = np.linalg.pinv(lap)
    u = pinv @ deg
    vol = deg.sum()
    h = u[:, None] - u[None, :] - vol * (pinv - np.diag(pinv)[None, :])
    np.fill_diagonal(h, 0.0)
    return h


def rw_closeness(graph: Multigraph) -> dict[str, float]:
    """Reciprocal of the mean hitting time from the rest of the component to each node."""
    _log_dropped_loops(graph)
    out = dict.fromkeys(graph.nodes, 0.0)
    for comp in connected_components(graph):
        n = len(comp)
        if n < 2:
            continue
        members = tuple(sorted(comp))
        h = hitting_times(graph, members)
        mean_in = h.sum(axis=0) / (n - 1)
        out.update(zip(members, (1.0 / mean_in).tolist()))
    return out


# ---------------------------------------------------------------------------
# Frame
# ---------------------------------------------------------------------------


def metric_frame(graph: Multigraph, include_rw: bool = False, damping: float = 0.85) -> pd.DataFrame:
    """All per-node measures in one table indexed by node id.

    Label columns (name, gender, affiliation) come first, then the metric
    columns in :data:`METRIC_COLUMNS` order, then :data:`RW_COLUMNS` when
    requested.  A graph without edges gets an all-zero eigenvector column.
    """
    columns = list(LABEL_COLUMNS) + list(METRIC_COLUMNS) + (list(RW_COLUMNS) if include_rw else [])
    if graph.g == 0:
        frame = pd.DataFrame(columns=columns)
        frame.index.name = "node"
        return frame
    deg = degree(graph)
    btw = betweenness(graph)
    try:
        eig = eigenvector(graph)
    except GraphError:
        eig = dict.fromkeys(graph.nodes, 0.0)
    data = {
        "name": [graph.attr(n, "name") or n for n in graph.nodes],
        "gender": [graph.attr(n, "gender") or "unknown" for n in graph.nodes],
        "affiliation": [graph.attr(n, "affiliation") or "unclassified" for n in graph.nodes],
        "degree": [deg[n].count for n in graph.nodes],
        "degree_norm": [deg[n].normalized for n in graph.nodes],
        "betweenness": [btw[n].pair_sum for n in graph.nodes],
        "betweenness_norm": [btw[n].normalized for n in graph.nodes],
    }
    for col, values in (
        ("closeness", closeness(graph)),
        ("eigenvector", eig),
        ("pagerank", pagerank(graph, damping=damping)),
        ("clustering", clustering_coefficient(graph)),
        ("coreness", coreness(graph)),
    ):
        data[col] = [values[n] for n in graph.nodes]
    if include_rw:
        data["rw_betweenness"] = list(rw_betweenness(graph).values())
        data["rw_closeness"] = list(rw_closeness(graph).values())
    frame = pd.DataFrame(data, index=pd.Index(graph.nodes, name="node"), columns=columns)
    return frame


def display_scaled(frame: pd.DataFrame) -> pd.DataFrame:
    """Copy with the published display scalings: eigenvector x100, betweenness x2."""
    out = frame.copy()
    if "eigenvector" in out:
        out["eigenvector"] = out["eigenvector"] * 100.0
    if "betweenness" in out:
        out["betweenness"] = out["betweenness"] * 2.0
    return out


def dumps_frame(frame: pd.DataFrame, sep: str = "\t") -> str:
    """Delimited text, one row per node, fixed column order, 6 significant digits."""
    lines = [sep.join(["node", *map(str, frame.columns)])]
    for node, row in frame.iterrows():
        cells = [str(node)]
        for col in frame.columns:
            v = row[col]
            if isinstance(v, (float, np.floating)):
                cells.append("-" if np.isnan(v) else f"{v:.6g}")
            else:
                cells.append(str(v))
        lines.append(sep.join(cells))
    return "\n".join(lines) + "\n"


def loads_frame(text: str, sep: str = "\t") -> pd.DataFrame:
    frame = pd.read_csv(
        io.StringIO(text), sep=sep, index_col="node", dtype={c: str for c in LABEL_COLUMNS},
        na_values=["-"], keep_default_na=False,
    )
    frame.index = frame.index.astype(str)
    return frame
