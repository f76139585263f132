"""Distributional and comparative statistics over graphs and metric frames."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np
import pandas as pd

from .graph import Multigraph, connected_components, edge_counts, geodesic_stats, induced_subgraph


@dataclass(frozen=True)
class DegreeDistribution:
    histogram: dict  # degree -> node count, degree 0 included
    loglog_points: tuple  # (ln degree, ln count) for degree >= 1

    @property
    def total(self) -> int:
        return sum(self.histogram.values())


def degree_distribution(graph: Multigraph) -> DegreeDistribution:
    counts = Counter(len(graph.neighbors(n)) for n in graph.nodes)
    hist = dict(sorted(counts.items()))
    pts = tuple((math.log(d), math.log(c)) for d, c in hist.items() if d >= 1 and c >= 1)
    return DegreeDistribution(hist, pts)


def tail_mass(values, q: float = 95.0) -> float:
    """Share of the total held by entries strictly above the ``q``-th percentile."""
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0 or arr.sum() == 0:
        return 0.0
    cut = np.percentile(arr, q)
    return float(arr[arr > cut].sum() / arr.sum())


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    mask = ~(np.isnan(x) | np.isnan(y))
    x, y = x[mask], y[mask]
    if x.size < 2:
        return float("nan")
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    if sxx == 0.0 or syy == 0.0:
        return float("nan")
    r = float(xc @ yc) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def correlation_matrix(frame: pd.DataFrame, columns: Sequence[str] | None = None) -> pd.DataFrame:
    """Pairwise Pearson correlations.

    Rows with a missing value in either column are skipped per pair.  A column
    with zero variance yields NaN for its whole row and column (diagonal too),
    rendered as ``-``.
    """
    if columns is None:
        columns = [c for c in frame.columns if pd.api.types.is_numeric_dtype(frame[c])]
    columns = list(columns)
    data = {c: pd.to_numeric(frame[c], errors="coerce").to_numpy(dtype=float) for c in columns}
    out = pd.DataFrame(np.nan, index=columns, columns=columns)
    for a in columns:
        x = data[a][~np.isnan(data[a])]
        if x.size >= 2 and np.ptp(x) > 0:
            out.loc[a, a] = 1.0
    for a, b in combinations(columns, 2):
        r = _pearson(data[a], data[b])
        out.loc[a, b] = out.loc[b, a] = r
    return out


def rows_frame(rows) -> pd.DataFrame:
    """Turn :class:`~coauthnet.graph.ClusterMetricsRow` objects into a frame (``None`` -> NaN)."""
    frame = pd.DataFrame([r.as_dict() for r in rows]).set_index("label")
    return frame.astype(float)


@dataclass(frozen=True)
class GroupDeviationRow:
    group: str
    size: int
    deviation: dict  # metric -> percent deviation of the group mean (NaN when undefined)


def group_mean_deviation(
    frame: pd.DataFrame,
    partition: Mapping[str, str],
    metrics: Sequence[str],
    classes: Sequence[str] | None = None,
) -> list[GroupDeviationRow]:
    """Relative deviation (percent) of each group's mean from the pooled mean.

    The pooled mean is taken over the union of ``classes`` only (all partition
    labels when omitted), so unannotated nodes do not dilute it.
    """
    labels = pd.Series({n: partition.get(n) for n in frame.index}, dtype=object)
    if classes is None:
        classes = sorted({v for v in labels if v is not None})
    classes = list(classes)
    in_scope = labels.isin(classes)
    pooled = frame.loc[in_scope.to_numpy(), list(metrics)].astype(float)
    overall = pooled.mean()
    rows = []
    for cls in classes:
        mask = (labels == cls).to_numpy()
        if not mask.any():
            raise ValueError(f"empty partition class {cls!r}")
        group_mean = frame.loc[mask, list(metrics)].astype(float).mean()
        dev = {}
        for m in metrics:
            base = overall[m]
            dev[m] = float("nan") if base == 0 else 100.0 * (group_mean[m] - base) / base
        rows.append(GroupDeviationRow(cls, int(mask.sum()), dev))
    return rows


def weighted_identity(rows: Sequence[GroupDeviationRow], metric: str) -> float:
    """``sum(share * (1 + dev))``; equals 1 whenever deviations are exact."""
    total = sum(r.size for r in rows)
    return sum(r.size / total * (1.0 + r.deviation[metric] / 100.0) for r in rows)


@dataclass(frozen=True)
class SmallWorldReport:
    g: int
    ln_g: float | None
    giant_size: int
    ln_giant: float | None
    giant_share_nodes: float
    giant_share_edges: float
    AGD_giant: float | None
    MGD_giant: int
    verdict_text: str


def small_world_report(graph: Multigraph) -> SmallWorldReport:
    """Giant-component shares and the ln(g) versus average-distance comparison."""
    g = graph.g
    comps = connected_components(graph)
    if g == 0:
        return SmallWorldReport(0, None, 0, None, 0.0, 0.0, None, 0, "empty graph")
    giant = induced_subgraph(graph, comps.components[0])
    te_all = edge_counts(graph).TE
    te_giant = edge_counts(giant).TE
    geo = geodesic_stats(giant)
    ln_g = math.log(g)
    ln_giant = math.log(giant.g)
    if geo.AGD is None:
        verdict = "giant component has no edges; average distance undefined"
    else:
        verdict = (
            f"AGD(giant)={geo.AGD:.3f}; ln(g)={ln_g:.3f} (ratio {geo.AGD / ln_g:.2f}); "
            f"ln(giant)={ln_giant:.3f} (ratio {geo.AGD / ln_giant if ln_giant else float('nan'):.2f})"
        )
    return SmallWorldReport(
        g=g,
        ln_g=ln_g,
        giant_size=giant.g,
        ln_giant=ln_giant,
        giant_share_nodes=giant.g / g,
        giant_share_edges=te_giant / te_all if te_all else 0.0,
        AGD_giant=geo.AGD,
        MGD_giant=geo.MGD,
        verdict_text=verdict,
    )


def top_k(
    frame: pd.DataFrame,
    metric: str,
    k: int,
    group_filter: tuple[str, str] | Mapping[str, str] | None = None,
) -> pd.DataFrame:
    """Highest ``k`` rows by ``metric``; ties go to the alphabetically first name."""
    if metric not in frame.columns:
        raise KeyError(f"unknown metric {metric!r}")
    if k < 1:
        raise ValueError("k must be >= 1")
    view = frame
    if group_filter:
        items = group_filter.items() if isinstance(group_filter, Mapping) else [group_filter]
        for col, value in items:
            view = view[view[col] == value]
    names = view["name"] if "name" in view else pd.Series(view.index, index=view.index)
    ranked = view.assign(_name=names.astype(str)).sort_values(
        [metric, "_name"], ascending=[False, True], kind="mergesort"
    )
    cols = ["name", "degree", metric, "affiliation"]
    cols = list(dict.fromkeys(c for c in cols if c in ranked.columns))
    return ranked.head(k)[cols]


@dataclass(frozen=True)
class ScatterPair:
    x: str
    y: str
    points: np.ndarray  # shape (n, 2)
    degenerate: bool  # an axis has zero spread


def scatter_matrix_data(frame: pd.DataFrame, columns: Sequence[str]) -> list[ScatterPair]:
    columns = list(columns)
    if len(columns) < 2:
        raise ValueError("scatter matrix needs at least two columns")
    out = []
    for a, b in combinations(columns, 2):
        pts = frame[[a, b]].to_numpy(dtype=float)
        flat = bool(pts.size == 0 or np.ptp(pts[:, 0]) == 0 or np.ptp(pts[:, 1]) == 0)
        out.append(ScatterPair(a, b, pts, flat))
    return out
