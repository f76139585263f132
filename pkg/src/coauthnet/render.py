"""Text tables, graph exchange formats and static SVG plots."""

from __future__ import annotations

import math
import os
from pathlib import Path
from typing import Mapping, Sequence
from xml.sax.saxutils import escape, quoteattr

import networkx as nx
import numpy as np

from .graph import Multigraph, dumps_edge_list, dumps_node_table
from .stats import DegreeDistribution, ScatterPair

DECIMAL_ENV = "COAUTHNET_DECIMAL"
MARKER = "-"


def use_decimal_comma() -> bool:
    return os.environ.get(DECIMAL_ENV, "").strip().lower() in ("comma", ",")


def format_number(value, decimals: int = 3, comma: bool | None = None) -> str:
    """Render a cell; ``None``/NaN become ``-``, integers stay integral."""
    if comma is None:
        comma = use_decimal_comma()
    if value is None:
        return MARKER
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return MARKER
    text = f"{value:.{decimals}f}"
    if text.startswith("-") and float(text) == 0.0:
        text = text[1:]
    return text.replace(".", ",") if comma else text


def metric_rows(
    rows, columns: Sequence[str], label_header: str = "Group", decimals: Mapping[str, int] | None = None,
    comma: bool | None = None,
) -> tuple[list[str], list[list[str]]]:
    """Header and formatted body for :class:`~coauthnet.graph.ClusterMetricsRow` objects."""
    decimals = {"AGD": 3, "D": 3, **(decimals or {})}
    header = [label_header, *columns]
    body = [
        [r.label, *(format_number(getattr(r, c), decimals.get(c, 3), comma) for c in columns)]
        for r in rows
    ]
    return header, body


def frame_rows(frame, decimals: int = 3, comma: bool | None = None, index_header: str | None = None):
    """Header and formatted body for a pandas frame (index becomes the first column)."""
    header = [index_header or (frame.index.name or ""), *map(str, frame.columns)]
    body = [
        [str(idx), *(format_number(v, decimals, comma) for v in row)]
        for idx, row in zip(frame.index, frame.itertuples(index=False))
    ]
    return header, body


def render_table(rows: Sequence[Sequence], header: Sequence | None = None, fmt: str = "tsv") -> str:
    """Deterministic text rendering of a rectangular table."""
    rows = [[str(c) for c in r] for r in rows]
    width = len(header) if header is not None else (len(rows[0]) if rows else 0)
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ValueError(f"ragged table: row {i} has {len(r)} cells, expected {width}")
    if fmt == "tsv":
        lines = ["\t".join(map(str, header))] if header is not None else []
        lines += ["\t".join(r) for r in rows]
    elif fmt == "markdown":
        head = [str(h) for h in header] if header is not None else [""] * width
        lines = ["| " + " | ".join(head) + " |", "|" + "|".join(["---"] * width) + "|"]
        lines += ["| " + " | ".join(c.replace("|", "\\|") for c in r) + " |" for r in rows]
    else:
        raise ValueError(f"unknown table format {fmt!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Graph export
# ---------------------------------------------------------------------------

EXPORT_FORMATS = ("graphml", "dot", "edge_csv")


def _node_attrs(graph: Multigraph, frame=None) -> dict[str, dict]:
    out = {n: graph.node_attrs(n) for n in graph.nodes}
    if frame is not None:
        numeric = [c for c in frame.columns if c not in ("name", "gender", "affiliation")]
        for n in graph.nodes:
            if n in frame.index:
                for c in numeric:
                    v = frame.at[n, c]
                    out[n][c] = int(v) if isinstance(v, (int, np.integer)) else float(v)
    return out


def to_networkx(graph: Multigraph, frame=None) -> nx.Graph:
    """Simple :class:`networkx.Graph` with multiplicity as ``weight``; loops kept."""
    g = nx.Graph()
    for n, attrs in _node_attrs(graph, frame).items():
        g.add_node(n, **{k: attrs[k] for k in sorted(attrs)})
    for (u, v), m in graph.edges.items():
        g.add_edge(u, v, weight=m)
    return g


def dumps_graphml(graph: Multigraph, frame=None) -> str:
    return "\n".join(nx.generate_graphml(to_networkx(graph, frame))) + "\n"


def _dot_id(text) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def dumps_dot(graph: Multigraph, frame=None) -> str:
    lines = ["graph coauthnet {"]
    for n, attrs in _node_attrs(graph, frame).items():
        parts = [f"{k}={_dot_id(attrs[k])}" for k in sorted(attrs)]
        lines.append(f"  {_dot_id(n)}" + (f" [{', '.join(parts)}]" if parts else "") + ";")
    for (u, v), m in graph.edges.items():
        lines.append(f"  {_dot_id(u)} -- {_dot_id(v)} [weight={m}, penwidth={m}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_graph(graph: Multigraph, fmt: str, path, frame=None) -> Path:
    """Write ``graph`` as GraphML, DOT or the native edge list (+ node sidecar)."""
    path = Path(path)
    if fmt == "graphml":
        text = dumps_graphml(graph, frame)
    elif fmt == "dot":
        text = dumps_dot(graph, frame)
    elif fmt in ("edge_csv", "edges"):
        path.write_text(dumps_edge_list(graph), encoding="utf-8")
        sidecar = path.with_name(path.name + ".nodes.csv")
        g2 = graph if frame is None else graph.with_node_attrs(_node_attrs(graph, frame))
        sidecar.write_text(dumps_node_table(g2), encoding="utf-8")
        return path
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    path.write_text(text, encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# SVG plots
# ---------------------------------------------------------------------------

PLOT_KINDS = ("histogram", "loglog", "scatter_matrix")
_W, _H, _PAD = 480.0, 320.0, 48.0


def _f(x: float) -> str:
    return f"{x:.2f}"


def _scale(values, lo_px, hi_px):
    vals = np.asarray(values, dtype=float)
    lo, hi = float(vals.min()), float(vals.max())
    if hi == lo:
        return np.full(vals.shape, (lo_px + hi_px) / 2), lo, hi
    return lo_px + (vals - lo) / (hi - lo) * (hi_px - lo_px), lo, hi


def _axes(x0, y0, w, h, xlabel, ylabel, xrange=None, yrange=None) -> list[str]:
    out = [
        f'<line class="axis" x1="{_f(x0)}" y1="{_f(y0 + h)}" x2="{_f(x0 + w)}" y2="{_f(y0 + h)}" stroke="black"/>',
        f'<line class="axis" x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x0)}" y2="{_f(y0 + h)}" stroke="black"/>',
        f'<text class="xlabel" x="{_f(x0 + w / 2)}" y="{_f(y0 + h + 30)}" text-anchor="middle" font-size="11">{escape(xlabel)}</text>',
        f'<text class="ylabel" x="{_f(x0 - 34)}" y="{_f(y0 + h / 2)}" text-anchor="middle" font-size="11" '
        f'transform="rotate(-90 {_f(x0 - 34)} {_f(y0 + h / 2)})">{escape(ylabel)}</text>',
    ]
    if xrange is not None:
        out.append(f'<text class="tick" x="{_f(x0)}" y="{_f(y0 + h + 14)}" font-size="9">{xrange[0]:.3g}</text>')
        out.append(f'<text class="tick" x="{_f(x0 + w)}" y="{_f(y0 + h + 14)}" font-size="9" text-anchor="end">{xrange[1]:.3g}</text>')
    if yrange is not None:
        out.append(f'<text class="tick" x="{_f(x0 - 4)}" y="{_f(y0 + h)}" font-size="9" text-anchor="end">{yrange[0]:.3g}</text>')
        out.append(f'<text class="tick" x="{_f(x0 - 4)}" y="{_f(y0 + 8)}" font-size="9" text-anchor="end">{yrange[1]:.3g}</text>')
    return out


def _svg(width, height, body: list[str], title: str) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">'
    )
    return "\n".join([head, f"<title>{escape(title)}</title>",
                      f'<rect x="0" y="0" width="{_f(width)}" height="{_f(height)}" fill="white"/>',
                      *body, "</svg>"]) + "\n"


def _histogram_svg(hist: Mapping[int, int]) -> str:
    items = sorted(hist.items())
    x0, y0, w, h = _PAD, _PAD / 2, _W - 1.5 * _PAD, _H - 1.5 * _PAD - _PAD / 2
    ymax = max(c for _, c in items) or 1
    slot = w / len(items)
    body = _axes(x0, y0, w, h, "degree", "frequency", yrange=(0, ymax))
    for i, (d, c) in enumerate(items):
        bh = c / ymax * h
        body.append(
            f'<rect class="bar" data-degree="{d}" data-count="{c}" x="{_f(x0 + i * slot + slot * 0.1)}" '
            f'y="{_f(y0 + h - bh)}" width="{_f(slot * 0.8)}" height="{_f(bh)}" fill="steelblue"/>'
        )
        body.append(
            f'<text class="tick" x="{_f(x0 + (i + 0.5) * slot)}" y="{_f(y0 + h + 14)}" '
            f'font-size="9" text-anchor="middle">{d}</text>'
        )
    return _svg(_W, _H, body, "Frequency of degrees")


def _points_svg(points: np.ndarray, xlabel: str, ylabel: str, title: str) -> str:
    x0, y0, w, h = _PAD, _PAD / 2, _W - 1.5 * _PAD, _H - 1.5 * _PAD - _PAD / 2
    xs, xlo, xhi = _scale(points[:, 0], x0 + 6, x0 + w - 6)
    ys, ylo, yhi = _scale(points[:, 1], y0 + h - 6, y0 + 6)
    body = _axes(x0, y0, w, h, xlabel, ylabel, (xlo, xhi), (ylo, yhi))
    body += [f'<circle class="point" cx="{_f(x)}" cy="{_f(y)}" r="3" fill="steelblue"/>' for x, y in zip(xs, ys)]
    return _svg(_W, _H, body, title)


def _scatter_matrix_svg(pairs: Sequence[ScatterPair]) -> str:
    cols = list(dict.fromkeys([p.x for p in pairs] + [p.y for p in pairs]))
    k = len(cols)
    cell = 150.0
    size = cell * (k - 1) + _PAD * 2
    body = []
    for p in pairs:
        # lower-triangular layout: row = y column, col = x column
        ci, ri = cols.index(p.x), cols.index(p.y) - 1
        x0, y0 = _PAD + ci * cell + 8, _PAD / 2 + ri * cell + 8
        w = h = cell - 24
        body.append(f'<g class="panel" data-x={quoteattr(p.x)} data-y={quoteattr(p.y)} '
                    f'data-degenerate="{str(p.degenerate).lower()}">')
        body.append(f'<rect x="{_f(x0)}" y="{_f(y0)}" width="{_f(w)}" height="{_f(h)}" fill="none" stroke="black"/>')
        if ri == k - 2:
            body.append(f'<text class="xlabel" x="{_f(x0 + w / 2)}" y="{_f(y0 + h + 14)}" font-size="10" text-anchor="middle">{escape(p.x)}</text>')
        if ci == 0:
            body.append(f'<text class="ylabel" x="{_f(x0 - 6)}" y="{_f(y0 + h / 2)}" font-size="10" text-anchor="end">{escape(p.y)}</text>')
        if len(p.points):
            xs, *_ = _scale(p.points[:, 0], x0 + 4, x0 + w - 4)
            ys, *_ = _scale(p.points[:, 1], y0 + h - 4, y0 + 4)
            body += [f'<circle class="point" cx="{_f(x)}" cy="{_f(y)}" r="2" fill="steelblue"/>' for x, y in zip(xs, ys)]
        body.append("</g>")
    return _svg(size, size, body, "Scatter matrix")


def plot_svg(kind: str, data, path=None) -> str:
    """Render a static, self-contained SVG; optionally write it to ``path``.

    ``data`` is a degree histogram (mapping or :class:`DegreeDistribution`) for
    ``histogram``/``loglog`` and a list of :class:`ScatterPair` for
    ``scatter_matrix``.
    """
    if kind not in PLOT_KINDS:
        raise ValueError(f"unknown plot kind {kind!r}")
    if kind == "scatter_matrix":
        if not data:
            raise ValueError("no data to plot")
        text = _scatter_matrix_svg(list(data))
    else:
        hist = data.histogram if isinstance(data, DegreeDistribution) else dict(data)
        if kind == "histogram":
            if not hist:
                raise ValueError("no data to plot")
            text = _histogram_svg(hist)
        else:
            pts = np.array([(math.log(d), math.log(c)) for d, c in sorted(hist.items()) if d >= 1 and c >= 1])
            if pts.size == 0:
                raise ValueError("no data to plot")
            text = _points_svg(pts, "ln degree", "ln frequency", "Log-log degree distribution")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
