"""Input checks shared by the estimator wrappers and the CLI."""

from __future__ import annotations

from typing import Sequence

import pandas as pd

from .corpus import Corpus
from .graph import Multigraph


def check_graph(graph, min_nodes: int = 0) -> Multigraph:
    if not isinstance(graph, Multigraph):
        raise TypeError(f"expected a Multigraph, got {type(graph).__name__}")
    if graph.g < min_nodes:
        raise ValueError(f"graph has {graph.g} nodes; at least {min_nodes} required")
    return graph


def check_corpus(corpus) -> Corpus:
    if not isinstance(corpus, Corpus):
        raise TypeError(f"expected a Corpus, got {type(corpus).__name__}")
    return corpus


def check_frame(frame, columns: Sequence[str] = (), min_rows: int = 0) -> pd.DataFrame:
    if not isinstance(frame, pd.DataFrame):
        raise TypeError(f"expected a DataFrame, got {type(frame).__name__}")
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise KeyError(f"frame lacks column(s): {', '.join(missing)}")
    for c in columns:
        if not pd.api.types.is_numeric_dtype(frame[c]):
            raise TypeError(f"column {c!r} is not numeric")
    if len(frame) < min_rows:
        raise ValueError(f"frame has {len(frame)} rows; at least {min_rows} required")
    return frame


def check_year_range(year_range) -> tuple[int, int] | None:
    if year_range is None:
        return None
    lo, hi = (int(v) for v in year_range)
    if lo > hi:
        raise ValueError(f"invalid year range {lo}:{hi}")
    return lo, hi
