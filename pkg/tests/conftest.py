from pathlib import Path

import numpy as np
import pytest

from coauthnet import from_edge_list

FIXTURES = Path(__file__).parent / "fixtures"

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def make_graph(edges, nodes=None):
    """Multigraph from ``(u, v)`` / ``(u, v, m)`` tuples; nodes default to endpoints."""
    if nodes is None:
        nodes = sorted({str(x) for e in edges for x in e[:2]})
    return from_edge_list(nodes, edges)


def complete(n, prefix="k"):
    names = [f"{prefix}{i}" for i in range(n)]
    return make_graph([(a, b) for i, a in enumerate(names) for b in names[i + 1:]], names)


def path(n, prefix="p"):
    names = [f"{prefix}{i}" for i in range(n)]
    return make_graph(list(zip(names, names[1:])), names)


def star(leaves):
    return make_graph([("c", f"l{i}") for i in range(leaves)])


def cycle(n):
    names = [f"c{i}" for i in range(n)]
    return make_graph([(names[i], names[(i + 1) % n]) for i in range(n)], names)


def random_graph(rng: np.random.Generator, max_nodes=8, p=None):
    n = int(rng.integers(1, max_nodes + 1))
    p = rng.uniform(0.15, 0.8) if p is None else p
    names = [f"v{i}" for i in range(n)]
    edges = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return make_graph(edges, names)


def random_tree(rng: np.random.Generator, n):
    names = [f"t{i:02d}" for i in range(n)]
    edges = [(names[i], names[int(rng.integers(0, i))]) for i in range(1, n)]
    return make_graph(edges, names)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
