import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coauthnet.datasets import jel_like_corpus, component_benchmark_corpus
from coauthnet.build import build_coauthor, build_jel
from coauthnet.exceptions import GraphError
from coauthnet.graph import (
    Multigraph,
    component_metrics_table,
    connected_components,
    density,
    distance,
    edge_counts,
    from_edge_list,
    geodesic_stats,
    induced_subgraph,
    read_edge_list,
    write_edge_list,
)

from conftest import complete, cycle, make_graph, path, random_graph
from oracles import adjacency, floyd_warshall


# -- construction and edge bookkeeping ----------------------------------------


def test_single_edge():
    c = edge_counts(from_edge_list(["a", "b"], [("a", "b")]))
    assert (c.UE, c.EwD, c.TE, c.SL) == (1, 0, 1, 0)


def test_triple_edge():
    c = edge_counts(from_edge_list(["a", "b"], [("a", "b", 3)]))
    assert (c.UE, c.EwD, c.TE) == (1, 2, 3)


def test_loop_only():
    c = edge_counts(from_edge_list(["a"], [("a", "a")]))
    assert (c.UE, c.SL, c.TE, c.EwD) == (0, 1, 1, 0)
    assert c.UE_with_loops == 1


def test_reversed_pairs_merge():
    g = from_edge_list(["a", "b"], [("a", "b"), ("b", "a", 2)])
    assert g.edges == {("a", "b"): 3}


def test_unknown_endpoint():
    with pytest.raises(GraphError, match="not a declared node"):
        from_edge_list(["a"], [("a", "b")])


def test_bad_multiplicity():
    with pytest.raises(GraphError):
        Multigraph(["a", "b"], {("a", "b"): 0})


def test_empty_graph_counts():
    g = Multigraph()
    assert tuple(edge_counts(g)) == (0, 0, 0, 0)
    assert len(connected_components(g)) == 0
    assert density(g) is None
    assert geodesic_stats(g).AGD is None


def test_benchmark_g1_bookkeeping():
    g = build_coauthor(component_benchmark_corpus())
    giant = induced_subgraph(g, connected_components(g).components[0])
    c = edge_counts(giant)
    assert (giant.g, c.UE, c.EwD, c.TE) == (850, 1442, 167, 1609)
    total = edge_counts(g)
    assert (g.g, total.UE, total.TE) == (890, 1477, 1644)
    rows = component_metrics_table(g)
    assert sum(r.UE for r in rows) == 1477
    assert sum(r.TE for r in rows) == 1644


# -- components ---------------------------------------------------------------


def test_triangle_plus_isolate():
    g = make_graph([("a", "b"), ("b", "c"), ("a", "c")], ["a", "b", "c", "d"])
    assert connected_components(g).sizes == [3, 1]


def test_benchmark_components():
    comps = connected_components(build_coauthor(component_benchmark_corpus()))
    assert len(comps) == 17
    assert comps.sizes == [850, 5] + [3] * 5 + [2] * 10
    assert comps.labels[0] == "G1" and comps.labels[-1] == "G17"


def test_component_tie_break_by_smallest_id():
    g = make_graph([("x", "y"), ("a", "b"), ("m", "n")])
    assert [min(c) for c in connected_components(g)] == ["a", "m", "x"]


# -- geodesics ----------------------------------------------------------------


def test_k5_geodesics():
    s = geodesic_stats(complete(5))
    assert s.MGD == 1
    assert round(s.AGD, 3) == 0.8


def test_triangle_and_dyad_agd():
    assert round(geodesic_stats(complete(3)).AGD, 3) == 0.667
    assert geodesic_stats(complete(2)).AGD == 0.5


@pytest.mark.parametrize("n", range(2, 12))
def test_agd_complete_closed_form(n):
    assert geodesic_stats(complete(n)).AGD == pytest.approx((n - 1) / n, abs=1e-15)


def test_agd_counts_self_pairs():
    s = geodesic_stats(path(3))
    # ordered finite pairs: 9; distance sum: 2*(1+1+2) = 8
    assert s.finite_pair_count == 9
    assert s.AGD == pytest.approx(8 / 9)
    assert s.MGD == 2


def test_distance_cases():
    g = make_graph([("a", "b"), ("b", "c"), ("x", "y")])
    assert distance(g, "a", "b") == 1
    assert distance(g, "a", "c") == 2
    assert distance(g, "a", "x") is None
    assert distance(g, "a", "a") == 0
    with pytest.raises(GraphError):
        distance(g, "a", "zz")


def test_loops_and_multiplicity_ignored_by_distances():
    g = from_edge_list(["a", "b", "c"], [("a", "b", 4), ("b", "c"), ("c", "c", 2)])
    assert geodesic_stats(g) == geodesic_stats(Multigraph(["a", "b", "c"], {("a", "b"): 1, ("b", "c"): 1}))


# -- density ------------------------------------------------------------------


def test_density_k5():
    assert density(complete(5)) == 1.0


def test_density_benchmark_giant():
    assert round(2 * 1442 / (850 * 849), 3) == 0.004
    g = build_coauthor(component_benchmark_corpus())
    giant = induced_subgraph(g, connected_components(g).components[0])
    assert round(density(giant), 3) == 0.004


def test_density_jel_fixture():
    g = build_jel(jel_like_corpus())
    c = edge_counts(g)
    assert (g.g, c.UE, c.SL) == (109, 417, 34)
    assert round(density(g), 3) == 0.071
    # counting the loops as unique links would give 0.077, not the published value
    assert round(2 * c.UE_with_loops / (109 * 108), 3) == 0.077


def test_density_edgeless_and_small():
    assert density(Multigraph(["a", "b", "c"])) == 0.0
    assert density(Multigraph(["a"])) is None


def test_density_excludes_loops():
    g = from_edge_list(["a", "b"], [("a", "a", 5), ("a", "b")])
    assert density(g) == 1.0


# -- induced subgraph ---------------------------------------------------------


def test_induced_k5_to_triangle():
    sub = induced_subgraph(complete(5), ["k0", "k2", "k4"])
    assert sub.g == 3 and edge_counts(sub).UE == 3


def test_induced_empty():
    sub = induced_subgraph(complete(5), [])
    assert sub.g == 0 and edge_counts(sub).TE == 0


def test_induced_keeps_multiplicity_and_loops():
    g = from_edge_list(["a", "b", "c"], [("a", "b", 2), ("a", "a", 3), ("b", "c")])
    sub = induced_subgraph(g, ["a", "b"])
    assert sub.edges == {("a", "a"): 3, ("a", "b"): 2}


def test_induced_unknown_node():
    with pytest.raises(GraphError):
        induced_subgraph(complete(3), ["nope"])


def test_induced_gender_filter_fixture():
    genders = {"f1": "female", "f2": "female", "f3": "female", "m1": "male", "m2": "male", "m3": "male"}
    nodes = {n: {"gender": gd} for n, gd in genders.items()}
    edges = {("f1", "f2"): 1, ("f2", "f3"): 2, ("f1", "m1"): 1, ("m1", "m2"): 1, ("f3", "m3"): 1}
    g = Multigraph(nodes, edges)
    sub = induced_subgraph(g, [n for n in g.nodes if g.attr(n, "gender") == "female"])
    assert sub.edges == {("f1", "f2"): 1, ("f2", "f3"): 2}


# -- component table ----------------------------------------------------------


def _row(r):
    return (r.N, r.UE, r.EwD, r.TE, r.MGD, r.AGD if r.AGD is None else round(r.AGD, 3), r.D)


def test_component_rows_conventions():
    g = make_graph(
        [(f"k{i}", f"k{j}") for i, j in combinations(range(5), 2)] + [("d0", "d1")],
        [*(f"k{i}" for i in range(5)), "d0", "d1", "iso"],
    )
    rows = component_metrics_table(g)
    assert [r.label for r in rows] == ["G1", "G2", "G3"]
    assert _row(rows[0]) == (5, 10, 0, 10, 1, 0.8, 1.0)
    assert _row(rows[1]) == (2, 1, 0, 1, 1, 0.5, 1.0)
    assert _row(rows[2]) == (1, 0, 0, 0, 0, None, None)


def test_benchmark_component_rows():
    rows = component_metrics_table(build_coauthor(component_benchmark_corpus()))
    g1 = rows[0]
    assert (g1.N, g1.UE, g1.EwD, g1.TE, g1.MGD) == (850, 1442, 167, 1609, 20)
    assert g1.AGD > math.log(850)
    assert _row(rows[1]) == (5, 10, 0, 10, 1, 0.8, 1.0)
    assert all(_row(r) == (3, 3, 0, 3, 1, 0.667, 1.0) for r in rows[2:7])
    assert all(_row(r) == (2, 1, 0, 1, 1, 0.5, 1.0) for r in rows[7:])


# -- edge-list exchange -------------------------------------------------------


def test_edge_list_round_trip(tmp_path):
    g = Multigraph(
        {"a": {"gender": "female"}, "b": {"gender": "male"}, "c": {}, "iso": {"affiliation": "UNS"}},
        {("a", "b"): 2, ("b", "c"): 1, ("c", "c"): 3},
    )
    p = write_edge_list(g, tmp_path / "g.edges")
    back = read_edge_list(p)
    assert back.nodes == g.nodes
    assert back.edges == g.edges
    assert edge_counts(back) == edge_counts(g)
    assert back.node_attrs("a") == {"gender": "female"}
    assert back.node_attrs("iso") == {"affiliation": "UNS"}


def test_edge_list_errors(tmp_path):
    p = tmp_path / "bad.edges"
    p.write_text("x,y\n")
    with pytest.raises(GraphError, match="header"):
        read_edge_list(p)
    p.write_text("u,v,multiplicity\na,b,two\n")
    with pytest.raises(GraphError, match="multiplicity"):
        read_edge_list(p)
    with pytest.raises(GraphError, match="cannot read"):
        read_edge_list(tmp_path / "missing.edges")


# -- properties ---------------------------------------------------------------


@st.composite
def multigraphs(draw, max_nodes=8):
    n = draw(st.integers(0, max_nodes))
    names = [f"n{i}" for i in range(n)]
    if n == 0:
        return Multigraph()
    pairs = draw(st.lists(
        st.tuples(st.sampled_from(names), st.sampled_from(names), st.integers(1, 3)), max_size=20
    ))
    return from_edge_list(names, pairs)


@settings(max_examples=150, deadline=None)
@given(multigraphs())
def test_property_degree_sum(g):
    c = edge_counts(g)
    assert sum(len(g.neighbors(n)) for n in g.nodes) == 2 * c.UE
    assert c.TE == c.UE + c.EwD + sum(g.loops().values())
    assert min(c) >= 0


@settings(max_examples=150, deadline=None)
@given(multigraphs())
def test_property_components_partition(g):
    comps = connected_components(g)
    seen = [n for comp in comps for n in comp]
    assert sorted(seen) == sorted(g.nodes)
    assert len(seen) == len(set(seen)) == g.g
    assert comps.sizes == sorted(comps.sizes, reverse=True)


@settings(max_examples=100, deadline=None)
@given(multigraphs(max_nodes=7))
def test_property_distance_metric(g):
    a = adjacency(g.nodes, g.simple_edges())
    ref = floyd_warshall(a)
    for i, u in enumerate(g.nodes):
        for j, v in enumerate(g.nodes):
            d = distance(g, u, v)
            assert d == (None if np.isinf(ref[i, j]) else int(ref[i, j]))
            assert d == distance(g, v, u)
    for u, v, w in combinations(g.nodes, 3):
        duv, dvw, duw = distance(g, u, v), distance(g, v, w), distance(g, u, w)
        if duv is not None and dvw is not None:
            assert duw is not None and duw <= duv + dvw


@settings(max_examples=100, deadline=None)
@given(multigraphs(max_nodes=7))
def test_property_geodesic_stats_oracle(g):
    s = geodesic_stats(g)
    ref = floyd_warshall(adjacency(g.nodes, g.simple_edges()))
    finite = ref[np.isfinite(ref)]
    assert s.finite_pair_count == finite.size
    assert s.MGD == (int(finite.max()) if finite.size else 0)
    if edge_counts(g).UE:
        assert s.AGD == pytest.approx(finite.mean())
        assert s.MGD >= s.AGD >= 0
    else:
        assert s.AGD is None


def test_density_bounds(rng):
    for _ in range(50):
        g = random_graph(rng, max_nodes=10)
        d = density(g)
        assert d is None or 0.0 <= d <= 1.0


def test_cycle_geodesics():
    s = geodesic_stats(cycle(6))
    assert s.MGD == 3
    # from each node: 1+1+2+2+3 = 9, over 6 ordered pairs per source
    assert s.AGD == pytest.approx(9 / 6)
