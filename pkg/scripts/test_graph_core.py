"""Test graph families, products, distances and the edge-list format."""
import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eldb_core.corpus import get_all_corpus_keys, get_corpus_graph, resolve_graph
from eldb_core.exceptions import (
    ConnectivityError,
    DuplicateEdgeError,
    EdgeCountError,
    InvalidParameterError,
    MalformedLineError,
    SelfLoopError,
    VertexRangeError,
)
from eldb_core.graph_core import (
    all_pairs_distances,
    ball,
    build_tk,
    generate,
    graph_from_edges,
    parse_graph,
    product,
    serialize_graph,
    subdivided_star,
)
from harness import run_tests


def test_families():
    path = generate("path", 5)
    assert path.vertex_count == 5 and path.edge_count == 4
    assert path.edges() == [(0, 1), (1, 2), (2, 3), (3, 4)]

    cycle = generate("cycle", 7)
    assert cycle.edge_count == 7
    assert all(cycle.degree(v) == 2 for v in range(7))

    star = generate("star", 4)
    assert star.degree(0) == 3
    assert star.degree_sequence() == [3, 1, 1, 1]

    assert generate("complete", 4).edge_count == 6


def test_family_size_limits():
    with pytest.raises(InvalidParameterError):
        generate("cycle", 2)
    with pytest.raises(InvalidParameterError):
        generate("path", 1)
    with pytest.raises(InvalidParameterError):
        generate("wheel", 5)


def test_subdivided_star_layout():
    g = subdivided_star(1, 4)
    assert g.vertex_count == 7
    assert g.neighbors(0) == (1, 3, 5)
    d = all_pairs_distances(g)
    assert d.ecc[0] == 2
    assert d.radius == 2 and d.center == (0,)

    assert subdivided_star(0, 5).edge_count == 4
    with pytest.raises(InvalidParameterError):
        subdivided_star(1, 2)


def test_tk_shape():
    for k in range(1, 6):
        g = build_tk(k)
        d = all_pairs_distances(g)
        assert g.vertex_count == 4 * k - 2
        assert g.edge_count == g.vertex_count - 1
        assert d.radius == k
        assert d.diameter == 2 * k - 1
        assert d.center == (0, 1)
    t3 = build_tk(3)
    assert t3.neighbors(2) == (0, 6, 7)
    assert t3.neighbors(4) == (1, 8, 9)


def test_product_sizes_and_labels():
    k2, p2, p3 = generate("complete", 2), generate("path", 2), generate("path", 3)
    lex = product("lexicographic", k2, p3)
    assert lex.vertex_count == 6
    assert lex.edge_count == 9 + 2 * 2
    assert lex.label(4) == "(1,1)"

    assert product("strong", p2, p3).edge_count == 3 + 4 + 2 * 1 * 2
    assert product("cartesian", p2, p3).edge_count == 7

    with pytest.raises(InvalidParameterError):
        product("tensor", p2, p3)


def test_lexicographic_layer_distances():
    g, h = generate("cycle", 6), generate("path", 4)
    gh = product("lexicographic", g, h)
    dg, dh, d = all_pairs_distances(g), all_pairs_distances(h), all_pairs_distances(gh)
    width = h.vertex_count
    for u in range(gh.vertex_count):
        for v in range(gh.vertex_count):
            gu, hu, gv, hv = u // width, u % width, v // width, v % width
            if gu != gv:
                assert d.d(u, v) == dg.d(gu, gv)
            else:
                assert d.d(u, v) == min(dh.d(hu, hv), 2)


@st.composite
def _small_factor(draw):
    family = draw(st.sampled_from(["path", "cycle", "complete", "star"]))
    minimum = 3 if family == "cycle" else 2
    return generate(family, draw(st.integers(min_value=minimum, max_value=5)))


@settings(max_examples=25, deadline=None)
@given(g=_small_factor(), h=_small_factor())
def test_strong_product_distance_is_max(g, h):
    gh = product("strong", g, h)
    dg, dh, d = all_pairs_distances(g), all_pairs_distances(h), all_pairs_distances(gh)
    width = h.vertex_count
    for u in range(gh.vertex_count):
        for v in range(gh.vertex_count):
            expected = max(dg.d(u // width, v // width), dh.d(u % width, v % width))
            assert d.d(u, v) == expected


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(min_value=2, max_value=9),
    extra=st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8)), max_size=10),
)
def test_distances_match_networkx(n, extra):
    edges = {(i, i + 1) for i in range(n - 1)}
    edges |= {(min(u, v), max(u, v)) for u, v in extra if u != v and u < n and v < n}
    g = graph_from_edges(n, sorted(edges))
    d = all_pairs_distances(g)
    expected = dict(nx.all_pairs_shortest_path_length(g.to_networkx()))
    for u in range(n):
        assert d.ecc[u] == max(expected[u].values())
        for v in range(n):
            assert d.d(u, v) == expected[u][v]
            for w in range(n):
                assert d.d(u, w) <= d.d(u, v) + d.d(v, w)


def test_ball_contents():
    g = generate("cycle", 7)
    d = all_pairs_distances(g)
    assert ball(g, d, 0, 1).covered == (0, 1, 6)
    assert ball(g, d, 0, 2).size == 5
    assert ball(g, d, 0, 3).size == 7
    assert ball(g, d, 0, 1).mask == 0b1000011
    with pytest.raises(InvalidParameterError):
        ball(g, d, 9, 1)


def test_disconnected_inputs():
    with pytest.raises(ConnectivityError) as info:
        graph_from_edges(4, [(0, 1), (2, 3)])
    assert info.value.pair == (0, 2)

    g = graph_from_edges(4, [(0, 1), (2, 3)], allow_disconnected=True)
    assert not g.is_connected
    assert g.is_connected == nx.is_connected(g.to_networkx())
    assert graph_from_edges(4, [(0, 1), (2, 3), (1, 2)]).is_connected
    d = all_pairs_distances(g, allow_disconnected=True)
    assert not d.connected
    assert d.ecc == (1, 1, 1, 1)
    with pytest.raises(ConnectivityError):
        all_pairs_distances(g)


def test_parse_graph_accepts_comments_and_orientation():
    text = "# triangle plus tail\n\n4 4\n1 0\n1 2\n0 2\n3 2\n"
    g = parse_graph(text)
    assert g.edges() == [(0, 1), (0, 2), (1, 2), (2, 3)]
    assert serialize_graph(g) == "4 4\n0 1\n0 2\n1 2\n2 3\n"


def test_parse_graph_errors():
    cases = [
        ("3 2\n0 0\n1 2\n", SelfLoopError),
        ("3 2\n0 1\n1 0\n", DuplicateEdgeError),
        ("3 2\n0 5\n1 2\n", VertexRangeError),
        ("3 3\n0 1\n1 2\n", EdgeCountError),
        ("3 1\n0 1\n1 2\n", EdgeCountError),
        ("3 2\n0 1 2\n", MalformedLineError),
        ("3 2\n0 x\n", MalformedLineError),
        ("# nothing\n", MalformedLineError),
    ]
    for text, error in cases:
        with pytest.raises(error):
            parse_graph(text)

    with pytest.raises(SelfLoopError) as info:
        parse_graph("3 2\n0 1\n2 2\n")
    assert info.value.line_number == 3


def test_corpus_graphs_build():
    for key in get_all_corpus_keys():
        g = get_corpus_graph(key)
        assert g.is_connected, key
    assert get_corpus_graph("petersen").vertex_count == 10
    assert resolve_graph("cycle:7").edge_count == 7
    assert resolve_graph("path:2").edge_count == 1
    assert resolve_graph("tk:3").vertex_count == 10
    assert resolve_graph("sstar:2:5").vertex_count == 13
    with pytest.raises(InvalidParameterError):
        resolve_graph("moebius")


if __name__ == "__main__":
    sys.exit(run_tests("Graph Core", globals()))
