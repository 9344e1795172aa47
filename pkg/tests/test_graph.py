import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import all_graphs, alpha_oracle, mis_oracle
from preservers.errors import InvalidVertex, ParseError, SizeMismatch
from preservers.extremal import turan_complement, turan_graph
from preservers.graph import (
    Graph,
    VertexSet,
    clique_number,
    common_vertices_of_maximum_independent_sets,
    complement,
    complete_graph,
    empty_graph,
    from_edge_json,
    from_g6lite,
    independence_number,
    is_independent,
    make_single_edge,
    maximum_independent_sets,
    num_pairs,
    relabel,
    to_edge_json,
    to_g6lite,
    union,
)

C5 = Graph.from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
STAR5 = Graph.from_edges(5, [(1, 2), (1, 3), (1, 4), (1, 5)])
PATH3 = Graph.from_edges(3, [(1, 2), (2, 3)])


def graphs(max_n=7):
    return st.integers(1, max_n).flatmap(
        lambda n: st.builds(Graph, st.just(n), st.integers(0, (1 << num_pairs(n)) - 1))
    )


# -- oracle equivalence ------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 7))
def test_alpha_matches_subset_oracle_exhaustively(n):
    for g in all_graphs(n):
        want = alpha_oracle(g)
        assert independence_number(g) == want, g
        assert independence_number(g, method="dfs") == want, g


@pytest.mark.parametrize("n", [7, 8])
def test_alpha_matches_oracle_on_random_graphs(n):
    rng = random.Random(1000 + n)
    for _ in range(1000):
        g = Graph(n, rng.getrandbits(num_pairs(n)))
        assert independence_number(g) == alpha_oracle(g)


@pytest.mark.parametrize("n", range(1, 7))
def test_mis_matches_oracle_exhaustively(n):
    for g in all_graphs(n):
        assert [s.vertices() for s in maximum_independent_sets(g)] == mis_oracle(g)



# -- worked examples ------------------------------------------------------------


def test_single_edge_examples():
    assert make_single_edge(3, 1, 2).edge_list() == [(1, 2)]
    assert make_single_edge(3, 2, 1) == make_single_edge(3, 1, 2)
    g = make_single_edge(4, 1, 4)
    assert g.edge_list() == [(1, 4)] and g.size == 1


def test_single_edge_rejects_bad_vertices():
    with pytest.raises(InvalidVertex):
        make_single_edge(3, 1, 1)
    with pytest.raises(InvalidVertex):
        make_single_edge(3, 0, 2)
    with pytest.raises(InvalidVertex):
        make_single_edge(3, 1, 4)


def test_union_examples():
    g = union(make_single_edge(3, 1, 2), make_single_edge(3, 1, 3))
    assert g.edge_list() == [(1, 2), (1, 3)]
    assert union(C5, C5) == C5
    assert union(C5, empty_graph(5)) == C5
    with pytest.raises(SizeMismatch):
        union(C5, empty_graph(4))


def test_complement_examples():
    assert complement(complete_graph(6)) == empty_graph(6)
    assert complement(complement(C5)) == C5
    # the complement of the 5-cycle is the pentagram 1-3-5-2-4-1
    pentagram = Graph.from_edges(5, [(1, 3), (3, 5), (5, 2), (2, 4), (4, 1)])
    assert complement(C5) == pentagram
    assert relabel(C5, (1, 3, 5, 2, 4)) == pentagram


def test_alpha_examples():
    for n in range(1, 8):
        assert independence_number(complete_graph(n)) == 1
        assert independence_number(empty_graph(n)) == n
        assert clique_number(complete_graph(n)) == n
        assert clique_number(empty_graph(n)) == 1
    assert independence_number(C5) == 2
    assert independence_number(turan_complement(7, 3)) == 3
    assert clique_number(turan_graph(6, 2)) == 2


def test_mis_examples():
    assert [str(s) for s in maximum_independent_sets(complete_graph(3))] == ["{1}", "{2}", "{3}"]
    assert [str(s) for s in maximum_independent_sets(STAR5)] == ["{2,3,4,5}"]
    assert [str(s) for s in maximum_independent_sets(PATH3)] == ["{1,3}"]
    assert [str(s) for s in maximum_independent_sets(C5)] == ["{1,3}", "{1,4}", "{2,4}", "{2,5}", "{3,5}"]


def test_common_vertices_examples():
    core = common_vertices_of_maximum_independent_sets(STAR5)
    assert core.vertices() == (2, 3, 4, 5)
    assert len(core) >= 2 * 4 - 5
    assert len(common_vertices_of_maximum_independent_sets(complete_graph(3))) == 0
    assert common_vertices_of_maximum_independent_sets(empty_graph(4)).vertices() == (1, 2, 3, 4)


def test_vertex_set_validation():
    assert str(VertexSet.of(5, [3, 1])) == "{1,3}"
    with pytest.raises(InvalidVertex):
        VertexSet.of(3, [4])


# -- serialization --------------------------------------------------------------


def test_g6lite_format():
    assert to_g6lite(C5) == "5:10:299"
    assert to_g6lite(empty_graph(1)) == "1:0:0"
    assert from_g6lite("5:10:299") == C5


@pytest.mark.parametrize("text", ["", "5:10", "5:9:299", "x:10:1", "3:3:f", "0:0:0"])
def test_g6lite_rejects_malformed(text):
    with pytest.raises(ParseError):
        from_g6lite(text)


@pytest.mark.parametrize("text", ["{", '{"n":3}', '{"n":3,"edges":[[1,2,3]]}', '{"n":3,"edges":[[1,5]]}'])
def test_edge_json_rejects_malformed(text):
    with pytest.raises(ParseError):
        from_edge_json(text)


@given(graphs(9))
def test_serialization_round_trips(g):
    assert from_g6lite(to_g6lite(g)) == g
    assert from_edge_json(to_edge_json(g)) == g


# -- properties --------------------------------------------------------------------


@given(graphs())
def test_clique_is_alpha_of_complement(g):
    assert clique_number(g) == independence_number(complement(g))


@given(graphs())
def test_every_listed_set_is_maximum_and_independent(g):
    sets = maximum_independent_sets(g)
    a = independence_number(g)
    assert sets and all(len(s) == a and is_independent(g, s) for s in sets)
    assert len({s.members for s in sets}) == len(sets)


@given(graphs(), st.data())
def test_adding_an_edge_drops_alpha_by_at_most_one(g, data):
    missing = complement(g).edge_list()
    if not missing:
        return
    i, j = data.draw(st.sampled_from(missing))
    h = g | make_single_edge(g.n, i, j)
    assert independence_number(g) - independence_number(h) in (0, 1)


@settings(max_examples=60)
@given(graphs(7), st.data())
def test_alpha_invariant_under_relabelling(g, data):
    sigma = tuple(data.draw(st.permutations(range(1, g.n + 1))))
    assert independence_number(relabel(g, sigma)) == independence_number(g)
