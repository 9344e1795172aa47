import itertools

import pytest
from hypothesis import given, strategies as st

from oracles import alpha_oracle, all_graphs
from preservers.errors import InvalidThreshold, ParseError, SizeMismatch
from preservers.graph import (
    Graph,
    clique_number,
    complete_graph,
    empty_graph,
    independence_number,
    make_single_edge,
    num_pairs,
    relabel,
)
from preservers.maps import (
    GraphLinearMap,
    VertexPermutation,
    all_vertex_permutations,
    apply,
    is_complete,
    is_edge_permutation,
    is_vertex_permutation,
    map_from_json,
    map_to_json,
    post_compose,
    satisfies_preserver_condition,
    star,
    structural_predicates,
)


def swap_12_34():
    """Edge permutation on n=4 exchanging {1,2} and {3,4}, fixing the other edges."""
    n = 4
    table = {(i, j): make_single_edge(n, i, j) for i, j in itertools.combinations(range(1, 5), 2)}
    table[(1, 2)], table[(3, 4)] = table[(3, 4)], table[(1, 2)]
    return GraphLinearMap.from_table(n, table)


def maps(max_n=5):
    def build(n):
        m = num_pairs(n)
        return st.lists(st.integers(0, (1 << m) - 1), min_size=m, max_size=m).map(
            lambda b: GraphLinearMap.from_bitsets(n, b)
        )

    return st.integers(2, max_n).flatmap(build)


def maps_with_graphs(k=2):
    return maps().flatmap(
        lambda phi: st.tuples(
            st.just(phi), *[st.builds(Graph, st.just(phi.n), st.integers(0, (1 << num_pairs(phi.n)) - 1))] * k
        )
    )


# -- apply ---------------------------------------------------------------------


def test_apply_examples():
    c5 = Graph.from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    assert apply(GraphLinearMap.identity(5), c5) == c5
    const = GraphLinearMap(4, (complete_graph(4),) * 6)
    assert apply(const, make_single_edge(4, 2, 3)) == complete_graph(4)
    assert apply(const, empty_graph(4)) == empty_graph(4)
    swap = GraphLinearMap.from_vertex_permutation((2, 1, 3))
    assert apply(swap, make_single_edge(3, 1, 3)) == make_single_edge(3, 2, 3)


def test_apply_rejects_order_mismatch():
    with pytest.raises(SizeMismatch):
        apply(GraphLinearMap.identity(3), empty_graph(4))
    with pytest.raises(SizeMismatch):
        GraphLinearMap.from_bitsets(3, [1, 2])


@given(maps_with_graphs())
def test_apply_distributes_over_union(case):
    phi, g, h = case
    assert apply(phi, g | h) == apply(phi, g) | apply(phi, h)


@given(maps_with_graphs())
def test_apply_is_monotone(case):
    phi, g, h = case
    lo, hi = apply(phi, g), apply(phi, g | h)
    assert lo.edges & ~hi.edges == 0


# -- classification predicates --------------------------------------------------------


def test_completeness_examples():
    assert is_complete(GraphLinearMap.identity(4))
    assert not is_complete(GraphLinearMap(3, (make_single_edge(3, 1, 2),) * 3))
    assert all(is_complete(GraphLinearMap.from_vertex_permutation(p)) for p in all_vertex_permutations(4))


def test_vertex_permutation_examples():
    assert is_vertex_permutation(GraphLinearMap.identity(5)) == VertexPermutation.identity(5)
    phi = GraphLinearMap.from_table(
        3,
        {(1, 2): make_single_edge(3, 1, 3), (1, 3): make_single_edge(3, 1, 2), (2, 3): make_single_edge(3, 2, 3)},
    )
    assert is_vertex_permutation(phi) == VertexPermutation((1, 3, 2))
    assert is_vertex_permutation(swap_12_34()) is None


def test_edge_permutation_examples():
    assert is_edge_permutation(swap_12_34())
    assert all(is_edge_permutation(GraphLinearMap.from_vertex_permutation(p)) for p in all_vertex_permutations(4))
    two = list(GraphLinearMap.identity(4).images)
    two[0] = two[0] | two[5]
    assert not is_edge_permutation(GraphLinearMap(4, tuple(two)))


@pytest.mark.parametrize("n", range(1, 6))
def test_vertex_permutation_detection_roundtrip(n):
    # at n = 2 both permutations induce the same map, so compare induced maps
    for p in all_vertex_permutations(n):
        phi = GraphLinearMap.from_vertex_permutation(p)
        assert GraphLinearMap.from_vertex_permutation(is_vertex_permutation(phi)) == phi


@pytest.mark.parametrize("n", range(2, 5))
def test_vertex_permutation_acts_by_relabelling(n):
    for p in all_vertex_permutations(n):
        phi = GraphLinearMap.from_vertex_permutation(p)
        for g in all_graphs(n):
            assert apply(phi, g) == relabel(g, p.sigma)


def test_post_compose_matches_composition():
    a, b = VertexPermutation((2, 3, 1, 4)), VertexPermutation((4, 1, 3, 2))
    left = post_compose(a, GraphLinearMap.from_vertex_permutation(b))
    assert left == GraphLinearMap.from_vertex_permutation(a.compose(b))


# -- the preserver condition ---------------------------------------------------------------


def naive_counterexample(phi, t, inv):
    """First failing graph by (edge count, bitset), computed the slow way."""
    n = phi.n
    for g in sorted(all_graphs(n), key=lambda g: (g.size, g.edges)):
        if (inv(g) == t) != (inv(apply(phi, g)) == t):
            return g
    return None


@pytest.mark.parametrize("n", range(2, 6))
def test_vertex_permutations_satisfy_every_threshold(n):
    perms = list(all_vertex_permutations(n))
    for p in perms:
        phi = GraphLinearMap.from_vertex_permutation(p)
        for t in range(1, n + 1):
            assert satisfies_preserver_condition(phi, t) is None


def test_edge_swap_fails_at_t2_with_smallest_witness():
    ce = satisfies_preserver_condition(swap_12_34(), 2)
    assert ce is not None
    assert ce.graph == naive_counterexample(swap_12_34(), 2, alpha_oracle)
    assert (ce.value == 2) != (ce.image_value == 2)
    assert ce.value == alpha_oracle(ce.graph) and ce.image_value == alpha_oracle(ce.image)
    assert ce.direction in ("alpha(G)=t but alpha(phi(G))!=t", "alpha(phi(G))=t but alpha(G)!=t")
    assert satisfies_preserver_condition(swap_12_34(), 1) is None


def test_edge_permutations_of_triangle_satisfy_t1():
    for p in itertools.permutations(range(3)):
        phi = GraphLinearMap.from_bitsets(3, (1 << k for k in p))
        assert satisfies_preserver_condition(phi, 1) is None


@given(maps(4), st.integers(1, 4), st.sampled_from(["independence", "clique"]))
def test_scan_agrees_with_naive_search(phi, t, mode):
    t = min(t, phi.n)
    inv = independence_number if mode == "independence" else clique_number
    ce = satisfies_preserver_condition(phi, t, mode)
    want = naive_counterexample(phi, t, inv)
    assert (ce.graph if ce else None) == want


def test_threshold_range():
    with pytest.raises(InvalidThreshold):
        satisfies_preserver_condition(GraphLinearMap.identity(3), 0)
    with pytest.raises(InvalidThreshold):
        satisfies_preserver_condition(GraphLinearMap.identity(3), 4)
    with pytest.raises(ValueError):
        satisfies_preserver_condition(GraphLinearMap.identity(3), 1, mode="chromatic")


def test_counterexample_record():
    ce = satisfies_preserver_condition(GraphLinearMap(3, (complete_graph(3),) * 3), 2)
    d = ce.to_dict()
    assert d["graph"] == [[1, 2]] and d["value"] == 2 and d["image_value"] == 1
    assert ce.direction == "alpha(G)=t but alpha(phi(G))!=t"
    ce = satisfies_preserver_condition(GraphLinearMap(3, (complete_graph(3),) * 3), 1)
    assert ce.graph.size == 1 and ce.direction == "alpha(phi(G))=t but alpha(G)!=t"


# -- structural predicates -----------------------------------------------------------------


def test_predicates_for_vertex_permutations():
    for p in all_vertex_permutations(4):
        preds = structural_predicates(GraphLinearMap.from_vertex_permutation(p)).as_dict()
        assert all(preds.values()), preds


def test_predicate_examples():
    imgs = list(GraphLinearMap.identity(4).images)
    imgs[0] = empty_graph(4)
    assert not structural_predicates(GraphLinearMap(4, tuple(imgs))).all_images_nonempty
    imgs = list(GraphLinearMap.identity(4).images)
    imgs[0] = make_single_edge(4, 1, 2) | make_single_edge(4, 3, 4)
    preds = structural_predicates(GraphLinearMap(4, tuple(imgs)))
    assert not preds.no_image_has_separate_edges and not preds.all_images_single_edge
    assert not structural_predicates(swap_12_34()).star_alignment
    assert star(4, 2).edge_list() == [(1, 2), (2, 3), (2, 4)]


# -- serialization ---------------------------------------------------------------------------


def test_map_json_format():
    text = map_to_json(GraphLinearMap.from_vertex_permutation((1, 3, 2)))
    assert text == '{"n":3,"images":{"1,2":[[1,3]],"1,3":[[1,2]],"2,3":[[2,3]]}}'


@given(maps())
def test_map_json_round_trip(phi):
    assert map_from_json(map_to_json(phi)) == phi


@pytest.mark.parametrize(
    "text",
    ["[", '{"n":3}', '{"n":3,"images":{"1,2":[[1,5]]}}', '{"n":3,"images":{"1,2":[],"2,1":[]}}', '{"n":3,"images":{"a":[]}}'],
)
def test_map_json_rejects_malformed(text):
    with pytest.raises(ParseError):
        map_from_json(text)
