import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import alpha_oracle
from preservers import bulk
from preservers.graph import (
    Graph,
    clique_number,
    common_vertices_of_maximum_independent_sets,
    independence_number,
    num_pairs,
)


@pytest.mark.parametrize("n", range(1, 6))
def test_alpha_table_matches_branch_and_bound(n):
    table = bulk.alpha_table(n)
    assert table.size == 1 << num_pairs(n)
    for bits, a in enumerate(table.tolist()):
        assert a == independence_number(Graph(n, bits))


def test_alpha_table_is_read_only():
    with pytest.raises(ValueError):
        bulk.alpha_table(4)[0] = 0


@pytest.mark.parametrize("n", range(1, 6))
def test_omega_table_matches(n):
    for bits, w in enumerate(bulk.omega_table(n).tolist()):
        assert w == clique_number(Graph(n, bits))


@given(st.integers(1, 11).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << num_pairs(n)) - 1))))
def test_bulk_alpha_and_core_agree_with_scalar(case):
    n, bits = case
    g = Graph(n, bits)
    a, core = bulk.bulk_alpha_and_core(np.array([bits], dtype=np.uint64), n)
    assert int(a[0]) == independence_number(g)
    assert int(core[0]) == common_vertices_of_maximum_independent_sets(g).members
    if n <= 8:
        assert int(a[0]) == alpha_oracle(g)


def test_bulk_rejects_large_orders():
    with pytest.raises(ValueError):
        bulk.bulk_alpha(np.zeros(1, dtype=np.uint64), 12)


@given(st.lists(st.integers(0, 2**20), max_size=8))
def test_subset_unions(values):
    out = bulk.subset_unions(values).tolist()
    assert len(out) == 1 << len(values)
    for s, u in enumerate(out):
        want = 0
        for k, v in enumerate(values):
            if s >> k & 1:
                want |= v
        assert u == want


def test_popcounts():
    vals = np.array([0, 1, 3, 2**63 + 1], dtype=np.uint64)
    assert bulk.popcounts(vals).tolist() == [0, 1, 2, 2]
