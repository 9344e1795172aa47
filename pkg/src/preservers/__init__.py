"""Linear maps on graphs and nonnegative symmetric matrices that preserve a fixed
independence number, with exhaustive small-order verification tools."""

from .graph import (
    Graph,
    VertexSet,
    clique_number,
    complement,
    complete_graph,
    empty_graph,
    from_g6lite,
    independence_number,
    maximum_independent_sets,
    to_g6lite,
)
from .maps import GraphLinearMap, VertexPermutation, satisfies_preserver_condition
from .classifier import SearchOptions, classify, verify_all_t_preserver, verify_theorem
from .extremal import TuranSpec, check_turan_bound, turan_complement, turan_graph

__all__ = [
    "Graph",
    "VertexSet",
    "clique_number",
    "complement",
    "complete_graph",
    "empty_graph",
    "from_g6lite",
    "independence_number",
    "maximum_independent_sets",
    "to_g6lite",
    "GraphLinearMap",
    "VertexPermutation",
    "satisfies_preserver_condition",
    "SearchOptions",
    "classify",
    "verify_all_t_preserver",
    "verify_theorem",
    "TuranSpec",
    "check_turan_bound",
    "turan_complement",
    "turan_graph",
]
