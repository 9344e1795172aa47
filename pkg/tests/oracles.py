"""Brute-force reference implementations, deliberately naive."""

import itertools


def edge_set(g):
    return set(g.edge_list())


def independent(edges, subset):
    return all((a, b) not in edges for a, b in itertools.combinations(sorted(subset), 2))


def alpha_oracle(g):
    edges = edge_set(g)
    best = 0
    for size in range(g.n + 1):
        for s in itertools.combinations(range(1, g.n + 1), size):
            if independent(edges, s):
                best = size
                break
    return best


def mis_oracle(g):
    edges = edge_set(g)
    a = alpha_oracle(g)
    return [s for s in itertools.combinations(range(1, g.n + 1), a) if independent(edges, s)]


def all_graphs(n):
    from preservers.graph import Graph, num_pairs

    for bits in range(1 << num_pairs(n)):
        yield Graph(n, bits)
