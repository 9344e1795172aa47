"""Labeled simple graphs on a fixed vertex set {1..n}, stored as edge bitsets.

Edge ``k`` of the bitset is the k-th unordered pair in lexicographic order
(1,2), (1,3), ..., (1,n), (2,3), ...  Vertex sets use bit ``v - 1`` for vertex v.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import InvalidVertex, ParseError, SizeMismatch

MAX_ORDER = 32


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def pairs(n: int) -> tuple[tuple[int, int], ...]:
    """All unordered pairs of {1..n} in canonical (lexicographic) order."""
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


@lru_cache(maxsize=None)
def _pair_lookup(n: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(pairs(n))}


def pair_index(n: int, i: int, j: int) -> int:
    """Bit position of the edge {i, j}; order of i and j does not matter."""
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise InvalidVertex(f"({i},{j}) is not an edge of K_{n}")
    if i > j:
        i, j = j, i
    return _pair_lookup(n)[(i, j)]


def _check_order(n: int) -> None:
    if not isinstance(n, int) or not 1 <= n <= MAX_ORDER:
        raise InvalidVertex(f"vertex count must be in 1..{MAX_ORDER}, got {n!r}")


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class VertexSet:
    n: int
    members: int = 0

    def __post_init__(self):
        _check_order(self.n)
        if self.members < 0 or self.members >> self.n:
            raise InvalidVertex(f"members {self.members:#x} outside 1..{self.n}")

    @classmethod
    def of(cls, n: int, vertices: Iterable[int]) -> VertexSet:
        mask = 0
        for v in vertices:
            if not 1 <= v <= n:
                raise InvalidVertex(f"vertex {v} outside 1..{n}")
            mask |= 1 << (v - 1)
        return cls(n, mask)

    def vertices(self) -> tuple[int, ...]:
        return tuple(b + 1 for b in iter_bits(self.members))

    def __iter__(self):
        return iter(self.vertices())

    def __len__(self):
        return self.members.bit_count()

    def __contains__(self, v):
        return 1 <= v <= self.n and bool(self.members >> (v - 1) & 1)

    def __str__(self):
        return "{" + ",".join(map(str, self.vertices())) + "}"


@dataclass(frozen=True)
class Graph:
    """A simple graph on {1..n}; ``edges`` is the canonical edge bitset."""

    n: int
    edges: int = 0

    def __post_init__(self):
        _check_order(self.n)
        if self.edges < 0 or self.edges >> num_pairs(self.n):
            raise SizeMismatch(f"edge bitset {self.edges:#x} too wide for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        _check_order(n)
        mask = 0
        for i, j in edges:
            mask |= 1 << pair_index(n, i, j)
        return cls(n, mask)

    @property
    def size(self) -> int:
        return self.edges.bit_count()

    def edge_list(self) -> list[tuple[int, int]]:
        ps = pairs(self.n)
        return [ps[k] for k in iter_bits(self.edges)]

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.edges >> pair_index(self.n, i, j) & 1)

    def adjacency(self) -> tuple[int, ...]:
        """Neighbourhood bitmask of every vertex (bit v-1 for vertex v)."""
        return _adjacency(self.n, self.edges)

    def __or__(self, other: Graph) -> Graph:
        return union(self, other)

    def __str__(self):
        return f"Graph(n={self.n}, edges={self.edge_list()})"


@lru_cache(maxsize=4096)
def _adjacency(n: int, edges: int) -> tuple[int, ...]:
    adj = [0] * n
    ps = pairs(n)
    for k in iter_bits(edges):
        i, j = ps[k]
        adj[i - 1] |= 1 << (j - 1)
        adj[j - 1] |= 1 << (i - 1)
    return tuple(adj)


def empty_graph(n: int) -> Graph:
    return Graph(n, 0)


def complete_graph(n: int) -> Graph:
    _check_order(n)
    return Graph(n, (1 << num_pairs(n)) - 1)


def make_single_edge(n: int, i: int, j: int) -> Graph:
    _check_order(n)
    return Graph(n, 1 << pair_index(n, i, j))


def union(g1: Graph, g2: Graph) -> Graph:
    if g1.n != g2.n:
        raise SizeMismatch(f"cannot unite graphs of order {g1.n} and {g2.n}")
    return Graph(g1.n, g1.edges | g2.edges)


def complement(g: Graph) -> Graph:
    return Graph(g.n, ((1 << num_pairs(g.n)) - 1) & ~g.edges)


def relabel(g: Graph, sigma: tuple[int, ...]) -> Graph:
    """Push every edge of ``g`` through the vertex map ``sigma`` (sigma[v-1] = image of v)."""
    return Graph.from_edges(g.n, ((sigma[i - 1], sigma[j - 1]) for i, j in g.edge_list()))


def is_independent(g: Graph, s: VertexSet) -> bool:
    adj = g.adjacency()
    return all(not adj[v - 1] & s.members for v in s.vertices())


# -- independence number ----------------------------------------------------


def _color_order(cand: int, adj: tuple[int, ...]) -> tuple[list[int], list[int]]:
    # Greedy sequential colouring; returns vertices sorted by colour with the
    # colour number of each, which bounds the clique size among the prefix.
    order: list[int] = []
    bounds: list[int] = []
    uncolored = cand
    color = 0
    while uncolored:
        color += 1
        q = uncolored
        while q:
            low = q & -q
            v = low.bit_length() - 1
            order.append(v)
            bounds.append(color)
            uncolored ^= low
            q &= ~(adj[v] | low)
    return order, bounds


def _max_clique_size(adj: tuple[int, ...], n: int) -> int:
    best = 0

    def expand(size: int, cand: int) -> None:
        nonlocal best
        order, bounds = _color_order(cand, adj)
        for idx in range(len(order) - 1, -1, -1):
            if size + bounds[idx] <= best:
                return
            v = order[idx]
            sub = cand & adj[v]
            if sub:
                expand(size + 1, sub)
            elif size + 1 > best:
                best = size + 1
            cand &= ~(1 << v)

    expand(0, (1 << n) - 1)
    return best


def _complement_adjacency(g: Graph) -> tuple[int, ...]:
    full = (1 << g.n) - 1
    return tuple(full & ~a & ~(1 << v) for v, a in enumerate(g.adjacency()))


def _alpha_dfs(adj: tuple[int, ...], n: int) -> int:
    best = 0

    def rec(cand: int, size: int) -> None:
        nonlocal best
        if size + cand.bit_count() <= best:
            return
        if not cand:
            best = size
            return
        low = cand & -cand
        v = low.bit_length() - 1
        rec(cand & ~adj[v] & ~low, size + 1)
        rec(cand & ~low, size)

    rec((1 << n) - 1, 0)
    return best


def independence_number(g: Graph, method: str = "coloring") -> int:
    """Exact size of a maximum independent set.

    ``method="coloring"`` runs a maximum-clique branch and bound on the
    complement with a greedy colouring bound; ``method="dfs"`` is a plain
    include/exclude search bounded by the candidate count.
    """
    if method == "coloring":
        return _max_clique_size(_complement_adjacency(g), g.n)
    if method == "dfs":
        return _alpha_dfs(g.adjacency(), g.n)
    raise ValueError(f"unknown method {method!r}")


def clique_number(g: Graph) -> int:
    return independence_number(complement(g))


def maximum_independent_sets(g: Graph) -> list[VertexSet]:
    """Every independent set of size alpha(g), lexicographic by sorted vertex list."""
    alpha = independence_number(g)
    adj = g.adjacency()
    found: list[VertexSet] = []

    def rec(chosen: int, cand: int, count: int) -> None:
        if count == alpha:
            found.append(VertexSet(g.n, chosen))
            return
        if count + cand.bit_count() < alpha:
            return
        low = cand & -cand
        v = low.bit_length() - 1
        rec(chosen | low, cand & ~adj[v] & ~low, count + 1)
        rec(chosen, cand & ~low, count)

    rec(0, (1 << g.n) - 1, 0)
    return found


def common_vertices_of_maximum_independent_sets(g: Graph) -> VertexSet:
    common = (1 << g.n) - 1
    for s in maximum_independent_sets(g):
        common &= s.members
    return VertexSet(g.n, common)


# -- serialization ------------------------------------------------------------


def to_g6lite(g: Graph) -> str:
    """``n:m:hex`` with m the number of vertex pairs and the bitset in hex, MSB first."""
    m = num_pairs(g.n)
    width = max(1, -(-m // 4))
    return f"{g.n}:{m}:{g.edges:0{width}x}"


def from_g6lite(text: str) -> Graph:
    try:
        n_s, m_s, hex_s = text.strip().split(":")
        n, m, edges = int(n_s), int(m_s), int(hex_s, 16)
    except ValueError as exc:
        raise ParseError(f"malformed g6-lite string {text!r}") from exc
    if not 1 <= n <= MAX_ORDER or m != num_pairs(n):
        raise ParseError(f"g6-lite header {n}:{m} is inconsistent")
    if edges >> m:
        raise ParseError(f"bitset {hex_s} has bits beyond pair {m}")
    return Graph(n, edges)


def to_edge_json(g: Graph) -> str:
    return json.dumps({"n": g.n, "edges": [list(e) for e in g.edge_list()]}, separators=(",", ":"))


def graph_from_obj(obj) -> Graph:
    try:
        n = obj["n"]
        edges = [tuple(e) for e in obj["edges"]]
        if not isinstance(n, int) or any(len(e) != 2 for e in edges):
            raise TypeError
        return Graph.from_edges(n, edges)
    except (KeyError, TypeError, InvalidVertex) as exc:
        raise ParseError(f"not an edge-list graph object: {exc}") from exc


def from_edge_json(text: str) -> Graph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc
    return graph_from_obj(obj)
