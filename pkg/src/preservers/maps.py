"""Union-preserving maps on the graphs of order n.

A linear map is fixed by the image of each single-edge generator; the image of
any other graph is the union of the images of its edges.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from . import bulk
from .errors import BudgetExceeded, InvalidThreshold, InvalidVertex, ParseError, SizeMismatch
from .graph import Graph, complete_graph, iter_bits, num_pairs, pair_index, pairs, relabel

MODES = ("independence", "clique")
DEFAULT_MAX_PAIRS = 28
_CHUNK_BITS = 20


@dataclass(frozen=True)
class VertexPermutation:
    """``sigma[v - 1]`` is the image of vertex v."""

    sigma: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.sigma) != list(range(1, len(self.sigma) + 1)):
            raise InvalidVertex(f"{self.sigma} is not a permutation of 1..{len(self.sigma)}")

    @property
    def n(self) -> int:
        return len(self.sigma)

    @classmethod
    def identity(cls, n: int) -> VertexPermutation:
        return cls(tuple(range(1, n + 1)))

    def __call__(self, v: int) -> int:
        return self.sigma[v - 1]

    def compose(self, other: VertexPermutation) -> VertexPermutation:
        """self after other."""
        return VertexPermutation(tuple(self(other(v)) for v in range(1, self.n + 1)))


def all_vertex_permutations(n: int) -> Iterator[VertexPermutation]:
    for p in itertools.permutations(range(1, n + 1)):
        yield VertexPermutation(p)


@dataclass(frozen=True)
class GraphLinearMap:
    n: int
    images: tuple[Graph, ...]

    def __post_init__(self):
        if len(self.images) != num_pairs(self.n):
            raise SizeMismatch(f"need {num_pairs(self.n)} generator images, got {len(self.images)}")
        if any(g.n != self.n for g in self.images):
            raise SizeMismatch("every image must live on the same vertex set")

    @classmethod
    def from_bitsets(cls, n: int, bitsets: Iterable[int]) -> GraphLinearMap:
        return cls(n, tuple(Graph(n, b) for b in bitsets))

    @classmethod
    def from_table(cls, n: int, table: dict[tuple[int, int], Graph]) -> GraphLinearMap:
        images = [Graph(n)] * num_pairs(n)
        for (i, j), g in table.items():
            images[pair_index(n, i, j)] = g
        return cls(n, tuple(images))

    @classmethod
    def identity(cls, n: int) -> GraphLinearMap:
        return cls.from_bitsets(n, (1 << k for k in range(num_pairs(n))))

    @classmethod
    def from_vertex_permutation(cls, perm: VertexPermutation | tuple[int, ...]) -> GraphLinearMap:
        if not isinstance(perm, VertexPermutation):
            perm = VertexPermutation(tuple(perm))
        n = perm.n
        return cls.from_bitsets(n, (1 << pair_index(n, perm(i), perm(j)) for i, j in pairs(n)))

    def image(self, i: int, j: int) -> Graph:
        return self.images[pair_index(self.n, i, j)]

    def bitsets(self) -> tuple[int, ...]:
        return tuple(g.edges for g in self.images)

    def __call__(self, g: Graph) -> Graph:
        return apply(self, g)


def apply(phi: GraphLinearMap, g: Graph) -> Graph:
    if g.n != phi.n:
        raise SizeMismatch(f"map on order {phi.n} applied to graph of order {g.n}")
    out = 0
    for k in iter_bits(g.edges):
        out |= phi.images[k].edges
    return Graph(phi.n, out)


def post_compose(perm: VertexPermutation, phi: GraphLinearMap) -> GraphLinearMap:
    """The map G -> relabel(phi(G), perm)."""
    return GraphLinearMap(phi.n, tuple(relabel(g, perm.sigma) for g in phi.images))


def is_complete(phi: GraphLinearMap) -> bool:
    out = 0
    for g in phi.images:
        out |= g.edges
    return out == complete_graph(phi.n).edges


def is_edge_permutation(phi: GraphLinearMap) -> bool:
    return all(g.size == 1 for g in phi.images) and is_complete(phi)


def is_vertex_permutation(phi: GraphLinearMap) -> Optional[VertexPermutation]:
    """The permutation inducing ``phi``, or None.

    Every image must be a single edge.  The images of the generators at a
    vertex i must all pass through one vertex, which is the only possible
    value of sigma(i); the assignment is then checked on every generator.
    """
    n = phi.n
    if n == 1:
        return VertexPermutation.identity(1)
    if any(g.size != 1 for g in phi.images):
        return None
    ends = []
    for g in phi.images:
        a, b = g.edge_list()[0]
        ends.append((1 << (a - 1)) | (1 << (b - 1)))
    cands = []
    for i in range(1, n + 1):
        common = (1 << n) - 1
        for j in range(1, n + 1):
            if j != i:
                common &= ends[pair_index(n, i, j)]
        if not common:
            return None
        cands.append([b + 1 for b in iter_bits(common)])

    target = phi.bitsets()
    gens = pairs(n)

    def search(i: int, used: int, sigma: list[int]) -> Optional[tuple[int, ...]]:
        if i == n:
            ok = all(target[k] == 1 << pair_index(n, sigma[a - 1], sigma[b - 1]) for k, (a, b) in enumerate(gens))
            return tuple(sigma) if ok else None
        for v in cands[i]:
            if not used >> v & 1:
                sigma.append(v)
                found = search(i + 1, used | 1 << v, sigma)
                sigma.pop()
                if found:
                    return found
        return None

    found = search(0, 0, [])
    return VertexPermutation(found) if found else None


def all_edge_permutations(n: int) -> Iterator[GraphLinearMap]:
    m = num_pairs(n)
    for p in itertools.permutations(range(m)):
        yield GraphLinearMap.from_bitsets(n, (1 << k for k in p))


# -- the preserver condition ----------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    graph: Graph
    image: Graph
    t: int
    mode: str
    value: int
    image_value: int

    @property
    def direction(self) -> str:
        sym = "alpha" if self.mode == "independence" else "omega"
        if self.value == self.t:
            return f"{sym}(G)=t but {sym}(phi(G))!=t"
        return f"{sym}(phi(G))=t but {sym}(G)!=t"

    def to_dict(self) -> dict:
        return {
            "graph": [list(e) for e in self.graph.edge_list()],
            "image": [list(e) for e in self.image.edge_list()],
            "t": self.t,
            "mode": self.mode,
            "value": self.value,
            "image_value": self.image_value,
            "direction": self.direction,
        }


def check_threshold(n: int, t: int, mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if not 1 <= t <= n:
        raise InvalidThreshold(f"t={t} outside 1..{n}")


def satisfies_preserver_condition(
    phi: GraphLinearMap,
    t: int,
    mode: str = "independence",
    max_pairs: int = DEFAULT_MAX_PAIRS,
) -> Optional[Counterexample]:
    """First graph G (fewest edges, then smallest bitset) where exactly one of
    inv(G) = t and inv(phi(G)) = t holds; None when the biconditional holds on
    all 2^m graphs.  ``inv`` is alpha or omega according to ``mode``.
    """
    n = phi.n
    check_threshold(n, t, mode)
    m = num_pairs(n)
    if m > max_pairs:
        raise BudgetExceeded(f"2^{m} graphs exceed the scan limit 2^{max_pairs}")
    imgs = phi.bitsets()
    low = min(m, _CHUNK_BITS)
    low_phi = bulk.subset_unions(imgs[:low])
    low_graphs = np.arange(1 << low, dtype=np.uint64)
    best = None
    for high in range(1 << (m - low)):
        base = 0
        for k in iter_bits(high):
            base |= imgs[low + k]
        graphs = low_graphs | np.uint64(high << low)
        images = low_phi | np.uint64(base)
        v_in = bulk.bulk_invariant(graphs, n, mode)
        v_out = bulk.bulk_invariant(images, n, mode)
        bad = np.flatnonzero((v_in == t) != (v_out == t))
        if bad.size == 0:
            continue
        cand = graphs[bad]
        k = np.lexsort((cand, bulk.popcounts(cand)))[0]
        key = (int(cand[k]).bit_count(), int(cand[k]))
        if best is None or key < best[0]:
            idx = bad[k]
            best = (key, int(graphs[idx]), int(images[idx]), int(v_in[idx]), int(v_out[idx]))
    if best is None:
        return None
    _, g, img, a, b = best
    return Counterexample(Graph(n, g), Graph(n, img), t, mode, a, b)


# -- structural predicates --------------------------------------------------------


@dataclass(frozen=True)
class StructuralPredicates:
    all_images_nonempty: bool
    no_image_has_separate_edges: bool
    all_images_single_edge: bool
    adjacent_generators_map_to_adjacent_edges: bool
    star_alignment: bool

    def as_dict(self) -> dict[str, bool]:
        return dict(self.__dict__)


def _has_separate_edges(g: Graph) -> bool:
    es = g.edge_list()
    return any(not set(a) & set(b) for a, b in itertools.combinations(es, 2))


def star(n: int, center: int) -> Graph:
    return Graph.from_edges(n, ((center, x) for x in range(1, n + 1) if x != center))


def structural_predicates(phi: GraphLinearMap) -> StructuralPredicates:
    n = phi.n
    adjacent = True
    for i in range(1, n + 1):
        others = [x for x in range(1, n + 1) if x != i]
        for j, k in itertools.combinations(others, 2):
            u = phi.image(i, j) | phi.image(i, k)
            if u.size != 2 or _has_separate_edges(u):
                adjacent = False
                break
        if not adjacent:
            break
    stars = {star(n, c) for c in range(1, n + 1)} if n > 1 else set()
    aligned = all(apply(phi, star(n, i)) in stars for i in range(1, n + 1)) if n > 1 else True
    return StructuralPredicates(
        all_images_nonempty=all(g.edges for g in phi.images),
        no_image_has_separate_edges=not any(_has_separate_edges(g) for g in phi.images),
        all_images_single_edge=all(g.size == 1 for g in phi.images),
        adjacent_generators_map_to_adjacent_edges=adjacent,
        star_alignment=aligned,
    )


# -- serialization ------------------------------------------------------------------


def map_to_obj(phi: GraphLinearMap) -> dict:
    images = {
        f"{i},{j}": [list(e) for e in g.edge_list()]
        for (i, j), g in zip(pairs(phi.n), phi.images)
        if g.edges
    }
    return {"n": phi.n, "images": images}


def map_to_json(phi: GraphLinearMap) -> str:
    return json.dumps(map_to_obj(phi), separators=(",", ":"))


def map_from_obj(obj) -> GraphLinearMap:
    try:
        n = obj["n"]
        table: dict[tuple[int, int], Graph] = {}
        for key, edges in obj["images"].items():
            i, j = (int(x) for x in key.split(","))
            norm = (min(i, j), max(i, j))
            if norm in table:
                raise ParseError(f"generator {key} listed twice")
            table[norm] = Graph.from_edges(n, (tuple(e) for e in edges))
        return GraphLinearMap.from_table(n, table)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"not a graph-map object: {exc}") from exc


def map_from_json(text: str) -> GraphLinearMap:
    try:
        return map_from_obj(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc
