"""Turan graphs, their complements and the minimum-size bound for a given alpha."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb, factorial, prod

import numpy as np

from . import bulk
from .errors import BudgetExceeded, InvalidSpec
from .graph import Graph, iter_bits, num_pairs

EXHAUSTIVE_MAX_ORDER = 7


@dataclass(frozen=True)
class TuranSpec:
    n: int
    r: int

    def __post_init__(self):
        if not (isinstance(self.n, int) and isinstance(self.r, int) and 1 <= self.r <= self.n <= 32):
            raise InvalidSpec(f"need 1 <= r <= n <= 32, got n={self.n}, r={self.r}")

    def part_sizes(self) -> list[int]:
        """Part sizes, larger parts first."""
        q, extra = divmod(self.n, self.r)
        return [q + 1] * extra + [q] * (self.r - extra)

    def parts(self) -> list[range]:
        out, start = [], 1
        for s in self.part_sizes():
            out.append(range(start, start + s))
            start += s
        return out


def _as_spec(spec_or_n, r=None) -> TuranSpec:
    return spec_or_n if isinstance(spec_or_n, TuranSpec) else TuranSpec(spec_or_n, r)


def turan_complement(spec: TuranSpec | int, r: int | None = None) -> Graph:
    """Disjoint cliques on consecutive vertex intervals."""
    spec = _as_spec(spec, r)
    edges = [(a, b) for part in spec.parts() for a in part for b in part if a < b]
    return Graph.from_edges(spec.n, edges)


def turan_graph(spec: TuranSpec | int, r: int | None = None) -> Graph:
    """Complete r-partite graph with near-equal parts on consecutive intervals."""
    spec = _as_spec(spec, r)
    parts = spec.parts()
    edges = [
        (a, b)
        for x, p in enumerate(parts)
        for q in parts[x + 1 :]
        for a in p
        for b in q
    ]
    return Graph.from_edges(spec.n, edges)


def turan_min_edges(n: int, r: int) -> Fraction:
    TuranSpec(n, r)
    return Fraction(n * n, 2 * r) - Fraction(n, 2)


def turan_complement_labelings(n: int, r: int) -> int:
    """Number of labeled graphs on {1..n} isomorphic to the Turan complement."""
    sizes = TuranSpec(n, r).part_sizes()
    return factorial(n) // (
        prod(factorial(s) for s in sizes) * prod(factorial(c) for c in Counter(sizes).values())
    )


def components(g: Graph) -> list[int]:
    """Vertex bitmasks of the connected components, ordered by smallest vertex."""
    adj = g.adjacency()
    seen = 0
    comps = []
    for v in range(g.n):
        if seen >> v & 1:
            continue
        comp = frontier = 1 << v
        while frontier:
            nxt = 0
            for u in iter_bits(frontier):
                nxt |= adj[u]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        comps.append(comp)
    return comps


def is_turan_complement_isomorphic(g: Graph, r: int) -> bool:
    if not 1 <= r <= g.n:
        return False
    adj = g.adjacency()
    comps = components(g)
    if len(comps) != r:
        return False
    for comp in comps:
        for v in iter_bits(comp):
            if adj[v] != comp & ~(1 << v):
                return False
    sizes = sorted((c.bit_count() for c in comps), reverse=True)
    return sizes == TuranSpec(g.n, r).part_sizes()


@dataclass
class TuranReport:
    n: int
    r: int
    bound: str
    min_size: int
    extremal_count: int
    passed: bool
    exhaustive: bool
    graphs_scanned: int
    graphs_with_alpha: int
    turan_size: int
    labelings: int
    bound_violations: int = 0
    extremal_mismatches: int = 0

    def to_dict(self) -> dict:
        d = asdict(self)
        head = {k: d.pop(k) for k in ("n", "r", "bound", "min_size", "extremal_count")}
        head["pass"] = d.pop("passed")
        return {**head, **d}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _violates_bound(sizes: np.ndarray, n: int, r: int) -> np.ndarray:
    # size >= n^2/2r - n/2  <=>  2r*size >= n^2 - r*n, all in integers
    return 2 * r * sizes.astype(np.int64) < n * n - r * n


def check_turan_bound(n: int, r: int, samples: int = 0, seed: int = 0) -> TuranReport:
    """Scan graphs on n vertices and test the edge bound for alpha = r.

    Exhaustive for n <= 7.  Beyond that only the inequality is checked, on
    ``samples`` seeded random graphs; the equality case needs the full space.
    """
    spec = TuranSpec(n, r)
    bound = turan_min_edges(n, r)
    t_size = sum(comb(s, 2) for s in spec.part_sizes())
    labelings = turan_complement_labelings(n, r)
    m = num_pairs(n)

    if n > EXHAUSTIVE_MAX_ORDER:
        if samples <= 0:
            raise BudgetExceeded(f"exhaustive scan limited to n <= {EXHAUSTIVE_MAX_ORDER}; pass samples")
        if n > bulk.BULK_MAX_ORDER:
            raise BudgetExceeded(f"sampled scan limited to n <= {bulk.BULK_MAX_ORDER}")
        rng = np.random.default_rng(seed)
        bits = rng.integers(0, 2, size=(samples, m), dtype=np.uint64)
        graphs = (bits << np.arange(m, dtype=np.uint64)).sum(axis=1, dtype=np.uint64)
        alphas = bulk.bulk_alpha(graphs, n)
        sizes = bulk.popcounts(graphs[alphas == r])
        violations = int(_violates_bound(sizes, n, r).sum())
        return TuranReport(
            n, r, str(bound), int(sizes.min()) if sizes.size else -1, 0,
            violations == 0, False, samples, int(sizes.size), t_size, labelings, violations,
        )

    graphs = np.arange(1 << m, dtype=np.uint64)
    with_r = bulk.alpha_table(n) == r
    sizes = bulk.popcounts(graphs[with_r])
    violations = int(_violates_bound(sizes, n, r).sum())
    min_size = int(sizes.min())
    minimal = set(graphs[with_r][sizes == min_size].tolist())

    same_size = graphs[bulk.popcounts(graphs) == t_size].tolist()
    extremal = {e for e in same_size if is_turan_complement_isomorphic(Graph(n, e), r)}
    mismatches = len(minimal ^ extremal)
    passed = violations == 0 and mismatches == 0 and min_size == t_size and len(extremal) == labelings
    return TuranReport(
        n, r, str(bound), min_size, len(minimal), passed, True, 1 << m, int(with_r.sum()),
        t_size, labelings, violations, mismatches,
    )
