"""Exhaustive search for the complete linear maps satisfying a preserver condition.

The search assigns an image to one generator at a time, trying every graph on
n vertices (the empty graph included).  Once generators e_1..e_k are assigned,
phi(G) is known for every G supported on them, so both directions of the
biconditional can be tested for the graphs that contain e_k; a violation kills
the whole subtree because later assignments never change those images.

Two further rules apply when G = K_n - e and K_n sit on different sides of the
condition (t <= 2 in independence mode, t >= n - 1 in clique mode, and always
when the invariant itself must be preserved).  Then phi(K_n - e) != K_n for
every generator e, so each generator owns an edge that no other image covers:

* ``private_edge``: an assigned generator whose image is already covered by the
  other assigned images can never get such an edge;
* ``edge_capacity``: the unassigned generators need pairwise distinct private
  edges outside the current union.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from . import bulk
from .errors import BudgetExceeded, InvalidThreshold
from .graph import num_pairs, pair_index, pairs
from .maps import (
    MODES,
    GraphLinearMap,
    all_edge_permutations,
    all_vertex_permutations,
    is_complete,
    is_vertex_permutation,
    structural_predicates,
)

SCHEMA = "preservers.classify/1"
RULES = ("biconditional", "private_edge", "edge_capacity", "incomplete", "leaf_condition")
FULL_MAX_ORDER = 4
SYMMETRY_MAX_ORDER = 5


@dataclass
class SearchOptions:
    pruning: bool = True
    symmetry: bool = False
    max_nodes: int = 10**9
    max_maps: int = 10**6
    threads: int = 1


class _OutOfBudget(Exception):
    pass


def generator_order(n: int) -> list[tuple[int, int]]:
    """Generators sorted so consecutive ones tend to share a vertex: (1,2),(1,3),(2,3),(1,4),..."""
    return sorted(pairs(n), key=lambda p: (p[1], p[0]))


@lru_cache(maxsize=None)
def _relabel_tables(n: int) -> tuple[tuple[int, ...], ...]:
    """For each permutation, the image index of every canonical pair."""
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        out.append(tuple(pair_index(n, perm[i - 1], perm[j - 1]) for i, j in pairs(n)))
    return tuple(out)


def _relabel_bits(bits: int, table: tuple[int, ...]) -> int:
    out = 0
    while bits:
        low = bits & -bits
        out |= 1 << table[low.bit_length() - 1]
        bits ^= low
    return out


@lru_cache(maxsize=None)
def orbit_representatives(n: int) -> frozenset[int]:
    """Smallest edge bitset in each isomorphism class of graphs on n vertices."""
    tables = _relabel_tables(n)
    reps = set()
    for g in range(1 << num_pairs(n)):
        if all(_relabel_bits(g, tb) >= g for tb in tables):
            reps.add(g)
    return frozenset(reps)


class _Problem:
    """Precomputed tables for one (n, mode, condition) search."""

    def __init__(self, n: int, mode: str, t: Optional[int]):
        self.n, self.mode, self.t = n, mode, t
        self.m = m = num_pairs(n)
        self.full = (1 << m) - 1
        inv = bulk.invariant_table(n, mode)
        # key(G) must equal key(phi(G)) for every G
        key = (inv == t) if t is not None else inv
        self.key_out = bytes(key.astype("uint8").tolist())
        self.pos_bits = [1 << pair_index(n, i, j) for i, j in generator_order(n)]
        canon = bulk.subset_unions(self.pos_bits)
        self.key_in = bytes(self.key_out[g] for g in canon.tolist())
        self.candidates = sorted(range(1 << m), key=lambda g: (g.bit_count(), g))
        # phi(K_n) = K_n is imposed for threshold conditions; for invariant
        # preservation it is forced when K_n is the only graph with its key.
        self.require_complete = t is not None
        forced = self.key_out.count(self.key_out[self.full]) == 1
        self.complete_known = self.require_complete or forced
        self.private_rule = self.complete_known and all(
            self.key_out[self.full ^ b] != self.key_out[self.full] for b in self.pos_bits
        )


@lru_cache(maxsize=16)
def _problem(n: int, mode: str, t: Optional[int]) -> _Problem:
    return _Problem(n, mode, t)


class _Search:
    def __init__(self, problem: _Problem, pruning: bool, max_nodes: int):
        self.p = problem
        self.pruning = pruning
        self.max_nodes = max_nodes
        self.nodes = 0
        self.pruned = dict.fromkeys(RULES, 0)
        self.solutions: list[tuple[int, ...]] = []
        if pruning:
            # the k-th generator on its own already has a determined image
            self.cands = [
                [c for c in problem.candidates if problem.key_out[c] == problem.key_in[1 << k]]
                for k in range(problem.m)
            ]
        else:
            self.cands = [problem.candidates] * problem.m

    def run(self, root_candidates=None) -> None:
        roots = self.cands[0] if root_candidates is None else root_candidates
        if self.p.m == 0:
            self._leaf([0], [])
            return
        self._expand(0, [0], [], roots)

    def _expand(self, k: int, prefix: list[int], images: list[int], cands) -> None:
        p = self.p
        m = p.m
        skipped = len(p.candidates) - len(self.cands[k])
        if k and skipped:
            self.pruned["biconditional"] += skipped
        key_out, key_in = p.key_out, p.key_in
        top = 1 << k
        cur_union = prefix[-1]
        capped = self.pruning and p.private_rule
        for idx, c in enumerate(cands):
            if capped and c.bit_count() > k + 1:
                # candidates come in order of edge count: the rest overflow too
                self.pruned["edge_capacity"] += len(cands) - idx
                break
            if self.nodes >= self.max_nodes:
                raise _OutOfBudget
            self.nodes += 1
            if self.pruning:
                if capped and (cur_union | c).bit_count() > k + 1:
                    self.pruned["edge_capacity"] += 1
                    continue
                bad = False
                for s in range(1, top):
                    if key_out[prefix[s] | c] != key_in[top | s]:
                        bad = True
                        break
                if bad:
                    self.pruned["biconditional"] += 1
                    continue
            new_prefix = prefix + [x | c for x in prefix]
            new_images = images + [c]
            if self.pruning and p.private_rule:
                whole = (top << 1) - 1
                if any(not img & ~new_prefix[whole ^ (1 << a)] for a, img in enumerate(new_images)):
                    self.pruned["private_edge"] += 1
                    continue
            if k + 1 == m:
                self._leaf(new_prefix, new_images)
            else:
                self._expand(k + 1, new_prefix, new_images, self.cands[k + 1])

    def _leaf(self, prefix: list[int], images: list[int]) -> None:
        p = self.p
        if p.require_complete and prefix[-1] != p.full:
            self.pruned["incomplete"] += 1
            return
        key_out, key_in = p.key_out, p.key_in
        if any(key_out[g] != key_in[s] for s, g in enumerate(prefix)):
            self.pruned["leaf_condition"] += 1
            return
        canonical = [0] * p.m
        for bit, img in zip(p.pos_bits, images):
            canonical[bit.bit_length() - 1] = img
        self.solutions.append(tuple(canonical))


def _run_task(n, mode, t, pruning, max_nodes, roots):
    search = _Search(_problem(n, mode, t), pruning, max_nodes)
    try:
        search.run(roots)
        exhausted = False
    except _OutOfBudget:
        exhausted = True
    return search.solutions, search.nodes, search.pruned, exhausted


@dataclass
class ClassificationReport:
    n: int
    t: Optional[int]
    mode: str
    satisfying_maps: tuple[GraphLinearMap, ...]
    counts: dict[str, int]
    nodes_expanded: int
    nodes_pruned_by_rule: dict[str, int]
    wall_time: float
    pruning: bool = True
    symmetry: bool = False
    finished: bool = True

    @property
    def condition(self) -> str:
        return "invariant" if self.t is None else "threshold"

    def summary(self, include_timing: bool = False) -> dict:
        out = {
            "schema": SCHEMA,
            "n": self.n,
            "t": self.t,
            "mode": self.mode,
            "condition": self.condition,
            "pruning": self.pruning,
            "symmetry": self.symmetry,
            "finished": self.finished,
            "maps": len(self.satisfying_maps),
            "counts": self.counts,
            "nodes_expanded": self.nodes_expanded,
            "nodes_pruned_by_rule": self.nodes_pruned_by_rule,
        }
        if include_timing:
            out["wall_time"] = round(self.wall_time, 6)
        return out

    def image_sets(self) -> set[tuple[int, ...]]:
        return {phi.bitsets() for phi in self.satisfying_maps}


def map_type(phi: GraphLinearMap) -> str:
    if is_vertex_permutation(phi) is not None:
        return "vertex_permutation"
    if all(g.size == 1 for g in phi.images) and is_complete(phi):
        return "edge_permutation"
    return "other"


def _expand_orbits(n: int, found: list[tuple[int, ...]], cap: int) -> Optional[set[tuple[int, ...]]]:
    # post-composing with a vertex permutation relabels every image and
    # preserves both alpha and omega of every graph
    out = set()
    for images in found:
        for tb in _relabel_tables(n):
            out.add(tuple(_relabel_bits(g, tb) for g in images))
        if len(out) > cap:
            return None
    return out


def _search(n: int, mode: str, t: Optional[int], options: SearchOptions) -> ClassificationReport:
    limit = SYMMETRY_MAX_ORDER if options.symmetry else FULL_MAX_ORDER
    if n > limit:
        hint = "" if options.symmetry else " (n = 5 needs symmetry reduction)"
        raise BudgetExceeded(f"n={n} is beyond the search budget n <= {limit}{hint}")
    start = time.perf_counter()
    problem = _problem(n, mode, t)
    probe = _Search(problem, options.pruning, options.max_nodes)
    roots = probe.cands[0] if problem.m else [0]
    if options.symmetry:
        reps = orbit_representatives(n)
        roots = [c for c in roots if c in reps]

    found: list[tuple[int, ...]] = []
    nodes = 0
    pruned = dict.fromkeys(RULES, 0)
    exhausted = False
    if problem.m == 0:
        tasks = [None]
    else:
        tasks = [[c] for c in roots]
    if options.threads > 1 and len(tasks) > 1:
        args = [(n, mode, t, options.pruning, options.max_nodes, r) for r in tasks]
        with ProcessPoolExecutor(max_workers=min(options.threads, len(tasks))) as pool:
            results = list(pool.map(_run_task, *zip(*args)))
    else:
        results = []
        used = 0
        for r in tasks:
            res = _run_task(n, mode, t, options.pruning, options.max_nodes - used, r)
            used += res[1]
            results.append(res)
            if res[3]:
                break
    for sols, cnt, pr, ex in results:
        found.extend(sols)
        nodes += cnt
        for k, v in pr.items():
            pruned[k] += v
        exhausted = exhausted or ex
    if problem.m and options.pruning:
        # root-level singleton filtering
        pruned["biconditional"] += len(problem.candidates) - len(probe.cands[0])
    if nodes > options.max_nodes:
        exhausted = True

    image_sets = _expand_orbits(n, found, options.max_maps) if options.symmetry else set(found)
    if image_sets is None or len(image_sets) > options.max_maps:
        raise BudgetExceeded(f"more than {options.max_maps} satisfying maps")
    maps = tuple(GraphLinearMap.from_bitsets(n, imgs) for imgs in sorted(image_sets))
    counts = dict.fromkeys(("vertex_permutation", "edge_permutation", "other"), 0)
    for phi in maps:
        counts[map_type(phi)] += 1
    report = ClassificationReport(
        n=n, t=t, mode=mode, satisfying_maps=maps, counts=counts,
        nodes_expanded=nodes, nodes_pruned_by_rule=pruned,
        wall_time=time.perf_counter() - start,
        pruning=options.pruning, symmetry=options.symmetry, finished=not exhausted,
    )
    if exhausted:
        raise BudgetExceeded(f"node budget {options.max_nodes} exhausted", partial=report)
    return report


def classify(
    n: int, t: int, mode: str = "independence", options: Optional[SearchOptions] = None
) -> ClassificationReport:
    """All complete linear maps phi on graphs of order n with inv(phi(G)) = t iff inv(G) = t."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    hi = n - 1 if mode == "independence" else n
    if not 1 <= t <= hi:
        raise InvalidThreshold(f"t={t} outside 1..{hi} for {mode} mode")
    return _search(n, mode, t, options or SearchOptions())


def classify_invariant_preserving(
    n: int, mode: str = "independence", options: Optional[SearchOptions] = None
) -> ClassificationReport:
    """All linear maps (completeness not imposed) with inv(phi(G)) = inv(G) for every G."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    return _search(n, mode, None, options or SearchOptions())


# -- verdicts ---------------------------------------------------------------------


@dataclass
class Verdict:
    name: str
    passed: bool
    message: str = ""
    missing: list[GraphLinearMap] = field(default_factory=list)
    unexpected: list[GraphLinearMap] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        from .maps import map_to_obj

        return {
            "name": self.name,
            "pass": self.passed,
            "message": self.message,
            "missing": [map_to_obj(p) for p in self.missing],
            "unexpected": [map_to_obj(p) for p in self.unexpected],
            "failures": self.failures,
            **self.data,
        }


def vertex_permutation_maps(n: int) -> set[tuple[int, ...]]:
    return {GraphLinearMap.from_vertex_permutation(p).bitsets() for p in all_vertex_permutations(n)}


def edge_permutation_maps(n: int) -> set[tuple[int, ...]]:
    return {phi.bitsets() for phi in all_edge_permutations(n)}


def _compare(name: str, n: int, found: set, expected: set, label: str) -> Verdict:
    missing = sorted(expected - found)
    extra = sorted(found - expected)
    passed = not missing and not extra
    msg = f"{len(found)} maps, all {label}" if passed else (
        f"{len(missing)} expected maps missing, {len(extra)} unexpected maps"
    )
    return Verdict(
        name, passed, msg,
        missing=[GraphLinearMap.from_bitsets(n, m) for m in missing],
        unexpected=[GraphLinearMap.from_bitsets(n, m) for m in extra],
        data={"found": len(found), "expected": len(expected)},
    )


def verify_theorem(report: ClassificationReport) -> Verdict:
    """Edge permutations at t = 1, vertex permutations at t >= 2 (independence mode)."""
    if report.mode != "independence" or report.t is None:
        return Verdict("classification", False, "only independence-mode threshold reports are covered")
    if not report.finished:
        return Verdict("classification", False, "search did not finish")
    found = report.image_sets()
    if report.t == 1:
        return _compare("classification", report.n, found, edge_permutation_maps(report.n), "edge permutations")
    return _compare("classification", report.n, found, vertex_permutation_maps(report.n), "vertex permutations")


def _acts_bijectively(phi: GraphLinearMap) -> bool:
    imgs = phi.bitsets()
    if len(set(imgs)) != len(imgs) or not is_complete(phi):
        return False
    if phi.n <= 5:
        values = bulk.subset_unions(imgs)
        return len(set(values.tolist())) == len(values)
    return True


def verify_lemma_consequences(report: ClassificationReport) -> Verdict:
    """Structural facts every satisfying map must have, checked on the search output."""
    t = report.t
    failures = []
    required = ["all_images_nonempty", "no_image_has_separate_edges", "all_images_single_edge"]
    if t is None or t >= 2:
        required += ["adjacent_generators_map_to_adjacent_edges", "star_alignment"]
    for idx, phi in enumerate(report.satisfying_maps):
        preds = structural_predicates(phi).as_dict()
        failures += [f"map {idx}: {name} false" for name in required if not preds[name]]
        if not _acts_bijectively(phi):
            failures.append(f"map {idx}: not bijective")
    msg = f"{len(report.satisfying_maps)} maps checked for {', '.join(required)}, bijective"
    return Verdict("structure", not failures, msg, failures=failures, data={"required": required})


def verify_all_t_preserver(n: int, options: Optional[SearchOptions] = None) -> Verdict:
    """Linear maps preserving alpha of every graph are exactly the vertex permutations.

    Only K_n has alpha 1, so such a map is complete and satisfies every
    threshold condition; the candidates are the intersection of the threshold
    classifications, each then checked on all graphs.  A direct search for the
    invariant-preserving maps (completeness not assumed) must agree.
    """
    options = options or SearchOptions()
    table = bulk.alpha_table(n)
    full = (1 << num_pairs(n)) - 1
    only_kn = bool(int((table == 1).sum()) == 1 and table[full] == 1)
    survivors: Optional[set] = None
    for t in range(1, n):
        found = classify(n, t, "independence", options).image_sets()
        survivors = found if survivors is None else survivors & found
    if survivors is None:
        survivors = {()}
    direct_ok = []
    for imgs in survivors:
        values = bulk.subset_unions(imgs)
        direct_ok.append(bool((table[values.astype("int64")] == table[: full + 1]).all()))
    kept = {s for s, ok in zip(survivors, direct_ok) if ok}
    direct = classify_invariant_preserving(n, "independence", options).image_sets()
    verdict = _compare("invariant-preservers", n, kept, vertex_permutation_maps(n), "vertex permutations")
    agree = direct == kept
    verdict.passed = verdict.passed and only_kn and agree and all(direct_ok)
    verdict.data.update(
        {
            "only_complete_graph_has_alpha_1": only_kn,
            "direct_search_agrees": agree,
            "direct_search_maps": len(direct),
        }
    )
    if not agree:
        verdict.message += "; direct search disagrees with the intersection"
    return verdict


def maps_jsonl(report: ClassificationReport) -> str:
    from .maps import map_to_obj

    return "".join(json.dumps(map_to_obj(p), separators=(",", ":")) + "\n" for p in report.satisfying_maps)
