"""Exhaustive checks of the independence-number properties over small graph spaces."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import bulk
from .errors import BudgetExceeded
from .extremal import EXHAUSTIVE_MAX_ORDER, check_turan_bound
from .graph import Graph, common_vertices_of_maximum_independent_sets, num_pairs

SCHEMA = "preservers.verify-lemmas/1"
UNION_EXHAUSTIVE_MAX_ORDER = 5
EDGE_STEP_MAX_ORDER = 6
RANDOM_PAIR_ORDER = 8


@dataclass
class SuiteResult:
    name: str
    n: int
    graphs: int
    checked: int
    violations: int
    exhaustive: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        d = asdict(self)
        extra = d.pop("extra")
        return {**d, "pass": self.passed, **extra}


def check_common_core(n: int, cross_check: bool = True) -> SuiteResult:
    """Graphs with alpha >= n/2 + 1: all maximum independent sets share >= 2*alpha - n vertices."""
    graphs = np.arange(1 << num_pairs(n), dtype=np.uint64)
    alpha, core = bulk.bulk_alpha_and_core(graphs, n)
    a = alpha.astype(np.int64)
    qualifying = 2 * a >= n + 2
    sizes = bulk.popcounts(core[qualifying]).astype(np.int64)
    violations = int((sizes < 2 * a[qualifying] - n).sum())
    mismatches = 0
    if cross_check:
        # the per-graph enumerator must agree with the vectorised sweep
        for g, c in zip(graphs[qualifying].tolist(), core[qualifying].tolist()):
            if common_vertices_of_maximum_independent_sets(Graph(n, g)).members != c:
                mismatches += 1
    slack = sizes - (2 * a[qualifying] - n)
    return SuiteResult(
        "common-core", n, int(graphs.size), int(qualifying.sum()), violations + mismatches,
        extra={"enumerator_mismatches": mismatches, "min_slack": int(slack.min()) if slack.size else None},
    )


def check_union_bound(n: int) -> SuiteResult:
    """alpha(G1 u G2) >= alpha(G1) + alpha(G2) - n for every ordered pair of graphs."""
    if n > UNION_EXHAUSTIVE_MAX_ORDER:
        raise BudgetExceeded(f"exhaustive pair scan limited to n <= {UNION_EXHAUSTIVE_MAX_ORDER}")
    size = 1 << num_pairs(n)
    table = bulk.alpha_table(n).astype(np.int16)
    g = np.arange(size, dtype=np.int64)
    violations = 0
    for g1 in range(size):
        union_alpha = table[g | g1]
        violations += int((union_alpha < table[g1] + table - n).sum())
    return SuiteResult("union-bound", n, size, size * size, violations)


def check_union_bound_random(n: int, samples: int, seed: int) -> SuiteResult:
    if n > bulk.BULK_MAX_ORDER:
        raise BudgetExceeded(f"random pair scan limited to n <= {bulk.BULK_MAX_ORDER}")
    m = num_pairs(n)
    rng = np.random.default_rng(seed)
    pairs_ = rng.integers(0, 1 << m, size=(samples, 2), dtype=np.uint64)
    a1 = bulk.bulk_alpha(pairs_[:, 0], n).astype(np.int64)
    a2 = bulk.bulk_alpha(pairs_[:, 1], n).astype(np.int64)
    au = bulk.bulk_alpha(pairs_[:, 0] | pairs_[:, 1], n).astype(np.int64)
    violations = int((au < a1 + a2 - n).sum())
    return SuiteResult("union-bound", n, 2 * samples, samples, violations, exhaustive=False, extra={"seed": seed})


def check_edge_step(n: int) -> SuiteResult:
    """Adding one edge lowers alpha by 0 or 1."""
    if n > EDGE_STEP_MAX_ORDER:
        raise BudgetExceeded(f"edge-step scan limited to n <= {EDGE_STEP_MAX_ORDER}")
    m = num_pairs(n)
    table = bulk.alpha_table(n).astype(np.int16)
    g = np.arange(1 << m, dtype=np.int64)
    checked = violations = 0
    for e in range(m):
        without = g[(g >> e) & 1 == 0]
        drop = table[without] - table[without | (1 << e)]
        checked += without.size
        violations += int(((drop != 0) & (drop != 1)).sum())
    return SuiteResult("edge-step", n, 1 << m, checked, violations)


def check_turan_suite(n: int) -> SuiteResult:
    reports = [check_turan_bound(n, r) for r in range(1, n + 1)]
    bad = [r for r in reports if not r.passed]
    return SuiteResult(
        "turan-bound", n, 1 << num_pairs(n), len(reports), len(bad),
        extra={"per_r": [r.to_dict() for r in reports]},
    )


def run_suites(n_max: int, samples: int = 100_000, seed: int = 0) -> list[SuiteResult]:
    if n_max > EXHAUSTIVE_MAX_ORDER:
        raise BudgetExceeded(f"exhaustive tiers are limited to n_max <= {EXHAUSTIVE_MAX_ORDER}")
    results = []
    for n in range(1, n_max + 1):
        results.append(check_common_core(n))
    for n in range(1, min(n_max, UNION_EXHAUSTIVE_MAX_ORDER) + 1):
        results.append(check_union_bound(n))
    if samples > 0:
        results.append(check_union_bound_random(RANDOM_PAIR_ORDER, samples, seed))
    for n in range(1, min(n_max, EDGE_STEP_MAX_ORDER) + 1):
        results.append(check_edge_step(n))
    for n in range(1, n_max + 1):
        results.append(check_turan_suite(n))
    return results


def summarize(results: list[SuiteResult], n_max: int, samples: int, seed: int) -> dict:
    by_name: dict[str, dict] = {}
    for r in results:
        entry = by_name.setdefault(r.name, {"pass": True, "runs": []})
        entry["pass"] = entry["pass"] and r.passed
        entry["runs"].append(r.to_dict())
    return {
        "schema": SCHEMA,
        "n_max": n_max,
        "samples": samples,
        "seed": seed,
        "pass": all(r.passed for r in results),
        "suites": by_name,
    }
