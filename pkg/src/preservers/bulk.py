"""Vectorised invariants over whole graph spaces.

Graphs are passed around as numpy arrays of canonical edge bitsets.  The
independence number of every graph is found by sweeping vertex subsets from
largest to smallest: the first subset whose internal pairs avoid the edge set
fixes alpha.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .graph import num_pairs, pairs

# alpha tables over all 2**m graphs are materialised up to this order (2**21 bytes).
TABLE_MAX_ORDER = 7
BULK_MAX_ORDER = 11  # m = 55 still fits a uint64 bitset


@lru_cache(maxsize=None)
def subset_pair_masks(n: int) -> np.ndarray:
    """Entry S is the bitset of all vertex pairs inside vertex subset S."""
    masks = np.zeros(1 << n, dtype=np.uint64)
    for k, (i, j) in enumerate(pairs(n)):
        both = (1 << (i - 1)) | (1 << (j - 1))
        sel = (np.arange(1 << n) & both) == both
        masks[sel] |= np.uint64(1 << k)
    return masks


@lru_cache(maxsize=None)
def _subsets_of_size(n: int) -> tuple[np.ndarray, ...]:
    sizes = np.bitwise_count(np.arange(1 << n, dtype=np.uint64))
    return tuple(np.flatnonzero(sizes == s) for s in range(n + 1))


def _check_bulk_order(n: int) -> None:
    if not 1 <= n <= BULK_MAX_ORDER:
        raise ValueError(f"bulk evaluation supports 1 <= n <= {BULK_MAX_ORDER}, got {n}")


def bulk_alpha(graphs, n: int) -> np.ndarray:
    _check_bulk_order(n)
    graphs = np.asarray(graphs, dtype=np.uint64)
    alpha = np.zeros(graphs.shape, dtype=np.uint8)
    pm = subset_pair_masks(n)
    todo = np.arange(graphs.size)
    flat = graphs.reshape(-1)
    out = alpha.reshape(-1)
    for size in range(n, 0, -1):
        if todo.size == 0:
            break
        sub = flat[todo]
        found = np.zeros(todo.size, dtype=bool)
        for s in _subsets_of_size(n)[size]:
            found |= (sub & pm[s]) == 0
        out[todo[found]] = size
        todo = todo[~found]
    return alpha


def bulk_alpha_and_core(graphs, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Alpha of each graph plus the intersection of all its maximum independent sets."""
    _check_bulk_order(n)
    flat = np.asarray(graphs, dtype=np.uint64).reshape(-1)
    alpha = np.zeros(flat.size, dtype=np.uint8)
    core = np.zeros(flat.size, dtype=np.uint64)
    pm = subset_pair_masks(n)
    full = np.uint64((1 << n) - 1)
    todo = np.arange(flat.size)
    for size in range(n, 0, -1):
        if todo.size == 0:
            break
        sub = flat[todo]
        found = np.zeros(todo.size, dtype=bool)
        common = np.full(todo.size, full, dtype=np.uint64)
        for s in _subsets_of_size(n)[size]:
            hit = (sub & pm[s]) == 0
            found |= hit
            common[hit] &= np.uint64(s)
        alpha[todo[found]] = size
        core[todo[found]] = common[found]
        todo = todo[~found]
    return alpha, core


@lru_cache(maxsize=None)
def alpha_table(n: int) -> np.ndarray:
    """Alpha of every graph on n vertices, indexed by edge bitset (read-only)."""
    if not 1 <= n <= TABLE_MAX_ORDER:
        raise ValueError(f"alpha tables are built for 1 <= n <= {TABLE_MAX_ORDER}")
    table = bulk_alpha(np.arange(1 << num_pairs(n), dtype=np.uint64), n)
    table.flags.writeable = False
    return table


@lru_cache(maxsize=None)
def omega_table(n: int) -> np.ndarray:
    full = (1 << num_pairs(n)) - 1
    table = alpha_table(n)[np.arange(full + 1, dtype=np.int64) ^ full]
    table.flags.writeable = False
    return table


def invariant_table(n: int, mode: str) -> np.ndarray:
    if mode == "independence":
        return alpha_table(n)
    if mode == "clique":
        return omega_table(n)
    raise ValueError(f"unknown mode {mode!r}")


def bulk_invariant(graphs, n: int, mode: str) -> np.ndarray:
    graphs = np.asarray(graphs, dtype=np.uint64)
    if n <= TABLE_MAX_ORDER:
        return invariant_table(n, mode)[graphs.astype(np.int64)]
    if mode == "clique":
        graphs = graphs ^ np.uint64((1 << num_pairs(n)) - 1)
    elif mode != "independence":
        raise ValueError(f"unknown mode {mode!r}")
    return bulk_alpha(graphs, n)


def subset_unions(values) -> np.ndarray:
    """Entry S is the bitwise OR of values[k] over the set bits k of S."""
    out = np.zeros(1 << len(values), dtype=np.uint64)
    for k, v in enumerate(values):
        half = 1 << k
        out[half : 2 * half] = out[:half] | np.uint64(v)
    return out


def popcounts(values) -> np.ndarray:
    return np.bitwise_count(np.asarray(values, dtype=np.uint64))
