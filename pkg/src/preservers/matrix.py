"""Nonnegative symmetric zero-trace matrices and linear maps between them.

Matrices are stored as their strict upper triangle in canonical pair order with
exact rational entries.  A linear map is an m x m nonnegative coefficient
matrix whose column e is the image of the basis matrix B_e = E_ij + E_ji.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, InvalidThreshold, NotSignConsistent, ParseError, SizeMismatch
from .graph import Graph, independence_number, iter_bits, num_pairs, pair_index, pairs
from .maps import (
    GraphLinearMap,
    VertexPermutation,
    all_vertex_permutations,
    is_vertex_permutation,
    satisfies_preserver_condition,
)

MAX_VERIFY_ORDER = 4


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class SymMatrix:
    n: int
    ut: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.ut) != num_pairs(self.n):
            raise SizeMismatch(f"need {num_pairs(self.n)} upper-triangle entries, got {len(self.ut)}")
        if any(x < 0 for x in self.ut):
            raise ValueError("entries must be nonnegative")

    @classmethod
    def from_ut(cls, n: int, values: Sequence) -> SymMatrix:
        return cls(n, tuple(_frac(v) for v in values))

    @classmethod
    def zero(cls, n: int) -> SymMatrix:
        return cls.from_ut(n, [0] * num_pairs(n))

    @classmethod
    def ones_off_diagonal(cls, n: int) -> SymMatrix:
        """J_n - I_n."""
        return cls.from_ut(n, [1] * num_pairs(n))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> SymMatrix:
        n = len(rows)
        for i in range(n):
            if len(rows[i]) != n:
                raise SizeMismatch("matrix is not square")
            if _frac(rows[i][i]) != 0:
                raise ValueError("diagonal must be zero")
            for j in range(n):
                if _frac(rows[i][j]) != _frac(rows[j][i]):
                    raise ValueError("matrix is not symmetric")
        return cls.from_ut(n, [rows[i - 1][j - 1] for i, j in pairs(n)])

    def entry(self, i: int, j: int) -> Fraction:
        if i == j:
            return Fraction(0)
        return self.ut[pair_index(self.n, i, j)]

    def rows(self) -> list[list[Fraction]]:
        return [[self.entry(i, j) for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]


@dataclass(frozen=True)
class MatrixLinearMap:
    n: int
    coeffs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        m = num_pairs(self.n)
        if len(self.coeffs) != m or any(len(r) != m for r in self.coeffs):
            raise SizeMismatch(f"coefficient matrix must be {m}x{m}")
        if any(c < 0 for r in self.coeffs for c in r):
            raise ValueError("coefficients must be nonnegative")

    @classmethod
    def from_rows(cls, n: int, rows: Sequence[Sequence]) -> MatrixLinearMap:
        return cls(n, tuple(tuple(_frac(c) for c in r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> MatrixLinearMap:
        m = num_pairs(n)
        return cls.from_rows(n, [[int(f == e) for e in range(m)] for f in range(m)])

    @classmethod
    def permutation_similarity(cls, perm: VertexPermutation | tuple[int, ...]) -> MatrixLinearMap:
        """The map X -> P^T X P with P[i][sigma(i)] = 1."""
        if not isinstance(perm, VertexPermutation):
            perm = VertexPermutation(tuple(perm))
        n = perm.n
        m = num_pairs(n)
        rows = [[0] * m for _ in range(m)]
        for e, (i, j) in enumerate(pairs(n)):
            rows[pair_index(n, perm(i), perm(j))][e] = 1
        return cls.from_rows(n, rows)

    def scaled(self, k) -> MatrixLinearMap:
        k = _frac(k)
        return MatrixLinearMap(self.n, tuple(tuple(c * k for c in r) for r in self.coeffs))

    def column(self, e: int) -> tuple[Fraction, ...]:
        return tuple(r[e] for r in self.coeffs)


# -- graphs of matrices -----------------------------------------------------------------


def graph_of(a: SymMatrix) -> Graph:
    bits = 0
    for k, x in enumerate(a.ut):
        if x != 0:
            bits |= 1 << k
    return Graph(a.n, bits)


def adjacency_of(g: Graph) -> SymMatrix:
    m = num_pairs(g.n)
    return SymMatrix.from_ut(g.n, [(g.edges >> k) & 1 for k in range(m)])


def matrix_alpha(a: SymMatrix) -> int:
    """Largest order of a zero principal submatrix."""
    return independence_number(graph_of(a))


def apply_matrix_map(phi: MatrixLinearMap, x: SymMatrix) -> SymMatrix:
    if phi.n != x.n:
        raise SizeMismatch(f"map on order {phi.n} applied to matrix of order {x.n}")
    out = []
    for row in phi.coeffs:
        out.append(sum((c * v for c, v in zip(row, x.ut) if c and v), Fraction(0)))
    return SymMatrix(phi.n, tuple(out))


def induced_graph_map(phi: MatrixLinearMap) -> GraphLinearMap:
    """Generator e -> graph of phi(A(G_e)), checked to be union-compatible."""
    n = phi.n
    m = num_pairs(n)
    images = []
    for e in range(m):
        images.append(graph_of(apply_matrix_map(phi, adjacency_of(Graph(n, 1 << e)))))
    for e in range(m):
        for f in range(e + 1, m):
            both = graph_of(apply_matrix_map(phi, adjacency_of(Graph(n, (1 << e) | (1 << f)))))
            if both.edges != images[e].edges | images[f].edges:
                raise NotSignConsistent(f"support of phi(B_{e} + B_{f}) is not the union of supports")
    return GraphLinearMap(n, tuple(images))


def check_fixed_point(phi: MatrixLinearMap) -> bool:
    jmi = SymMatrix.ones_off_diagonal(phi.n)
    return apply_matrix_map(phi, jmi) == jmi


@dataclass(frozen=True)
class MatrixCounterexample:
    matrix: SymMatrix
    image: SymMatrix
    t: int
    value: int
    image_value: int

    def to_dict(self) -> dict:
        return {
            "matrix": sym_to_obj(self.matrix),
            "image": sym_to_obj(self.image),
            "t": self.t,
            "alpha": self.value,
            "image_alpha": self.image_value,
        }


def satisfies_matrix_preserver(phi: MatrixLinearMap, t: int) -> Optional[MatrixCounterexample]:
    """None iff alpha(phi(X)) = t <=> alpha(X) = t on all of S_n^+.

    Alpha of X and of phi(X) only depend on sign patterns, so the scan runs over
    the 2^m graphs; a failing graph is returned as its 0/1 adjacency matrix.
    """
    n = phi.n
    if not 2 <= t <= n - 1:
        raise InvalidThreshold(f"t={t} outside 2..{n - 1}")
    ce = satisfies_preserver_condition(induced_graph_map(phi), t, "independence")
    if ce is None:
        return None
    x = adjacency_of(ce.graph)
    y = apply_matrix_map(phi, x)
    return MatrixCounterexample(x, y, t, matrix_alpha(x), matrix_alpha(y))


def is_permutation_similarity(phi: MatrixLinearMap) -> Optional[VertexPermutation]:
    sigma = is_vertex_permutation(induced_graph_map(phi))
    if sigma is None:
        return None
    return sigma if MatrixLinearMap.permutation_similarity(sigma) == phi else None


# -- explicit matrix algebra (used to cross-check the coefficient form) -------------------


def permutation_matrix(perm: VertexPermutation) -> list[list[int]]:
    n = perm.n
    return [[int(perm(i) == j) for j in range(1, n + 1)] for i in range(1, n + 1)]


def similarity_transform(x: SymMatrix, perm: VertexPermutation) -> SymMatrix:
    """P^T X P by explicit matrix products."""
    p = permutation_matrix(perm)
    a = x.rows()
    n = x.n
    pt_a = [[sum(p[k][i] * a[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    out = [[sum(pt_a[i][k] * p[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return SymMatrix.from_rows(out)


def hadamard(r: SymMatrix, y: SymMatrix) -> SymMatrix:
    return SymMatrix(r.n, tuple(a * b for a, b in zip(r.ut, y.ut)))


def hadamard_factor(phi: MatrixLinearMap) -> Optional[tuple[VertexPermutation, SymMatrix]]:
    """(sigma, R) with phi(X) = R o (P^T X P), when the support of phi is a vertex permutation."""
    sigma = is_vertex_permutation(induced_graph_map(phi))
    if sigma is None:
        return None
    n = phi.n
    r = [Fraction(0)] * num_pairs(n)
    for e, (i, j) in enumerate(pairs(n)):
        f = pair_index(n, sigma(i), sigma(j))
        r[f] = phi.coeffs[f][e]
    return sigma, SymMatrix(n, tuple(r))


# -- theorem check ------------------------------------------------------------------------


def _random_control(rng: np.random.Generator, n: int) -> tuple[str, MatrixLinearMap]:
    m = num_pairs(n)
    kind = ("dense", "sparse", "vertex-support", "edge-support")[int(rng.integers(4))]
    rows = [[Fraction(0)] * m for _ in range(m)]
    if kind == "dense":
        for f in range(m):
            for e in range(m):
                rows[f][e] = Fraction(int(rng.integers(0, 65)), 64)
    elif kind == "sparse":
        for f in range(m):
            for e in range(m):
                if rng.random() < 1.5 / m:
                    rows[f][e] = Fraction(int(rng.integers(1, 65)), 64)
    else:
        if kind == "vertex-support":
            perm = VertexPermutation(tuple(int(v) + 1 for v in rng.permutation(n)))
            target = [pair_index(n, perm(i), perm(j)) for i, j in pairs(n)]
        else:
            target = [int(v) for v in rng.permutation(m)]
        for e, f in enumerate(target):
            rows[f][e] = Fraction(int(rng.integers(1, 65)), 64)
    if rng.random() < 0.5:
        kind += "+rescaled"
        for f in range(m):
            s = sum(rows[f])
            if s:
                rows[f] = [c / s for c in rows[f]]
    return kind, MatrixLinearMap.from_rows(n, rows)


def verify_matrix_theorem(n: int, t: int, samples: int = 1000, seed: int = 0) -> dict:
    """Check the permutation-similarity characterisation at order n and threshold t.

    Sufficiency is checked on every permutation similarity.  Necessity goes
    through the graph classification: a passing map induces a satisfying
    complete graph map, hence a vertex permutation, and the fixed-point
    condition then pins every coefficient to 1.  Seeded random tensors act as
    negative controls.
    """
    from .classifier import classify, verify_theorem

    if not 2 <= t <= n - 1:
        raise InvalidThreshold(f"t={t} outside 2..{n - 1}")
    if n > MAX_VERIFY_ORDER:
        raise BudgetExceeded(f"matrix verification limited to n <= {MAX_VERIFY_ORDER}")

    sufficiency_fail = []
    similarities = 0
    for perm in all_vertex_permutations(n):
        phi = MatrixLinearMap.permutation_similarity(perm)
        ok = (
            check_fixed_point(phi)
            and satisfies_matrix_preserver(phi, t) is None
            and is_permutation_similarity(phi) == perm
        )
        similarities += ok
        if not ok:
            sufficiency_fail.append(list(perm.sigma))

    report = classify(n, t, "independence")
    graph_verdict = verify_theorem(report)
    lift_fail = []
    for gmap in report.satisfying_maps:
        sigma = is_vertex_permutation(gmap)
        if sigma is None:
            lift_fail.append("graph map is not a vertex permutation")
            continue
        # a tensor inducing gmap has support exactly the generator permutation;
        # each row then holds one coefficient and the row sum 1 fixes it
        support_rows = [[0] * len(gmap.images) for _ in gmap.images]
        for e, g in enumerate(gmap.images):
            for f in iter_bits(g.edges):
                support_rows[f][e] = 1
        if any(sum(r) != 1 for r in support_rows):
            lift_fail.append(f"support of {list(sigma.sigma)} has a row without a single entry")
        pinned = MatrixLinearMap.from_rows(n, support_rows)
        if not (check_fixed_point(pinned) and is_permutation_similarity(pinned) == sigma):
            lift_fail.append(f"pinned tensor for {list(sigma.sigma)} is not P^T X P")

    outcomes = {"fails_fixed_point": 0, "fails_preserver": 0, "permutation_similarity": 0}
    kinds: dict[str, int] = {}
    anomalies = []
    children = np.random.SeedSequence(seed).spawn(samples)
    for idx, child in enumerate(children):
        kind, phi = _random_control(np.random.default_rng(child), n)
        kinds[kind] = kinds.get(kind, 0) + 1
        fixed = check_fixed_point(phi)
        preserves = satisfies_matrix_preserver(phi, t) is None
        similar = is_permutation_similarity(phi) is not None
        if similar:
            outcomes["permutation_similarity"] += 1
            if not (fixed and preserves):
                anomalies.append({"sample": idx, "kind": kind, "issue": "similarity fails a hypothesis"})
        elif not fixed:
            outcomes["fails_fixed_point"] += 1
        elif not preserves:
            outcomes["fails_preserver"] += 1
        else:
            anomalies.append({"sample": idx, "kind": kind, "issue": "passes both hypotheses, not P^T X P"})

    passed = (
        not sufficiency_fail and graph_verdict.passed and not lift_fail and not anomalies
        and len(report.satisfying_maps) == similarities
    )
    return {
        "schema": "preservers.verify-matrix/1",
        "n": n,
        "t": t,
        "samples": samples,
        "seed": seed,
        "pass": passed,
        "permutation_similarities": similarities,
        "sufficiency_failures": sufficiency_fail,
        "graph_classification": graph_verdict.message,
        "graph_classification_pass": graph_verdict.passed,
        "lift_failures": lift_fail,
        "control_outcomes": outcomes,
        "control_kinds": dict(sorted(kinds.items())),
        "anomalies": anomalies,
    }


# -- serialization --------------------------------------------------------------------


def sym_to_obj(a: SymMatrix) -> dict:
    return {"n": a.n, "ut": [str(x) for x in a.ut]}


def sym_from_obj(obj) -> SymMatrix:
    try:
        return SymMatrix.from_ut(obj["n"], [Fraction(s) for s in obj["ut"]])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a matrix object: {exc}") from exc


def matrix_map_to_obj(phi: MatrixLinearMap) -> dict:
    return {"n": phi.n, "coeffs": [[str(c) for c in r] for r in phi.coeffs]}


def matrix_map_from_obj(obj) -> MatrixLinearMap:
    try:
        return MatrixLinearMap.from_rows(obj["n"], [[Fraction(s) for s in r] for r in obj["coeffs"]])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a matrix-map object: {exc}") from exc


def to_json(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))
