# src/backend/bispec/search.py
# Operator algebra by order: all D = sum_{i<=s} d^i F_i with deg F_i <= i and
# P_n D = Lambda_n P_n on a training range of n, as an exact solution space.

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import perm
from typing import Dict, List, Optional, Sequence, Tuple

from src.backend.bispec.diffop import EigenSeq, RightDiffOp
from src.backend.blockop.tridiag import BlockTridiag
from src.backend.exact.linalg import nullspace_of_rows, rref
from src.backend.exact.matpoly import MatPoly, matpoly_derivative
from src.backend.exact.matrix import MatrixR
from src.backend.mop.polys import polys_from_recurrence
from src.shared.errors import InsufficientLevels, InvalidCount

_logger = logging.getLogger(__name__)

# (i, j, a, b): entry (a, b) of the x^j coefficient of F_i
Unknown = Tuple[int, int, int, int]
Vector = List[Fraction]

DEFAULT_N_VERIFY = 5


def default_n_train(max_order: int) -> int:
    return 2 * max_order + 6


@dataclass(frozen=True)
class SearchResult:
    block_size: int
    max_order: int
    n_train: int
    n_verify: int
    dims: Tuple[int, ...]
    basis: Dict[int, Tuple[RightDiffOp, ...]] = field(default_factory=dict)
    verify_failures: Tuple[int, ...] = ()

    def dimension(self, s: int) -> int:
        return self.dims[s]

    def new(self, s: int) -> int:
        """new(s) = d(s) - d(s-1), with new(0) = d(0)."""
        return self.dims[s] - (self.dims[s - 1] if s >= 1 else 0)

    @property
    def minimal_order(self) -> Optional[int]:
        """Least s >= 1 with d(s) > d(0)."""
        for s in range(1, len(self.dims)):
            if self.dims[s] > self.dims[0]:
                return s
        return None


# =========================
# Condition assembly
# =========================

def _unknowns(max_order: int, size: int) -> List[Unknown]:
    return [
        (i, j, a, b)
        for i in range(max_order + 1)
        for j in range(i + 1)
        for a in range(size)
        for b in range(size)
    ]


def _condition_rows(p: MatPoly, n: int, unknowns: Sequence[Unknown], max_order: int) -> List[Dict[int, Fraction]]:
    """
    Linear conditions for P_n D = Lambda_n P_n, one per (k, r, c) with k < n:

        [x^k] (P_n D)  -  Lambda_n [x^k] P_n  = 0,   Lambda_n = sum_i [n]_i [x^i] F_i.

    Each row is sparse, keyed by unknown index.
    """
    size = p.size
    derivatives = [matpoly_derivative(p, i) for i in range(max_order + 1)]
    rows: Dict[Tuple[int, int, int], Dict[int, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
    for u, (i, j, a, b) in enumerate(unknowns):
        d = derivatives[i]
        if not d.is_zero():
            for k in range(j, min(n, j + d.degree + 1)):
                block = d.coefficient(k - j)
                for r in range(size):
                    value = block[(r, a)]
                    if value:
                        rows[(k, r, b)][u] += value
        if j == i and n >= i:
            weight = perm(n, i)
            for k in range(n):
                block = p.coefficient(k)
                for c in range(size):
                    value = block[(b, c)]
                    if value:
                        rows[(k, a, c)][u] -= weight * value
    return [dict(row) for _, row in sorted(rows.items())]


def _project(rows: List[Dict[int, Fraction]], vectors: List[Vector]) -> List[Vector]:
    """Condition rows applied to each basis vector: one row per condition, one column per vector."""
    out = []
    for row in rows:
        projected = [sum((value * vec[u] for u, value in row.items()), Fraction(0)) for vec in vectors]
        if any(projected):
            out.append(projected)
    return out


def _canonical(vectors: List[Vector]) -> List[Vector]:
    reduced, pivots = rref(vectors)
    return [list(reduced[r]) for r in range(len(pivots))]


def _restrict(vectors: List[Vector], rows: List[Dict[int, Fraction]]) -> Tuple[List[Vector], bool]:
    """Subspace of span(vectors) satisfying `rows`; the flag tells whether it shrank."""
    if not vectors:
        return vectors, False
    projected = _project(rows, vectors)
    if not projected:
        return vectors, False
    kernel = nullspace_of_rows(projected, len(vectors))
    width = len(vectors[0])
    combined = [
        [sum((y[t] * vectors[t][u] for t in range(len(vectors)) if y[t]), Fraction(0)) for u in range(width)]
        for y in kernel
    ]
    return (_canonical(combined) if combined else []), True


def _operator(vector: Vector, unknowns: Sequence[Unknown], max_order: int, size: int) -> RightDiffOp:
    grid = [[[[Fraction(0)] * size for _ in range(size)] for _ in range(i + 1)] for i in range(max_order + 1)]
    for value, (i, j, a, b) in zip(vector, unknowns):
        grid[i][j][a][b] = value
    coeffs = []
    for i in range(max_order + 1):
        coeffs.append(MatPoly(size, tuple(MatrixR(tuple(tuple(r) for r in c)) for c in grid[i])))
    while len(coeffs) > 1 and coeffs[-1].is_zero():
        coeffs.pop()
    return RightDiffOp(size, tuple(coeffs))


def _order_subspace(vectors: List[Vector], unknowns: Sequence[Unknown], s: int) -> List[Vector]:
    """Elements of span(vectors) whose F_i vanish for i > s."""
    high = [u for u, key in enumerate(unknowns) if key[0] > s]
    if not vectors:
        return []
    constraints = [[vec[u] for vec in vectors] for u in high]
    constraints = [row for row in constraints if any(row)]
    kernel = nullspace_of_rows(constraints, len(vectors)) if constraints else nullspace_of_rows([], len(vectors))
    width = len(vectors[0])
    combined = [
        [sum((y[t] * vectors[t][u] for t in range(len(vectors)) if y[t]), Fraction(0)) for u in range(width)]
        for y in kernel
    ]
    return _canonical(combined) if combined else []


# =========================
# Search
# =========================

def algebra_search(
    l: BlockTridiag,
    max_order: int,
    n_train: Optional[int] = None,
    n_verify: int = DEFAULT_N_VERIFY,
) -> SearchResult:
    """
    Exact solution space of operators of order <= max_order, trained on
    n < n_train and re-verified on n_train <= n < n_train + n_verify. Basis
    operators are reported for every order that adds new elements.
    """
    if max_order < 0:
        raise InvalidCount(f"max order must be >= 0, got {max_order}")
    n_train = default_n_train(max_order) if n_train is None else n_train
    if n_train < 1 or n_verify < 0:
        raise InvalidCount(f"need n_train >= 1 and n_verify >= 0, got {n_train} and {n_verify}")
    if l.levels < n_train + n_verify:
        raise InsufficientLevels(f"search needs {n_train + n_verify} levels, operator has {l.levels}")

    size = l.block_size
    unknowns = _unknowns(max_order, size)
    family = polys_from_recurrence(l, n_train + n_verify)
    vectors: List[Vector] = nullspace_of_rows([], len(unknowns))  # type: ignore[assignment]
    vectors = [list(v) for v in vectors]

    for n in range(n_train):
        rows = _condition_rows(family[n], n, unknowns, max_order)
        vectors, shrank = _restrict(vectors, rows)
        if shrank:
            _logger.debug("n=%d: %d conditions, dimension %d", n, len(rows), len(vectors))

    failures: List[int] = []
    for n in range(n_train, n_train + n_verify):
        rows = _condition_rows(family[n], n, unknowns, max_order)
        vectors, shrank = _restrict(vectors, rows)
        if shrank:
            failures.append(n)
            _logger.warning("re-verification at n=%d shrank the space to %d", n, len(vectors))

    dims = []
    basis: Dict[int, Tuple[RightDiffOp, ...]] = {}
    for s in range(max_order + 1):
        subspace = _order_subspace(vectors, unknowns, s)
        dims.append(len(subspace))
        previous = dims[s - 1] if s >= 1 else 0
        if dims[s] > previous:
            basis[s] = tuple(_operator(v, unknowns, max_order, size) for v in subspace)

    _logger.info("algebra search to order %d on %d levels: dims %s", max_order, l.levels, dims)
    return SearchResult(size, max_order, n_train, n_verify, tuple(dims), basis, tuple(failures))


# =========================
# Eigenvalue membership
# =========================

def span_coefficients(
    target: EigenSeq,
    generators: Sequence[EigenSeq],
    count: int,
) -> Optional[Tuple[Fraction, ...]]:
    """
    Coefficients c with target_n = sum_g c_g generator_g(n) for n < count, or
    None when no such combination exists. Free coefficients are set to zero.
    """
    size = target.block_size
    rows = []
    for n in range(count):
        values = [g.at(n) for g in generators]
        goal = target.at(n)
        for r in range(size):
            for c in range(size):
                rows.append([v[(r, c)] for v in values] + [goal[(r, c)]])
    width = len(generators)
    reduced, pivots = rref(rows, n_cols=width)
    for row in reduced[len(pivots):]:
        if row[width] != 0:
            return None
    solution = [Fraction(0)] * width
    for r, c in enumerate(pivots):
        solution[c] = reduced[r][width]
    return tuple(solution)


def _flatten(d: RightDiffOp, order: int) -> List[Fraction]:
    out: List[Fraction] = []
    for i in range(order + 1):
        f = d.coefficient(i)
        for j in range(i + 1):
            out.extend(f.coefficient(j).entries())
    return out


def operator_span_coefficients(target: RightDiffOp, generators: Sequence[RightDiffOp]) -> Optional[Tuple[Fraction, ...]]:
    """Coefficients c with target = sum_g c_g g, compared coefficient by coefficient; None if outside the span."""
    order = max([target.order] + [g.order for g in generators])
    columns = [_flatten(g, order) for g in generators]
    goal = _flatten(target, order)
    rows = [[col[k] for col in columns] + [goal[k]] for k in range(len(goal))]
    width = len(generators)
    reduced, pivots = rref(rows, n_cols=width)
    for row in reduced[len(pivots):]:
        if row[width] != 0:
            return None
    solution = [Fraction(0)] * width
    for r, c in enumerate(pivots):
        solution[c] = reduced[r][width]
    return tuple(solution)
