"""
Perfection test: is the circumscribed quadric of a point set unique?

A point set in Z^n is perfect when the degree-<=2 polynomials vanishing on it
form a one-dimensional space whose generator has a positive definite quadratic
part. The generator, normalized to a primitive integer Gram matrix, is the
affine quadratic function Q[x - c] - rho^2 of the Delaunay sphere.

Monomial order (columns of the evaluation matrix):
    x_i * x_j for i <= j (row-major), then x_i, then the constant 1
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from perfect_delaunay.core.exactmath import (
    SymmetricRationalMatrix,
    affine_rank,
    content,
    dot,
    is_positive_definite,
    primitive_integer_vector,
    row_reduce,
    solve,
)
from perfect_delaunay.core.qlattice import AffineQuadraticFunction, LatticePoint, QuadraticForm
from perfect_delaunay.exceptions import DimensionMismatchError, NotFullDimensionalError, NotPerfectError

log = logging.getLogger(__name__)


def monomials(n: int) -> tuple[tuple[int, ...], ...]:
    """Exponent index tuples: (i, j) for x_i x_j, (i,) for x_i, () for 1."""
    quadratic = tuple((i, j) for i in range(n) for j in range(i, n))
    linear = tuple((i,) for i in range(n))
    return quadratic + linear + ((),)


@dataclass(frozen=True)
class EvaluationMatrix:
    dimension: int
    columns: tuple[tuple[int, ...], ...]
    rows: tuple[tuple[int, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)


@dataclass(frozen=True)
class PerfectionVerdict:
    nullspace_dimension: int
    coefficients: tuple[int, ...] | None       # normalized generator over monomials(n)
    generator: AffineQuadraticFunction | None
    is_perfect: bool


def evaluation_matrix(points: Sequence[LatticePoint]) -> EvaluationMatrix:
    if not points:
        raise ValueError("evaluation matrix of an empty point set")
    n = len(points[0])
    if any(len(p) != n for p in points):
        raise DimensionMismatchError("points of mixed dimension")
    cols = monomials(n)
    rows = tuple(tuple(math.prod(p[i] for i in mono) for mono in cols) for p in points)
    return EvaluationMatrix(n, cols, rows)


def _quadratic_part(n: int, coefficients: Sequence) -> tuple[tuple[Fraction, ...], ...]:
    """Gram matrix of the quadratic part of a coefficient vector."""
    g = [[Fraction(0)] * n for _ in range(n)]
    k = 0
    for i in range(n):
        for j in range(i, n):
            a = Fraction(coefficients[k])
            if i == j:
                g[i][i] = a
            else:
                g[i][j] = g[j][i] = a / 2
            k += 1
    return tuple(tuple(row) for row in g)


def _to_affine(n: int, coefficients: Sequence[int]) -> AffineQuadraticFunction | None:
    """
    Turn x^T A x + b.x + c0 into Q[x - c] - rho^2 with Q primitive integral.

    Returns None when the quadratic part is not positive definite.
    """
    gram = _quadratic_part(n, coefficients)
    scale = Fraction(math.lcm(*(x.denominator for row in gram for x in row)))
    scale /= content(int(x * scale) for row in gram for x in row) or 1
    gram = tuple(tuple(x * scale for x in row) for row in gram)
    sym = SymmetricRationalMatrix(gram)
    if not is_positive_definite(sym):
        return None
    m = n * (n + 1) // 2
    linear = [Fraction(b) * scale for b in coefficients[m:m + n]]
    constant = Fraction(coefficients[-1]) * scale
    # x^T G x + b.x + c0 = (x - c)^T G (x - c) - (c^T G c - c0) with G c = -b / 2
    center = solve(gram, [-b / 2 for b in linear])
    radius2 = dot(center, [dot(row, center) for row in gram]) - constant
    return AffineQuadraticFunction(QuadraticForm(sym), center, radius2)


def perfection_check(points: Sequence[LatticePoint]) -> PerfectionVerdict:
    """
    Nullspace of the evaluation matrix; perfect iff it is a line spanned by a
    quadric with positive definite quadratic part.
    """
    ev = evaluation_matrix(points)
    n = ev.dimension
    rank = affine_rank(points)
    if rank < n:
        raise NotFullDimensionalError(rank, n)
    reduction = row_reduce(ev.rows, len(ev.columns))
    nullity = len(reduction.nullspace_basis)
    log.debug("evaluation matrix %s has rank %d, nullity %d", ev.shape, reduction.rank, nullity)
    if nullity != 1:
        return PerfectionVerdict(nullity, None, None, False)

    coefficients = primitive_integer_vector(reduction.nullspace_basis[0])
    generator = _to_affine(n, coefficients)
    if generator is None:
        negated = tuple(-a for a in coefficients)
        generator = _to_affine(n, negated)
        if generator is not None:
            coefficients = negated
    return PerfectionVerdict(1, coefficients, generator, generator is not None)


def infer_quadratic(points: Sequence[LatticePoint]) -> AffineQuadraticFunction:
    """Recover (Gram, center, rho^2) of the unique circumscribed quadric."""
    verdict = perfection_check(points)
    if verdict.nullspace_dimension != 1:
        raise NotPerfectError(verdict.nullspace_dimension)
    if verdict.generator is None:
        raise NotPerfectError(1, "the unique quadric is not positive definite")
    return verdict.generator
