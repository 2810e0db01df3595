"""
Quadratic forms on Z^n and affine quadratic functions Q[x - c] - rho^2.

A QuadraticForm wraps an exact Gram matrix. An AffineQuadraticFunction adds a
rational center and squared radius; it vanishes on the vertices of the Delaunay
polytope it circumscribes and is positive at every other lattice point.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from perfect_delaunay.core.exactmath import (
    LDLT,
    RationalVector,
    SymmetricRationalMatrix,
    is_positive_definite,
    ldlt_decompose,
    to_rational,
    vector,
)
from perfect_delaunay.exceptions import DimensionMismatchError, DomainError

log = logging.getLogger(__name__)

LatticePoint = tuple[int, ...]


def lattice_point(coordinates: Iterable) -> LatticePoint:
    out = []
    for x in coordinates:
        x = to_rational(x)
        if x.denominator != 1:
            raise ValueError(f"lattice point coordinate {x} is not an integer")
        out.append(int(x))
    return tuple(out)


@dataclass(frozen=True)
class QuadraticForm:
    gram: SymmetricRationalMatrix

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "QuadraticForm":
        return cls(SymmetricRationalMatrix.from_rows(rows))

    @property
    def dimension(self) -> int:
        return self.gram.order

    @cached_property
    def ldlt(self) -> LDLT:
        """LDL^T factors; raises NotPositiveDefiniteError for non-definite forms."""
        return ldlt_decompose(self.gram)

    def is_positive_definite(self) -> bool:
        return is_positive_definite(self.gram)

    @cached_property
    def integer_gram(self) -> tuple[tuple[int, ...], ...] | None:
        """The Gram matrix as ints when integral (every catalog form is)."""
        return self.gram.as_integers() if self.gram.is_integral() else None

    def _check(self, x: Sequence) -> None:
        if len(x) != self.dimension:
            raise DimensionMismatchError(f"vector of length {len(x)} for a form of dimension {self.dimension}")


def eval_form(f: QuadraticForm, x: Sequence) -> Fraction:
    """x^T G x."""
    return eval_bilinear(f, x, x)


def eval_bilinear(f: QuadraticForm, x: Sequence, y: Sequence) -> Fraction:
    """x^T G y; symmetric in its arguments."""
    f._check(x)
    f._check(y)
    g = f.gram.entries
    total = Fraction(0)
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = g[i]
        total += xi * sum((row[j] * yj for j, yj in enumerate(y) if yj), Fraction(0))
    return total


def integer_norm(gram: Sequence[Sequence[int]], x: Sequence[int]) -> int:
    """x^T G x for an integer Gram matrix and integer vector, in pure int arithmetic."""
    total = 0
    for i, xi in enumerate(x):
        if xi:
            row = gram[i]
            total += xi * sum(row[j] * xj for j, xj in enumerate(x) if xj)
    return total


@dataclass(frozen=True)
class AffineQuadraticFunction:
    """E(x) = Q[x - c] - rho^2."""
    form: QuadraticForm
    center: RationalVector
    radius2: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", vector(self.center))
        object.__setattr__(self, "radius2", to_rational(self.radius2))
        if len(self.center) != self.form.dimension:
            raise DimensionMismatchError(
                f"center of length {len(self.center)} for a form of dimension {self.form.dimension}"
            )
        if self.radius2 < 0:
            raise DomainError(f"negative squared radius {self.radius2}")

    @property
    def dimension(self) -> int:
        return self.form.dimension

    def __call__(self, x: Sequence) -> Fraction:
        return eval_affine(self, x)


def eval_affine(e: AffineQuadraticFunction, x: Sequence) -> Fraction:
    e.form._check(x)
    d = [xi - ci for xi, ci in zip(x, e.center)]
    return eval_form(e.form, d) - e.radius2
