"""
Exact rational linear algebra.

Every scalar in the package is an ``int`` or a ``fractions.Fraction``; nothing in
this module (or anywhere that imports it) touches a float. Vectors are tuples,
matrices are tuples of row tuples.

Provides:
    - SymmetricRationalMatrix, the Gram-matrix value type
    - ldlt_decompose: LDL^T factorization doubling as the positive-definiteness test
    - row_reduce: rank and nullspace with deterministic pivoting
    - isqrt_floor: integer square root of a nonnegative rational
    - small helpers (solve, determinant, lattice index, incremental spans) used by
      the enumeration, perfection, symmetry and geometry modules
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from perfect_delaunay.exceptions import (
    DimensionMismatchError,
    DomainError,
    NotPositiveDefiniteError,
)

log = logging.getLogger(__name__)

Rational = Fraction
RationalVector = tuple[Fraction, ...]
RationalMatrix = tuple[tuple[Fraction, ...], ...]


# ---------------------------------------------------------------------------
# Conversions
# ---------------------------------------------------------------------------

def to_rational(value) -> Fraction:
    """Convert an int, Fraction or "p/q" string to a Fraction, refusing floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise TypeError(f"cannot convert {value!r} to an exact rational")
    return Fraction(value)


def vector(values: Iterable) -> RationalVector:
    return tuple(to_rational(v) for v in values)


def matrix(rows: Iterable[Iterable]) -> RationalMatrix:
    out = tuple(vector(row) for row in rows)
    if out and any(len(row) != len(out[0]) for row in out):
        raise DimensionMismatchError("ragged matrix rows")
    return out


def identity(n: int) -> RationalMatrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def content(values: Iterable[int]) -> int:
    """gcd of the entries, 0 for an all-zero input."""
    g = 0
    for v in values:
        g = math.gcd(g, v)
    return g


def primitive_integer_vector(values: Iterable) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    vals = vector(values)
    scale = math.lcm(*(v.denominator for v in vals)) if vals else 1
    ints = [int(v * scale) for v in vals]
    g = content(ints)
    if g == 0:
        return tuple(ints)
    return tuple(i // g for i in ints)


# ---------------------------------------------------------------------------
# Symmetric matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetricRationalMatrix:
    """A square symmetric matrix with exact rational entries."""
    entries: RationalMatrix

    def __post_init__(self) -> None:
        n = len(self.entries)
        if n == 0:
            raise DimensionMismatchError("a symmetric matrix needs at least one row")
        for row in self.entries:
            if len(row) != n:
                raise DimensionMismatchError(f"row of length {len(row)} in a matrix of order {n}")
        for i in range(n):
            for j in range(i + 1, n):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i}, {j})")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "SymmetricRationalMatrix":
        return cls(matrix(rows))

    @property
    def order(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i][j]

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.entries for x in row)

    def as_integers(self) -> tuple[tuple[int, ...], ...]:
        if not self.is_integral():
            raise ValueError("matrix has non-integer entries")
        return tuple(tuple(int(x) for x in row) for row in self.entries)


# ---------------------------------------------------------------------------
# Basic products
# ---------------------------------------------------------------------------

def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise DimensionMismatchError(f"vectors of length {len(u)} and {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def mat_vec(m: Sequence[Sequence], v: Sequence) -> RationalVector:
    return tuple(dot(row, v) for row in m)


def transpose(m: Sequence[Sequence]) -> tuple[tuple, ...]:
    return tuple(zip(*m))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> RationalMatrix:
    if a and len(a[0]) != len(b):
        raise DimensionMismatchError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x?")
    cols = transpose(b)
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


# ---------------------------------------------------------------------------
# LDL^T
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LDLT:
    lower: RationalMatrix        # unit lower triangular
    diagonal: RationalVector


def ldlt_decompose(m: SymmetricRationalMatrix) -> LDLT:
    """
    Factor m = L diag(D) L^T with L unit lower triangular.

    Raises NotPositiveDefiniteError at the first pivot that is not strictly
    positive; its ``index`` is the 1-based order of the failing leading minor.
    """
    n = m.order
    a = m.entries
    lower = [[Fraction(0)] * n for _ in range(n)]
    diag = [Fraction(0)] * n
    for j in range(n):
        pivot = a[j][j] - sum((lower[j][k] * lower[j][k] * diag[k] for k in range(j)), Fraction(0))
        if pivot <= 0:
            raise NotPositiveDefiniteError(j + 1, pivot)
        diag[j] = pivot
        lower[j][j] = Fraction(1)
        for i in range(j + 1, n):
            s = a[i][j] - sum((lower[i][k] * lower[j][k] * diag[k] for k in range(j)), Fraction(0))
            lower[i][j] = s / pivot
    return LDLT(tuple(tuple(row) for row in lower), tuple(diag))


def is_positive_definite(m: SymmetricRationalMatrix) -> bool:
    try:
        ldlt_decompose(m)
    except NotPositiveDefiniteError:
        return False
    return True


# ---------------------------------------------------------------------------
# Row reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RowReduction:
    rank: int
    pivot_columns: tuple[int, ...]
    nullspace_basis: tuple[RationalVector, ...]
    echelon: RationalMatrix      # reduced row echelon form, nonzero rows only


def _integer_row(row: RationalVector) -> list[int]:
    scale = math.lcm(*(x.denominator for x in row)) if row else 1
    ints = [int(x * scale) for x in row]
    g = content(ints)
    return [x // g for x in ints] if g > 1 else ints


def row_reduce(m: Sequence[Sequence], columns: int | None = None) -> RowReduction:
    """
    Rank and nullspace of a rational matrix.

    Elimination runs on primitive integer rows (content divided out after every
    update) and pivots on the first nonzero entry in column order. The reduced
    echelon form is unique, so the output does not depend on row order; each
    nullspace vector is scaled to a primitive integer vector.
    """
    rows_in = matrix(m)
    ncols = len(rows_in[0]) if rows_in else columns
    if ncols is None:
        raise DimensionMismatchError("column count of an empty matrix must be given")
    if columns is not None and columns != ncols:
        raise DimensionMismatchError(f"matrix has {ncols} columns, expected {columns}")

    rows = [_integer_row(r) for r in rows_in if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        found = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if found is None:
            continue
        rows[r], rows[found] = rows[found], rows[r]
        p = rows[r]
        pc = p[c]
        for i in range(len(rows)):
            f = rows[i][c]
            if i == r or f == 0:
                continue
            new = [pc * x - f * y for x, y in zip(rows[i], p)]
            g = content(new)
            rows[i] = [x // g for x in new] if g > 1 else new
        pivots.append(c)
        r += 1

    echelon = tuple(tuple(Fraction(x, rows[k][pivots[k]]) for x in rows[k]) for k in range(r))
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for k, pc in enumerate(pivots):
            v[pc] = -echelon[k][f]
        basis.append(vector(primitive_integer_vector(v)))
    return RowReduction(r, tuple(pivots), tuple(basis), echelon)


def rank(m: Sequence[Sequence], columns: int | None = None) -> int:
    return row_reduce(m, columns).rank


def solve(m: Sequence[Sequence], rhs: Sequence) -> RationalVector:
    """Solve m x = rhs for square nonsingular m."""
    a = [list(row) + [to_rational(b)] for row, b in zip(matrix(m), rhs)]
    n = len(a)
    if len(rhs) != n or any(len(row) != n + 1 for row in a):
        raise DimensionMismatchError("solve needs a square system")
    for c in range(n):
        found = next((i for i in range(c, n) if a[i][c] != 0), None)
        if found is None:
            raise DomainError("singular system")
        a[c], a[found] = a[found], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(row[n] for row in a)


def inverse(m: Sequence[Sequence]) -> RationalMatrix:
    n = len(m)
    cols = [solve(m, [int(i == j) for i in range(n)]) for j in range(n)]
    return transpose(cols)


def determinant(m: Sequence[Sequence]) -> Fraction:
    a = [list(row) for row in matrix(m)]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        found = next((i for i in range(c, n) if a[i][c] != 0), None)
        if found is None:
            return Fraction(0)
        if found != c:
            a[c], a[found] = a[found], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


# ---------------------------------------------------------------------------
# Integer square roots
# ---------------------------------------------------------------------------

def isqrt_floor(q) -> int:
    """Largest integer k with k*k <= q, for a nonnegative rational q."""
    q = to_rational(q)
    if q < 0:
        raise DomainError(f"isqrt_floor of negative value {q}")
    # floor(sqrt(p/d)) == floor(sqrt(p*d) / d) for positive integer d
    return math.isqrt(q.numerator * q.denominator) // q.denominator


# ---------------------------------------------------------------------------
# Spans and lattices
# ---------------------------------------------------------------------------

class IncrementalSpan:
    """Linear span built one vector at a time, with exact membership tests."""

    def __init__(self, dimension: int) -> None:
        self.dimension = dimension
        self._rows: list[tuple[int, RationalVector]] = []

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, v: Sequence) -> RationalVector:
        w = list(vector(v))
        if len(w) != self.dimension:
            raise DimensionMismatchError(f"vector of length {len(w)} in span of dimension {self.dimension}")
        for pc, row in self._rows:
            f = w[pc]
            if f:
                w = [x - f * y for x, y in zip(w, row)]
        return tuple(w)

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def add(self, v: Sequence) -> bool:
        """Add v to the span; False when it was already a member."""
        w = self.reduce(v)
        pc = next((i for i, x in enumerate(w) if x), None)
        if pc is None:
            return False
        inv = 1 / w[pc]
        w = tuple(x * inv for x in w)
        self._rows = [
            (c, tuple(x - row[pc] * y for x, y in zip(row, w))) if row[pc] else (c, row)
            for c, row in self._rows
        ]
        self._rows.append((pc, w))
        return True


def affine_basis(points: Sequence[Sequence]) -> tuple[int, ...]:
    """Indices of a maximal affinely independent subset, chosen greedily in order."""
    if not points:
        return ()
    origin = points[0]
    span = IncrementalSpan(len(origin))
    chosen = [0]
    for i in range(1, len(points)):
        if span.add([a - b for a, b in zip(points[i], origin)]):
            chosen.append(i)
            if len(span) == span.dimension:
                break
    return tuple(chosen)


def affine_rank(points: Sequence[Sequence]) -> int:
    return max(len(affine_basis(points)) - 1, 0)


def lattice_index(vectors: Iterable[Sequence[int]], dimension: int) -> int:
    """
    Index in Z^dimension of the lattice generated by integer vectors, or 0 when
    they do not have full rank. Integer echelon form by repeated Euclid steps.
    """
    rows = [[int(x) for x in v] for v in vectors]
    diagonal = []
    for c in range(dimension):
        live = [r for r in rows if r[c] != 0]
        rest = [r for r in rows if r[c] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[c]))
            p = live[0]
            nxt = [p]
            for r in live[1:]:
                q = r[c] // p[c]
                reduced = [a - q * b for a, b in zip(r, p)]
                (nxt if reduced[c] != 0 else rest).append(reduced)
            live = nxt
        if not live:
            return 0
        diagonal.append(live[0][c])
        rows = rest
    return abs(math.prod(diagonal))
