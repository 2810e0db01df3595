"""
Exact lattice-point enumeration inside ellipsoids.

The search is Fincke-Pohst driven by the exact LDL^T factors of the Gram matrix:
coordinates are fixed from the last layer to the first, and at every layer the
admissible integer interval comes from isqrt_floor followed by an exact test.
Results are sorted lexicographically so reports and failures diff cleanly.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from perfect_delaunay.core.exactmath import isqrt_floor, vector
from perfect_delaunay.core.qlattice import (
    AffineQuadraticFunction,
    LatticePoint,
    QuadraticForm,
    eval_form,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnumerationResult:
    interior: tuple[tuple[LatticePoint, Fraction], ...]    # E(x) < 0
    boundary: tuple[LatticePoint, ...]                     # E(x) == 0

    @property
    def interior_count(self) -> int:
        return len(self.interior)

    @property
    def boundary_count(self) -> int:
        return len(self.boundary)


@dataclass(frozen=True)
class MinimumResult:
    minimum: Fraction
    minimizers: tuple[LatticePoint, ...]

    @property
    def count(self) -> int:
        return len(self.minimizers)


@dataclass(frozen=True)
class DelaunayVerdict:
    passed: bool
    interior: tuple[LatticePoint, ...] = ()
    missing: tuple[LatticePoint, ...] = ()
    unexpected: tuple[LatticePoint, ...] = ()

    def describe(self) -> str:
        if self.passed:
            return "empty ellipsoid, boundary equals the vertex set"
        parts = []
        if self.interior:
            parts.append(f"{len(self.interior)} interior points, first {self.interior[0]}")
        if self.missing:
            parts.append(f"{len(self.missing)} vertices off the boundary, first {self.missing[0]}")
        if self.unexpected:
            parts.append(f"{len(self.unexpected)} extra boundary points, first {self.unexpected[0]}")
        return "; ".join(parts)


# ---------------------------------------------------------------------------
# Fincke-Pohst core
# ---------------------------------------------------------------------------

def iter_ellipsoid_points(
    form: QuadraticForm,
    center: Sequence,
    radius2,
) -> Iterator[tuple[LatticePoint, Fraction]]:
    """
    Yield (x, Q[x - c]) for every integer x with Q[x - c] <= radius2.

    The consumer may stop early; nothing is materialized.
    """
    ldl = form.ldlt
    lower, diag = ldl.lower, ldl.diagonal
    c = vector(center)
    bound = Fraction(radius2)
    n = form.dimension
    x = [0] * n

    def layer(k: int, remaining: Fraction) -> Iterator[tuple[LatticePoint, Fraction]]:
        shift = sum((lower[j][k] * (x[j] - c[j]) for j in range(k + 1, n)), Fraction(0))
        mid = c[k] - shift
        root = isqrt_floor(remaining / diag[k])
        base = math.floor(mid)
        for xk in range(base - root - 1, base + root + 2):
            t = xk - mid
            used = diag[k] * t * t
            if used > remaining:
                continue
            x[k] = xk
            if k == 0:
                yield tuple(x), bound - (remaining - used)
            else:
                yield from layer(k - 1, remaining - used)
        x[k] = 0

    if bound < 0:
        return
    yield from layer(n - 1, bound)


def scan_box(
    lower: Sequence[int],
    upper: Sequence[int],
) -> Iterator[LatticePoint]:
    """Every integer point of the box [lower, upper], lexicographically; oracle scans use it."""
    def rec(prefix: tuple[int, ...], k: int) -> Iterator[LatticePoint]:
        if k == len(lower):
            yield prefix
            return
        for v in range(lower[k], upper[k] + 1):
            yield from rec(prefix + (v,), k + 1)
    yield from rec((), 0)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def enumerate_in_ellipsoid(e: AffineQuadraticFunction) -> EnumerationResult:
    """All integer x with E(x) <= 0, split into interior and boundary."""
    interior = []
    boundary = []
    for x, q in iter_ellipsoid_points(e.form, e.center, e.radius2):
        value = q - e.radius2
        if value < 0:
            interior.append((x, value))
        else:
            boundary.append(x)
    interior.sort()
    boundary.sort()
    return EnumerationResult(tuple(interior), tuple(boundary))


class _Restart(Exception):
    pass


def _minimum(form: QuadraticForm, center: Sequence, start: Fraction, skip_origin: bool) -> MinimumResult:
    """Shrinking-radius search: restart whenever a strictly smaller value turns up."""
    bound = start
    restarts = 0
    while True:
        found: list[LatticePoint] = []
        try:
            for x, q in iter_ellipsoid_points(form, center, bound):
                if skip_origin and not any(x):
                    continue
                if q < bound:
                    bound = q
                    raise _Restart
                found.append(x)
        except _Restart:
            restarts += 1
            continue
        log.debug("minimum %s after %d restarts, %d minimizers", bound, restarts, len(found))
        return MinimumResult(bound, tuple(sorted(found)))


def shortest_vectors(f: QuadraticForm) -> MinimumResult:
    """Minimum of Q over nonzero integer vectors, with all minimizers (v and -v both listed)."""
    n = f.dimension
    start = min(f.gram[i, i] for i in range(n))
    return _minimum(f, (0,) * n, start, skip_origin=True)


def arithmetic_minimum(f: QuadraticForm, c: Sequence) -> MinimumResult:
    """Minimum of Q[x - c] over all integer x, starting from the rounded center."""
    c = vector(c)
    rounded = [math.floor(ci + Fraction(1, 2)) for ci in c]
    start = eval_form(f, [r - ci for r, ci in zip(rounded, c)])
    return _minimum(f, c, start, skip_origin=False)


def verify_delaunay(e: AffineQuadraticFunction, claimed_vertices: Iterable[Sequence[int]]) -> DelaunayVerdict:
    """PASS iff the ellipsoid has no interior lattice points and its boundary is exactly the claim."""
    claimed = {tuple(int(a) for a in v) for v in claimed_vertices}
    result = enumerate_in_ellipsoid(e)
    boundary = set(result.boundary)
    interior = tuple(x for x, _ in result.interior)
    missing = tuple(sorted(claimed - boundary))
    unexpected = tuple(sorted(boundary - claimed))
    passed = not interior and not missing and not unexpected
    return DelaunayVerdict(passed, interior, missing, unexpected)
