"""
Geometric invariants of Delaunay polytopes and reference polytopes.

Covers the norm spectrum, central symmetry, lattice width and lamina witnesses,
constructors for the cell types of A_n and D_n together with the
Upsilon^n series, and a backtracking search for scaled isometric sections of a
reference polytope inside a host polytope.
"""

from __future__ import annotations

import enum
import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from perfect_delaunay.config import settings
from perfect_delaunay.core.budget import Budget
from perfect_delaunay.core.enumeration import DelaunayVerdict, verify_delaunay
from perfect_delaunay.core.exactmath import (
    IncrementalSpan,
    affine_basis,
    dot,
    inverse,
    mat_vec,
    row_reduce,
    solve,
    transpose,
)
from perfect_delaunay.core.perfection import infer_quadratic
from perfect_delaunay.core.qlattice import AffineQuadraticFunction, LatticePoint, QuadraticForm, lattice_point
from perfect_delaunay.core.symmetry import distance_coloring
from perfect_delaunay.exceptions import DomainError, NotFullDimensionalError

log = logging.getLogger(__name__)


class SymmetryType(str, enum.Enum):
    CENTRALLY_SYMMETRIC = "centrally-symmetric"
    ANTISYMMETRIC = "antisymmetric"


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------

def spectrum(form: QuadraticForm, vertices: Sequence[Sequence[int]]) -> tuple[Fraction, ...]:
    """Distinct nonzero values of Q[v - w] over vertex pairs, ascending."""
    values = {x for row in distance_coloring(form, vertices) for x in row}
    values.discard(Fraction(0))
    return tuple(sorted(values))


def symmetry_type(vertices: Sequence[Sequence[int]], center: Sequence) -> SymmetryType:
    """Centrally symmetric iff v -> 2c - v maps the vertex set onto itself."""
    points = {lattice_point(v) for v in vertices}
    twice = [2 * Fraction(c) for c in center]
    if any(t.denominator != 1 for t in twice):
        return SymmetryType.ANTISYMMETRIC
    twice_int = [int(t) for t in twice]
    for v in points:
        if tuple(t - a for t, a in zip(twice_int, v)) not in points:
            return SymmetryType.ANTISYMMETRIC
    return SymmetryType.CENTRALLY_SYMMETRIC


def width_from_functional(vertices: Sequence[Sequence[int]], a: Sequence[int]) -> int:
    if not any(a):
        raise DomainError("the zero functional has no width")
    values = [sum(x * y for x, y in zip(a, v)) for v in vertices]
    return max(values) - min(values)


def layer_sizes(vertices: Sequence[Sequence[int]], a: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """(value, count) for each level set of the functional that meets the vertex set."""
    counts = Counter(sum(x * y for x, y in zip(a, v)) for v in vertices)
    return tuple(sorted(counts.items()))


# ---------------------------------------------------------------------------
# Lamina witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LaminaWitness:
    functional: tuple[int, ...]
    values: tuple[int, ...]        # sorted a.v, shifted to start at 0

    @property
    def spread(self) -> int:
        return self.values[-1] - self.values[0]

    @property
    def lamina_number(self) -> int:
        return self.spread + 1

    @property
    def layers(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(Counter(self.values).items()))


def lamina_witness_search(vertices: Sequence[Sequence[int]], window: int = 2) -> LaminaWitness | None:
    """
    Search for an integer functional whose values on the vertices fill at most
    `window + 1` consecutive integers.

    Values in {0..window} with minimum 0 are assigned to a fixed affine basis of
    vertices, the functional is solved for, and accepted when it is integral and
    its values on all vertices spread over at most `window`.
    """
    points = [lattice_point(v) for v in vertices]
    n = len(points[0])
    basis = affine_basis(points)
    if len(basis) != n + 1:
        raise NotFullDimensionalError(len(basis) - 1, n)
    origin = points[basis[0]]
    # a^T P = (y_k - y_0) where the columns of P are basis differences
    rows = [[a - b for a, b in zip(points[k], origin)] for k in basis[1:]]
    p_inv = inverse(rows)
    den = math.lcm(*(x.denominator for row in p_inv for x in row))
    adj = [[int(x * den) for x in row] for row in p_inv]
    offsets = [tuple(a - b for a, b in zip(p, origin)) for p in points]

    for y in itertools.product(range(window + 1), repeat=n + 1):
        if min(y) != 0:
            continue
        d = [yk - y[0] for yk in y[1:]]
        if not any(d):
            continue
        num = [sum(adj[i][k] * d[k] for k in range(n)) for i in range(n)]
        if any(x % den for x in num):
            continue
        a = [x // den for x in num]
        values = []
        lo = hi = y[0]
        for off in offsets:
            value = y[0] + sum(x * z for x, z in zip(a, off))
            lo, hi = min(lo, value), max(hi, value)
            if hi - lo > window:
                break
            values.append(value)
        else:
            shifted = sorted(v - lo for v in values)
            if set(shifted) == set(range(shifted[-1] + 1)):
                return LaminaWitness(tuple(a), tuple(shifted))
    return None


def lamina_number(vertices: Sequence[Sequence[int]]) -> int | None:
    """2 or 3 when a witness of that width exists; None means four or more laminae."""
    for window in (1, 2):
        if lamina_witness_search(vertices, window) is not None:
            return window + 1
    return None


# ---------------------------------------------------------------------------
# Reference polytopes
# ---------------------------------------------------------------------------

REFERENCE_KINDS = ("J", "semicube", "cross", "cube", "G6", "G7", "tope35", "Upsilon", "A_slab", "D_cell")
CATALOG_KINDS = ("G6", "G7", "tope35")
D_CELL_VARIANTS = ("cross", "semicube", "shifted-semicube")


@dataclass(frozen=True)
class ReferencePolytope:
    kind: str
    parameters: tuple
    form: QuadraticForm
    vertices: tuple[LatticePoint, ...]

    @property
    def name(self) -> str:
        if self.kind == "cube":
            return f"H({self.parameters[0]})"
        if self.kind == "semicube":
            return f"1/2 H({self.parameters[0]})"
        if self.kind == "J":
            return "J({},{})".format(*self.parameters)
        if self.parameters:
            return f"{self.kind}({','.join(str(p) for p in self.parameters)})"
        return self.kind

    @cached_property
    def distance_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        return distance_coloring(self.form, self.vertices)


def _zero_one_vectors(n: int) -> list[LatticePoint]:
    return sorted(itertools.product((0, 1), repeat=n))


def _euclidean(n: int) -> QuadraticForm:
    return QuadraticForm.from_rows([[int(i == j) for j in range(n)] for i in range(n)])


def a_form(n: int) -> QuadraticForm:
    """sum x_i^2 + sum_{i<j} x_i x_j."""
    return QuadraticForm.from_rows([[Fraction(1) if i == j else Fraction(1, 2) for j in range(n)] for i in range(n)])


def d_basis(n: int) -> tuple[tuple[int, ...], ...]:
    """Columns e1+e2, e2-e1, ..., en-e(n-1): a basis of the even-sum lattice D_n."""
    cols = [tuple(int(i in (0, 1)) for i in range(n))]
    for k in range(1, n):
        cols.append(tuple(1 if i == k else -1 if i == k - 1 else 0 for i in range(n)))
    return transpose(cols)


def d_form(n: int) -> QuadraticForm:
    b = d_basis(n)
    return QuadraticForm.from_rows([[sum(b[r][i] * b[r][j] for r in range(n)) for j in range(n)] for i in range(n)])


def upsilon_vertices(n: int) -> tuple[LatticePoint, ...]:
    if n < 7:
        raise DomainError(f"Upsilon^n needs n >= 7, got {n}")
    m = n - 1
    out = {tuple([1] * m + [-(n - 3)]), (0,) * n}
    for i in range(m):
        unit = [int(k == i) for k in range(m)]
        out.add(tuple([1 - u for u in unit] + [-(n - 4)]))
        out.add(tuple(unit + [0]))
        out.add(tuple([-u for u in unit] + [1]))
    for i, j in itertools.combinations(range(m), 2):
        out.add(tuple([int(k in (i, j)) for k in range(m)] + [-1]))
    return tuple(sorted(out))


def d_cell_vertices(n: int, variant: str) -> tuple[LatticePoint, ...]:
    """D_n cells in Euclidean coordinates (points of Z^n with even coordinate sum)."""
    if variant == "cross":
        center = [1] + [0] * (n - 1)
        pts = []
        for i in range(n):
            for s in (1, -1):
                p = list(center)
                p[i] += s
                pts.append(tuple(p))
        return tuple(sorted(pts))
    if variant == "semicube":
        return tuple(v for v in _zero_one_vectors(n) if sum(v) % 2 == 0)
    if variant == "shifted-semicube":
        return tuple(sorted(
            v[:-1] + (v[-1] + 1,) for v in _zero_one_vectors(n) if (sum(v) + 1) % 2 == 0
        ))
    raise ValueError(f"unknown D_n cell variant {variant!r}; expected one of {D_CELL_VARIANTS}")


def to_d_coordinates(points: Sequence[Sequence[int]]) -> tuple[LatticePoint, ...]:
    """Coordinates of even-sum points in the d_basis; raises ValueError for odd sums."""
    if not points:
        return ()
    b = d_basis(len(points[0]))
    return tuple(lattice_point(solve(b, p)) for p in points)


def build_reference(kind: str, *parameters) -> ReferencePolytope:
    """
    Vertex list and natural form of a reference polytope.

    J, semicube, cross and cube use the Euclidean form, A_slab the A_n form,
    D_cell the Gram matrix of a D_n basis with vertices in that basis.
    Upsilon uses its inferred form. G6, G7 and tope35 are catalog records and
    are built by the catalog service.
    """
    if kind == "J":
        n, s = parameters
        if not 0 <= s <= n:
            raise DomainError(f"J(n,s) needs 0 <= s <= n, got J({n},{s})")
        verts = tuple(v for v in _zero_one_vectors(n) if sum(v) == s)
        return ReferencePolytope(kind, (n, s), _euclidean(n), verts)
    if kind == "semicube":
        (n,) = parameters
        verts = tuple(v for v in _zero_one_vectors(n) if sum(v) % 2 == 0)
        return ReferencePolytope(kind, (n,), _euclidean(n), verts)
    if kind == "cube":
        (n,) = parameters
        return ReferencePolytope(kind, (n,), _euclidean(n), tuple(_zero_one_vectors(n)))
    if kind == "cross":
        (n,) = parameters
        verts = []
        for i in range(n):
            for s in (1, -1):
                verts.append(tuple(s * int(k == i) for k in range(n)))
        return ReferencePolytope(kind, (n,), _euclidean(n), tuple(sorted(verts)))
    if kind == "A_slab":
        n, q = parameters
        if not 1 <= q <= n:
            raise DomainError(f"A_slab(n,q) needs 1 <= q <= n, got A_slab({n},{q})")
        verts = tuple(v for v in _zero_one_vectors(n) if sum(v) in (q - 1, q))
        return ReferencePolytope(kind, (n, q), a_form(n), verts)
    if kind == "D_cell":
        n, variant = parameters
        if n < 3:
            raise DomainError(f"D_n cells need n >= 3, got {n}")
        verts = to_d_coordinates(d_cell_vertices(n, variant))
        return ReferencePolytope(kind, (n, variant), d_form(n), tuple(sorted(verts)))
    if kind == "Upsilon":
        (n,) = parameters
        verts = upsilon_vertices(n)
        return ReferencePolytope(kind, (n,), infer_quadratic(verts).form, verts)
    if kind in CATALOG_KINDS:
        raise ValueError(f"{kind} is a catalog record, not a constructed reference")
    raise ValueError(f"unknown reference kind {kind!r}; expected one of {REFERENCE_KINDS}")


def parse_reference_name(name: str) -> tuple[str, tuple]:
    """'H(5)', '1/2 H(5)', 'J(6,2)', 'G6', 'tope35' -> (kind, parameters)."""
    text = name.replace(" ", "")
    if text in CATALOG_KINDS:
        return text, ()
    for prefix, kind in (("1/2H(", "semicube"), ("H(", "cube"), ("J(", "J")):
        if text.startswith(prefix) and text.endswith(")"):
            try:
                params = tuple(int(p) for p in text[len(prefix):-1].split(","))
            except ValueError:
                break
            if len(params) == (2 if kind == "J" else 1):
                return kind, params
    raise ValueError(f"unknown subpolytope name {name!r}")


def next_family_members(ref: ReferencePolytope) -> list[tuple[str, tuple]]:
    """The one-step extensions used for maximality; empty for sporadic kinds."""
    if ref.kind in ("cube", "semicube"):
        return [(ref.kind, (ref.parameters[0] + 1,))]
    if ref.kind == "J":
        n, s = ref.parameters
        return [("J", (n + 1, s)), ("J", (n + 1, s + 1))]
    return []


# ---------------------------------------------------------------------------
# Scaled isometric sections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SectionMatch:
    scale: Fraction                  # host norm / target norm
    mapping: tuple[int, ...]         # target vertex index -> host vertex index

    @property
    def host_indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.mapping))


class _SectionSearch:
    def __init__(
        self,
        target: ReferencePolytope,
        host_form: QuadraticForm,
        host_vertices: Sequence[Sequence[int]],
        budget: Budget,
    ) -> None:
        self.target = [lattice_point(v) for v in target.vertices]
        self.host = [lattice_point(v) for v in host_vertices]
        self.host_index = {p: i for i, p in enumerate(self.host)}
        self.dt = target.distance_matrix
        self.dh = distance_coloring(host_form, self.host)
        self.budget = budget
        self.host_profiles = [Counter(row) for row in self.dh]
        self.target_profiles = [Counter(row) for row in self.dt]

        self.basis = affine_basis(self.target)
        origin = self.target[self.basis[0]]
        diffs = [[a - b for a, b in zip(self.target[k], origin)] for k in self.basis[1:]]
        self.coefficients: list[tuple[Fraction, ...]] = []
        if diffs:
            # square subsystem on coordinates where the basis differences are independent
            pivots = row_reduce(diffs).pivot_columns
            square = [[d[c] for d in diffs] for c in pivots]
            for p in self.target:
                rhs = [p[c] - origin[c] for c in pivots]
                self.coefficients.append(solve(square, rhs))
        else:
            self.coefficients = [() for _ in self.target]

    def _profile_fits(self, u: int, k: int, scale: Fraction) -> bool:
        host = self.host_profiles[u]
        return all(host[scale * d] >= c for d, c in self.target_profiles[k].items() if d)

    def _complete(self, images: Sequence[int]) -> tuple[int, ...] | None:
        base = self.host[images[0]]
        diffs = [[a - b for a, b in zip(self.host[h], base)] for h in images[1:]]
        mapping = []
        for coeffs in self.coefficients:
            point = []
            for r, b in enumerate(base):
                x = b + sum((c * d[r] for c, d in zip(coeffs, diffs)), Fraction(0))
                if x.denominator != 1:
                    return None
                point.append(int(x))
            j = self.host_index.get(tuple(point))
            if j is None:
                return None
            mapping.append(j)
        if len(set(mapping)) != len(mapping):
            return None
        span = IncrementalSpan(len(base))
        for d in diffs:
            span.add(d)
        chosen = set(mapping)
        for j, p in enumerate(self.host):
            if j not in chosen and span.contains([a - b for a, b in zip(p, base)]):
                log.debug("candidate copy is not a section: host vertex %d lies in its hull", j)
                return None
        return tuple(mapping)

    def _extend(self, images: list[int], scale: Fraction | None) -> SectionMatch | None:
        k = len(images)
        if k == len(self.basis):
            mapping = self._complete(images)
            if mapping is None:
                return None
            if any(
                self.dh[mapping[i]][mapping[j]] != scale * self.dt[i][j]
                for i in range(len(mapping))
                for j in range(i + 1, len(mapping))
            ):
                return None
            return SectionMatch(scale, mapping)
        tk = self.basis[k]
        for u in range(len(self.host)):
            if u in images:
                continue
            self.budget.tick()
            s = scale
            if s is None and k == 1:
                s = self.dh[u][images[0]] / self.dt[tk][self.basis[0]]
                if not self._profile_fits(images[0], self.basis[0], s):
                    continue
            if s is not None:
                if any(self.dh[u][images[j]] != s * self.dt[tk][self.basis[j]] for j in range(k)):
                    continue
                if not self._profile_fits(u, tk, s):
                    continue
            images.append(u)
            found = self._extend(images, s)
            images.pop()
            if found is not None:
                return found
        return None

    def run(self) -> SectionMatch | None:
        if len(self.target) > len(self.host):
            return None
        if len(self.basis) == 1:
            return SectionMatch(Fraction(1), (0,)) if self.host else None
        return self._extend([], None)


def find_scaled_isometric_section(
    target: ReferencePolytope,
    host_form: QuadraticForm,
    host_vertices: Sequence[Sequence[int]],
    budget: Budget | None = None,
) -> SectionMatch | None:
    """
    A host vertex subset whose norms equal lambda times the target's, cut out
    of the host by its own affine hull. Raises BudgetExceeded on timeout.
    """
    budget = budget or Budget(settings.SECTION_BUDGET_SECONDS, f"section search for {target.name}")
    match = _SectionSearch(target, host_form, host_vertices, budget).run()
    log.debug("section %s: %s", target.name, "found" if match else "absent")
    return match


@dataclass(frozen=True)
class MaximalityVerdict:
    maximal: bool
    extension: str | None = None      # name of a next family member present in the host


def check_maximal(
    target: ReferencePolytope,
    host_form: QuadraticForm,
    host_vertices: Sequence[Sequence[int]],
    budget: Budget | None = None,
) -> MaximalityVerdict:
    """One-step check: no next member of the target's family occurs as a section of the host."""
    for kind, params in next_family_members(target):
        try:
            bigger = build_reference(kind, *params)
        except DomainError:
            continue
        if len(bigger.vertices) > len(host_vertices):
            continue
        if find_scaled_isometric_section(bigger, host_form, host_vertices, budget) is not None:
            return MaximalityVerdict(False, bigger.name)
    return MaximalityVerdict(True)


# ---------------------------------------------------------------------------
# A_n and D_n cells
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CellVerdict:
    name: str
    vertex_count: int
    function: AffineQuadraticFunction | None
    delaunay: DelaunayVerdict | None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.delaunay is not None and self.delaunay.passed


def fit_sphere(form: QuadraticForm, vertices: Sequence[Sequence[int]]) -> AffineQuadraticFunction | None:
    """
    Center and radius of the Q-sphere through the vertices, or None when they
    are not cospherical.

    Each vertex gives 2 v.y - t = Q[v] with y = G c and t = Q[c] - rho^2;
    the system is solved on an affine basis and checked on the rest.
    """
    points = [lattice_point(v) for v in vertices]
    n = form.dimension
    basis = affine_basis(points)
    if len(basis) != n + 1:
        raise NotFullDimensionalError(len(basis) - 1, n)
    g = form.gram.entries
    norms = [dot(p, mat_vec(g, p)) for p in points]
    rows = [[2 * x for x in points[k]] + [-1] for k in basis]
    sol = solve(rows, [norms[k] for k in basis])
    y, t = sol[:n], sol[n]
    if any(2 * dot(p, y) - t != q for p, q in zip(points, norms)):
        return None
    c = solve(g, y)
    radius2 = dot(c, mat_vec(g, c)) - t
    return AffineQuadraticFunction(form, c, radius2)


def verify_an_dn_cell(kind: str, n: int, parameter) -> CellVerdict:
    """
    Build an A_n slab (parameter q) or a D_n cell (parameter variant), fit its
    sphere and confirm it is empty with the cell's vertices on the boundary.
    """
    if n > settings.CELL_MAX_N:
        raise DomainError(f"cell dimension {n} exceeds the configured maximum {settings.CELL_MAX_N}")
    ref = build_reference(kind, n, parameter)
    function = fit_sphere(ref.form, ref.vertices)
    if function is None:
        return CellVerdict(ref.name, len(ref.vertices), None, None, "vertices are not cospherical")
    verdict = verify_delaunay(function, ref.vertices)
    log.info("%s: %s", ref.name, verdict.describe())
    return CellVerdict(ref.name, len(ref.vertices), function, verdict, verdict.describe())
