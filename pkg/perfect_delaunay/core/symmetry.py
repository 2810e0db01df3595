"""
Automorphism groups of Delaunay polytopes and of quadratic lattices.

Polytope groups are found by backtracking over images of an affine basis of
vertices. The vertex distance colouring is refined into an equitable partition
first, and each complete assignment is certified by solving for the affine map
and checking it against every vertex. Lattice groups use the Plesken-Souvignier
scheme: basis vectors are sent to lattice vectors of the same norm and the
same inner-product profile, and partial assignments are cut when their
candidate counts leave the fingerprint of the identity. Both searches return
a base with orbit sizes per level, so the group order is a product of orbit
lengths.
"""

from __future__ import annotations

import logging
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from perfect_delaunay.config import settings
from perfect_delaunay.core.budget import Budget
from perfect_delaunay.core.enumeration import iter_ellipsoid_points
from perfect_delaunay.core.exactmath import (
    affine_basis,
    determinant,
    inverse,
    lattice_index,
    row_reduce,
)
from perfect_delaunay.core.qlattice import LatticePoint, QuadraticForm, eval_form, integer_norm, lattice_point
from perfect_delaunay.exceptions import BudgetExceeded, NotFullDimensionalError

log = logging.getLogger(__name__)

Permutation = tuple[int, ...]
IntMatrix = tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# Permutations and stabilizer chains
# ---------------------------------------------------------------------------

def check_permutation(p: Sequence[int], degree: int) -> Permutation:
    p = tuple(int(x) for x in p)
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise ValueError(f"not a permutation of {degree} points: {p}")
    return p


def compose(p: Permutation, q: Permutation) -> Permutation:
    """p first, then q."""
    return tuple(q[x] for x in p)


def invert(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _moved_point(p: Permutation) -> int:
    return next(i for i, x in enumerate(p) if x != i)


def _orbit(point: int, generators: Sequence[Permutation]) -> set[int]:
    seen = {point}
    queue = [point]
    for x in queue:
        for g in generators:
            y = g[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


@dataclass
class _Level:
    point: int
    generators: list[Permutation] = field(default_factory=list)
    transversal: dict[int, Permutation] = field(default_factory=dict)


class PermutationGroup:
    """
    A permutation group with a deterministic Schreier-Sims stabilizer chain.

    `base` seeds the chain (points are appended as the algorithm needs them);
    `order` is the product of the basic orbit lengths.
    """

    def __init__(self, degree: int, generators: Iterable[Sequence[int]], base: Sequence[int] = ()) -> None:
        self.degree = degree
        self._identity = tuple(range(degree))
        gens: list[Permutation] = []
        for g in generators:
            g = check_permutation(g, degree)
            if g != self._identity and g not in gens:
                gens.append(g)
        self.generators = tuple(gens)
        self._strong = list(gens)
        self._levels: list[_Level] = []
        self._schreier_sims(base)

    # chain construction

    def _level_transversal(self, point: int, gens: Sequence[Permutation]) -> dict[int, Permutation]:
        transversal = {point: self._identity}
        queue = [point]
        for beta in queue:
            u = transversal[beta]
            for s in gens:
                image = s[beta]
                if image not in transversal:
                    transversal[image] = compose(u, s)
                    queue.append(image)
        return transversal

    def _rebuild(self, i: int) -> None:
        fixed = [lv.point for lv in self._levels[:i]]
        level = self._levels[i]
        level.generators = [s for s in self._strong if all(s[b] == b for b in fixed)]
        level.transversal = self._level_transversal(level.point, level.generators)

    def _strip(self, g: Permutation, start: int) -> tuple[Permutation, int]:
        for i in range(start, len(self._levels)):
            level = self._levels[i]
            u = level.transversal.get(g[level.point])
            if u is None:
                return g, i
            g = compose(g, invert(u))
        return g, len(self._levels)

    def _saturate(self, i: int) -> int:
        """Sift every Schreier generator of level i; return the next level to examine."""
        level = self._levels[i]
        for beta, u in list(level.transversal.items()):
            for s in level.generators:
                g = compose(compose(u, s), invert(level.transversal[s[beta]]))
                if g == self._identity:
                    continue
                h, j = self._strip(g, i + 1)
                if h == self._identity:
                    continue
                if j == len(self._levels):
                    self._levels.append(_Level(_moved_point(h)))
                self._strong.append(h)
                for k in range(i + 1, j + 1):
                    self._rebuild(k)
                return j
        return i - 1

    def _schreier_sims(self, base: Sequence[int]) -> None:
        points: list[int] = []
        for b in base:
            if b not in points:
                points.append(b)
        for g in self._strong:
            if all(g[b] == b for b in points):
                points.append(_moved_point(g))
        self._levels = [_Level(b) for b in points]
        for i in range(len(self._levels)):
            self._rebuild(i)
        i = len(self._levels) - 1
        while i >= 0:
            i = self._saturate(i)

    # queries

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(lv.point for lv in self._levels)

    @property
    def strong_generators(self) -> tuple[Permutation, ...]:
        return tuple(self._strong)

    @property
    def orbit_sizes(self) -> tuple[int, ...]:
        return tuple(len(lv.transversal) for lv in self._levels)

    @property
    def order(self) -> int:
        return math.prod(self.orbit_sizes)

    def contains(self, p: Sequence[int]) -> bool:
        h, j = self._strip(check_permutation(p, self.degree), 0)
        return j == len(self._levels) and h == self._identity

    def orbits(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for x in range(self.degree):
            if x not in seen:
                orbit = _orbit(x, self.generators)
                seen |= orbit
                out.append(tuple(sorted(orbit)))
        return out

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def random_element(self, rng: random.Random, length: int = 20) -> Permutation:
        """A random word in the generators and their inverses."""
        g = self._identity
        if not self.generators:
            return g
        for _ in range(length):
            s = rng.choice(self.generators)
            g = compose(g, s if rng.random() < 0.5 else invert(s))
        return g


# ---------------------------------------------------------------------------
# Distance colouring
# ---------------------------------------------------------------------------

def distance_coloring(form: QuadraticForm, vertices: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    """Matrix of Q[v_i - v_j]."""
    points = [lattice_point(v) for v in vertices]
    gram = form.integer_gram
    m = len(points)
    out = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            d = [a - b for a, b in zip(points[i], points[j])]
            value = Fraction(integer_norm(gram, d)) if gram is not None else eval_form(form, d)
            out[i][j] = out[j][i] = value
    return tuple(tuple(row) for row in out)


def _relabel(signatures: Sequence) -> tuple[int, ...]:
    labels = {sig: k for k, sig in enumerate(sorted(set(signatures)))}
    return tuple(labels[sig] for sig in signatures)


def color_classes(coloring: Sequence[Sequence]) -> tuple[tuple[int, ...], ...]:
    """Replace distance values by small integer codes, ordered by value."""
    codes = {value: k for k, value in enumerate(sorted({x for row in coloring for x in row}))}
    return tuple(tuple(codes[x] for x in row) for row in coloring)


def refine_partition(colors: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """
    Equitable refinement of the vertex set under a colour matrix.

    Cell labels are computed from sorted signatures only, so any
    colour-preserving permutation maps cells to cells with the same label.
    """
    m = len(colors)
    cells = _relabel([tuple(sorted(row)) for row in colors])
    while True:
        signatures = [
            (cells[i], tuple(sorted((colors[i][j], cells[j]) for j in range(m) if j != i)))
            for i in range(m)
        ]
        refined = _relabel(signatures)
        if len(set(refined)) == len(set(cells)):
            return refined
        cells = refined


# ---------------------------------------------------------------------------
# Polytope automorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineIsometry:
    """x -> linear x + translation, with the vertex permutation it induces."""
    linear: IntMatrix
    translation: tuple[int, ...]
    permutation: Permutation

    def apply(self, x: Sequence[int]) -> LatticePoint:
        return tuple(sum(a * b for a, b in zip(row, x)) + t for row, t in zip(self.linear, self.translation))


@dataclass(frozen=True)
class PolytopeAutGroup:
    group: PermutationGroup
    base: tuple[int, ...]
    generators: tuple[AffineIsometry, ...]
    search_orbit_sizes: tuple[int, ...]
    certification_failures: tuple[Permutation, ...]
    lattice_index: int

    @property
    def order(self) -> int:
        return math.prod(self.search_orbit_sizes)

    @property
    def is_generating(self) -> bool:
        return self.lattice_index == 1

    def linear_parts(self) -> list[IntMatrix]:
        return [g.linear for g in self.generators]


def _integral_gram(form: QuadraticForm) -> IntMatrix:
    """The Gram matrix scaled to integers; automorphisms do not see the scale."""
    if form.integer_gram is not None:
        return form.integer_gram
    entries = form.gram.entries
    scale = math.lcm(*(x.denominator for row in entries for x in row))
    return tuple(tuple(int(x * scale) for x in row) for row in entries)


def preserves_form(t: Sequence[Sequence[int]], gram: Sequence[Sequence[int]]) -> bool:
    """T^T G T == G."""
    n = len(gram)
    gt = [[sum(gram[i][k] * t[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return all(
        sum(t[k][i] * gt[k][j] for k in range(n)) == gram[i][j]
        for i in range(n)
        for j in range(n)
    )


def generating_index(vertices: Sequence[Sequence[int]]) -> int:
    """Index in Z^n of the lattice spanned by vertex differences (1 for generating polytopes)."""
    points = [lattice_point(v) for v in vertices]
    origin = points[0]
    return lattice_index(([a - b for a, b in zip(p, origin)] for p in points[1:]), len(origin))


class _PolytopeSearch:
    def __init__(self, form: QuadraticForm, vertices: Sequence[Sequence[int]], budget: Budget) -> None:
        self.points = [lattice_point(v) for v in vertices]
        self.index = {p: i for i, p in enumerate(self.points)}
        if len(self.index) != len(self.points):
            raise ValueError("vertex list has repeated points")
        self.n = form.dimension
        self.gram = _integral_gram(form)
        self.budget = budget

        self.colors = color_classes(distance_coloring(form, self.points))
        self.cells = refine_partition(self.colors)
        self.by_cell: dict[int, list[int]] = {}
        for i, c in enumerate(self.cells):
            self.by_cell.setdefault(c, []).append(i)
        sizes = Counter(self.cells)
        order = sorted(range(len(self.points)), key=lambda i: (sizes[self.cells[i]], i))
        chosen = affine_basis([self.points[i] for i in order])
        if len(chosen) != self.n + 1:
            raise NotFullDimensionalError(len(chosen) - 1, self.n)
        self.base = tuple(order[k] for k in chosen)
        log.debug("%d vertices in %d cells, base %s", len(self.points), len(sizes), self.base)

        self.origin = self.points[self.base[0]]
        columns = [[a - b for a, b in zip(self.points[k], self.origin)] for k in self.base[1:]]
        p_inv = inverse([[columns[c][r] for c in range(self.n)] for r in range(self.n)])
        self.denominator = math.lcm(*(x.denominator for row in p_inv for x in row))
        self.adjugate = tuple(tuple(int(x * self.denominator) for x in row) for row in p_inv)
        self.offsets = [tuple(a - b for a, b in zip(p, self.origin)) for p in self.points]
        self.failures: set[Permutation] = set()

    def _certify(self, images: Sequence[int]) -> AffineIsometry | None:
        n, d = self.n, self.denominator
        w0 = self.points[images[0]]
        w = [[a - b for a, b in zip(self.points[k], w0)] for k in images[1:]]
        # T = W P^-1 with W holding the image differences as columns
        t_num = [[sum(w[k][r] * self.adjugate[k][c] for k in range(n)) for c in range(n)] for r in range(n)]
        perm = []
        for off in self.offsets:
            y = [sum(a * b for a, b in zip(row, off)) for row in t_num]
            if any(v % d for v in y):
                return None
            j = self.index.get(tuple(a + v // d for a, v in zip(w0, y)))
            if j is None:
                return None
            perm.append(j)
        perm = tuple(perm)
        if len(set(perm)) != len(perm):
            return None
        if any(x % d for row in t_num for x in row):
            if perm not in self.failures:
                log.warning("vertex permutation with a non-integral affine extension: %s", perm)
                self.failures.add(perm)
            return None
        linear = tuple(tuple(x // d for x in row) for row in t_num)
        if not preserves_form(linear, self.gram) or abs(determinant(linear)) != 1:
            self.failures.add(perm)
            return None
        translation = tuple(a - sum(x * y for x, y in zip(row, self.origin)) for a, row in zip(w0, linear))
        return AffineIsometry(linear, translation, perm)

    def _extend(self, images: list[int]) -> AffineIsometry | None:
        k = len(images)
        if k == self.n + 1:
            return self._certify(images)
        b = self.base[k]
        cb = self.colors[b]
        for u in self.by_cell[self.cells[b]]:
            if u in images:
                continue
            cu = self.colors[u]
            if any(cu[images[j]] != cb[self.base[j]] for j in range(k)):
                continue
            self.budget.tick()
            images.append(u)
            found = self._extend(images)
            images.pop()
            if found is not None:
                return found
        return None

    def run(self) -> PolytopeAutGroup:
        found: list[AffineIsometry] = []
        orbit_sizes = [1] * (self.n + 1)
        for i in reversed(range(self.n + 1)):
            b = self.base[i]
            fixed = list(self.base[:i])
            orbit = _orbit(b, [g.permutation for g in found])
            cb = self.colors[b]
            for u in self.by_cell[self.cells[b]]:
                if u in orbit or u in fixed:
                    continue
                if any(self.colors[u][f] != cb[f] for f in fixed):
                    continue
                self.budget.tick()
                g = self._extend(fixed + [u])
                if g is not None:
                    found.append(g)
                    orbit = _orbit(b, [h.permutation for h in found])
            orbit_sizes[i] = len(orbit)
            log.debug("level %d: orbit of vertex %d has %d points", i, b, len(orbit))

        group = PermutationGroup(len(self.points), [g.permutation for g in found], self.base)
        if group.order != math.prod(orbit_sizes):
            log.warning("stabilizer chain order %d differs from search order %d", group.order, math.prod(orbit_sizes))
        return PolytopeAutGroup(
            group=group,
            base=self.base,
            generators=tuple(found),
            search_orbit_sizes=tuple(orbit_sizes),
            certification_failures=tuple(sorted(self.failures)),
            lattice_index=generating_index(self.points),
        )


def polytope_automorphisms(
    form: QuadraticForm,
    vertices: Sequence[Sequence[int]],
    budget: Budget | None = None,
) -> PolytopeAutGroup:
    """
    Lattice isometries of the polytope: affine maps with integral unimodular
    linear part that preserve Q and permute the vertices.

    Colour-preserving permutations whose affine extension is not integral are
    collected as certification failures instead of group elements.
    """
    result = _PolytopeSearch(form, vertices, budget or Budget.unlimited("polytope automorphisms")).run()
    log.info("polytope group of order %d on %d vertices", result.order, result.group.degree)
    return result


# ---------------------------------------------------------------------------
# Lattice automorphisms
# ---------------------------------------------------------------------------

def apply_matrix(t: Sequence[Sequence[int]], x: Sequence[int]) -> LatticePoint:
    return tuple(sum(a * b for a, b in zip(row, x)) for row in t)


@dataclass(frozen=True)
class LatticeAutGroup:
    generators: tuple[IntMatrix, ...]
    orbit_sizes: tuple[int, ...]

    @property
    def order(self) -> int:
        return math.prod(self.orbit_sizes)

    def verify(self, form: QuadraticForm) -> bool:
        gram = _integral_gram(form)
        return all(preserves_form(t, gram) and abs(determinant(t)) == 1 for t in self.generators)


class _LatticeSearch:
    """
    Basis e_0..e_{n-1} is sent to vectors of the same norms level by level.

    For every level the search keeps the candidate lists of all later levels,
    narrowed by the inner products with the images fixed so far. An
    automorphism maps the identity's narrowed lists bijectively onto these,
    so a node whose list sizes differ from the identity's fingerprint is cut.
    """

    def __init__(self, form: QuadraticForm, candidate_limit: int, budget: Budget) -> None:
        self.gram = _integral_gram(form)
        self.n = n = len(self.gram)
        self.budget = budget
        self.vectors: list[LatticePoint] = []
        self.gvectors: list[LatticePoint] = []
        self.buckets: dict[int, list[int]] = {self.gram[i][i]: [] for i in range(n)}
        top = max(self.buckets)
        scaled = form if form.integer_gram is not None else QuadraticForm.from_rows(self.gram)
        for x, q in iter_ellipsoid_points(scaled, (0,) * n, top):
            budget.tick()
            bucket = self.buckets.get(int(q))
            if bucket is None or not any(x):
                continue
            if len(bucket) >= candidate_limit:
                raise BudgetExceeded(f"lattice vectors of norm {int(q)}", candidate_limit)
            bucket.append(len(self.vectors))
            self.vectors.append(x)
            self.gvectors.append(apply_matrix(self.gram, x))
        log.debug("candidate vectors per norm: %s", {k: len(v) for k, v in sorted(self.buckets.items())})
        position = {x: i for i, x in enumerate(self.vectors)}
        self.units = [position[tuple(int(i == j) for j in range(n))] for i in range(n)]

        profiles = self._profiles()
        # identity[k]: candidate lists once e_0..e_{k-1} are fixed
        lists = [
            [x for x in self.buckets[self.gram[j][j]] if profiles[x] == profiles[self.units[j]]]
            for j in range(n)
        ]
        self.identity = [lists]
        for k in range(n):
            lists = self._narrow(lists, k, self.units[k])
            self.identity.append(lists)
        self.fingerprint = [[len(lists[j]) for j in range(n)] for lists in self.identity]
        log.debug("fingerprint: %s", self.fingerprint[1:])

    def _profiles(self) -> list[tuple]:
        """Inner products of each candidate with the smallest norm shell, as a sorted multiset."""
        shell = [self.vectors[x] for x in min(self.buckets.values(), key=len)]
        profiles = []
        for gx in self.gvectors:
            self.budget.tick()
            counts = Counter(sum(a * b for a, b in zip(y, gx)) for y in shell)
            profiles.append(tuple(sorted(counts.items())))
        return profiles

    def _narrow(self, lists: list[list[int]], k: int, w: int, check: bool = False) -> list[list[int]] | None:
        gw = self.gvectors[w]
        narrowed = list(lists)
        for j in range(k + 1, self.n):
            target = self.gram[j][k]
            kept = [x for x in lists[j] if sum(a * b for a, b in zip(self.vectors[x], gw)) == target]
            if check and len(kept) != self.fingerprint[k + 1][j]:
                return None
            narrowed[j] = kept
        return narrowed

    def _extend(self, images: list[int], lists: list[list[int]]) -> IntMatrix | None:
        k = len(images)
        if k == self.n:
            # column k of T is the image of e_k
            return tuple(tuple(self.vectors[images[c]][r] for c in range(self.n)) for r in range(self.n))
        for w in lists[k]:
            self.budget.tick()
            narrowed = self._narrow(lists, k, w, check=True)
            if narrowed is None:
                continue
            images.append(w)
            found = self._extend(images, narrowed)
            images.pop()
            if found is not None:
                return found
        return None

    def _orbit(self, start: LatticePoint, generators: Sequence[IntMatrix]) -> set[LatticePoint]:
        seen = {start}
        queue = [start]
        for x in queue:
            for t in generators:
                y = apply_matrix(t, x)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def run(self) -> LatticeAutGroup:
        found: list[IntMatrix] = []
        orbit_sizes = [1] * self.n
        for i in reversed(range(self.n)):
            e = self.vectors[self.units[i]]
            orbit = self._orbit(e, found)
            lists = self.identity[i]
            for w in lists[i]:
                if self.vectors[w] in orbit:
                    continue
                self.budget.tick()
                narrowed = self._narrow(lists, i, w, check=True)
                if narrowed is None:
                    continue
                t = self._extend(self.units[:i] + [w], narrowed)
                if t is not None:
                    found.append(t)
                    orbit = self._orbit(e, found)
            orbit_sizes[i] = len(orbit)
            log.debug("basis vector %d: orbit of %d vectors", i, len(orbit))
        return LatticeAutGroup(tuple(found), tuple(orbit_sizes))


def lattice_automorphisms(
    form: QuadraticForm,
    candidate_limit: int | None = None,
    budget: Budget | None = None,
) -> LatticeAutGroup:
    """
    O(Z^n, Q) by backtracking over images of the standard basis.

    Raises BudgetExceeded when some basis norm has more than `candidate_limit`
    lattice vectors or the node budget runs out.
    """
    if not form.is_positive_definite():
        raise ValueError("lattice automorphisms need a positive definite form")
    limit = settings.CANDIDATE_LIMIT if candidate_limit is None else candidate_limit
    result = _LatticeSearch(form, limit, budget or Budget.unlimited("lattice automorphisms")).run()
    log.info("lattice automorphism group of order %d, %d generators", result.order, len(result.generators))
    return result


# ---------------------------------------------------------------------------
# Coordinate symmetric subgroups and invariant forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoordinateSubgroup:
    k: int
    witness: tuple[int, ...]


def _coordinates_symmetric(g: Sequence[Sequence], subset: Sequence[int]) -> bool:
    first = subset[0]
    if any(g[i][i] != g[first][first] for i in subset):
        return False
    if len(subset) > 1:
        off = g[subset[0]][subset[1]]
        if any(g[i][j] != off for i, j in combinations(subset, 2)):
            return False
    rest = [l for l in range(len(g)) if l not in subset]
    return all(g[i][l] == g[first][l] for l in rest for i in subset)


def coordinate_symmetric_subgroup(form: QuadraticForm) -> CoordinateSubgroup:
    """Largest set of coordinates whose arbitrary permutations leave the Gram matrix invariant."""
    g = form.gram.entries
    n = form.dimension
    for k in range(n, 1, -1):
        for subset in combinations(range(n), k):
            if _coordinates_symmetric(g, subset):
                return CoordinateSubgroup(k, subset)
    return CoordinateSubgroup(1, (0,))


def quad_inv_dim(generators: Iterable[Sequence[Sequence[int]]], dimension: int | None = None) -> int:
    """
    Dimension of {S symmetric : T^T S T = S for every generator T}.

    Each generator contributes the matrix of S -> T^T S T - S in the basis of
    symmetric matrices E_ab (a <= b); the answer is the common nullity.
    """
    gens = [tuple(tuple(int(x) for x in row) for row in t) for t in generators]
    if dimension is None:
        if not gens:
            raise ValueError("dimension is required for an empty generator list")
        dimension = len(gens[0])
    n = dimension
    pairs = [(a, b) for a in range(n) for b in range(a, n)]
    rows: list[list[int]] = []
    for t in gens:
        block = [[0] * len(pairs) for _ in pairs]
        for col, (a, b) in enumerate(pairs):
            for row, (i, j) in enumerate(pairs):
                if a == b:
                    v = t[a][i] * t[a][j]
                else:
                    v = t[a][i] * t[b][j] + t[b][i] * t[a][j]
                if (i, j) == (a, b):
                    v -= 1
                block[row][col] = v
        rows.extend(block)
    if not rows:
        return len(pairs)
    return len(pairs) - row_reduce(rows, len(pairs)).rank
