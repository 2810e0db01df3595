from fractions import Fraction

from perfect_delaunay.core.enumeration import (
    arithmetic_minimum,
    enumerate_in_ellipsoid,
    iter_ellipsoid_points,
    scan_box,
    shortest_vectors,
    verify_delaunay,
)
from perfect_delaunay.core.exactmath import inverse, isqrt_floor
from perfect_delaunay.core.qlattice import AffineQuadraticFunction, QuadraticForm, eval_form

SEGMENT = AffineQuadraticFunction(QuadraticForm.from_rows([[1]]), ("1/2",), "1/4")
SQUARE = AffineQuadraticFunction(QuadraticForm.from_rows([[1, 0], [0, 1]]), ("1/2", "1/2"), "1/2")


def random_form(rng, n):
    a = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
    return QuadraticForm.from_rows(
        [[sum(a[k][i] * a[k][j] for k in range(n)) + (i == j) for j in range(n)] for i in range(n)]
    )


def oracle(form, center, radius2):
    """Brute force over a box that provably contains the ellipsoid."""
    inv = inverse(form.gram.entries)
    lower, upper = [], []
    for k, c in enumerate(center):
        reach = isqrt_floor(radius2 * inv[k][k]) + 1
        lower.append(int(c) - reach - 1)
        upper.append(int(c) + reach + 1)
    found = []
    for x in scan_box(lower, upper):
        q = eval_form(form, [xi - ci for xi, ci in zip(x, center)])
        if q <= radius2:
            found.append((x, q))
    return sorted(found)


def test_scan_box_order():
    assert list(scan_box([0, 0], [1, 1])) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_fincke_pohst_matches_box_scan(rng):
    for _ in range(200):
        n = rng.randint(1, 3)
        form = random_form(rng, n)
        center = tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n))
        radius2 = Fraction(rng.randint(1, 40), rng.randint(1, 3))
        points = sorted(iter_ellipsoid_points(form, center, radius2))
        assert points == oracle(form, center, radius2)


def test_negative_radius_yields_nothing():
    assert list(iter_ellipsoid_points(SEGMENT.form, SEGMENT.center, -1)) == []


def test_enumerate_splits_interior_and_boundary():
    e = AffineQuadraticFunction(QuadraticForm.from_rows([[1]]), (0,), 1)
    result = enumerate_in_ellipsoid(e)
    assert result.interior == (((0,), Fraction(-1)),)
    assert result.boundary == ((-1,), (1,))
    assert result.interior_count == 1
    assert result.boundary_count == 2


def test_verify_delaunay_segment_and_square():
    assert verify_delaunay(SEGMENT, [(0,), (1,)]).passed
    assert verify_delaunay(SQUARE, [(0, 0), (1, 0), (0, 1), (1, 1)]).passed


def test_verify_delaunay_reports_differences():
    verdict = verify_delaunay(SEGMENT, [(0,)])
    assert not verdict.passed
    assert verdict.unexpected == ((1,),)

    verdict = verify_delaunay(SEGMENT, [(0,), (1,), (2,)])
    assert verdict.missing == ((2,),)

    big = AffineQuadraticFunction(SEGMENT.form, ("1/2",), "9/4")
    verdict = verify_delaunay(big, [(-1,), (2,)])
    assert verdict.interior == ((0,), (1,))
    assert "interior" in verdict.describe()


def test_shortest_vectors():
    cubic = shortest_vectors(QuadraticForm.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert cubic.minimum == 1
    assert cubic.count == 6

    hexagonal = shortest_vectors(QuadraticForm.from_rows([[2, 1], [1, 2]]))
    assert hexagonal.minimum == 2
    assert set(hexagonal.minimizers) == {(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)}


def test_shortest_vectors_restarts_below_the_diagonal():
    # diagonal entries are 5 but (1, -1) has norm 2
    form = QuadraticForm.from_rows([[5, 4], [4, 5]])
    result = shortest_vectors(form)
    assert result.minimum == 2
    assert result.minimizers == ((-1, 1), (1, -1))


def test_shortest_vectors_against_brute_force(rng):
    for _ in range(200):
        n = rng.randint(1, 3)
        form = random_form(rng, n)
        start = min(form.gram[i, i] for i in range(n))
        points = [x for x, _ in oracle(form, (0,) * n, start) if any(x)]
        best = min(eval_form(form, x) for x in points)
        result = shortest_vectors(form)
        assert result.minimum == best
        assert set(result.minimizers) == {x for x in points if eval_form(form, x) == best}


def test_arithmetic_minimum():
    result = arithmetic_minimum(SQUARE.form, SQUARE.center)
    assert result.minimum == Fraction(1, 2)
    assert result.minimizers == ((0, 0), (0, 1), (1, 0), (1, 1))

    at_lattice_point = arithmetic_minimum(SQUARE.form, (3, -2))
    assert at_lattice_point.minimum == 0
    assert at_lattice_point.minimizers == ((3, -2),)


def test_catalog_polytopes_are_empty_spheres(polytope):
    for record_id in ("segment", "G6"):
        record, vertices = polytope(record_id)
        assert verify_delaunay(record.affine_function(), vertices).passed


def test_arithmetic_minimum_against_brute_force(rng):
    for _ in range(200):
        n = rng.randint(1, 3)
        form = random_form(rng, n)
        center = tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n))
        rounded = [round(c) for c in center]
        start = eval_form(form, [r - c for r, c in zip(rounded, center)])
        points = oracle(form, center, start)
        best = min(q for _, q in points)
        result = arithmetic_minimum(form, center)
        assert result.minimum == best
        assert set(result.minimizers) == {x for x, q in points if q == best}


def test_arithmetic_minimum_of_a_delaunay_center_is_the_vertex_set(polytope):
    record, vertices = polytope("D8_1")
    result = arithmetic_minimum(record.form(), record.center)
    assert result.minimum == record.radius2_value
    assert result.count == len(vertices) == 44
    assert set(result.minimizers) == set(vertices)
