from fractions import Fraction

import pytest

from perfect_delaunay.core.perfection import evaluation_matrix, infer_quadratic, monomials, perfection_check
from perfect_delaunay.exceptions import NotFullDimensionalError, NotPerfectError

SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]
CUBE = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
# five points on the degenerate conic xy = 0
AXES = [(1, 0), (2, 0), (3, 0), (0, 1), (0, 2)]


def test_monomial_order():
    assert monomials(2) == ((0, 0), (0, 1), (1, 1), (0,), (1,), ())


def test_evaluation_matrix_rows():
    ev = evaluation_matrix([(2, 3)])
    assert ev.rows == ((4, 6, 9, 2, 3, 1),)
    assert ev.shape == (1, 6)


def test_segment_is_perfect():
    verdict = perfection_check([(0,), (1,)])
    assert verdict.is_perfect
    assert verdict.nullspace_dimension == 1
    assert verdict.coefficients == (1, -1, 0)
    e = verdict.generator
    assert e.form.gram.entries == ((Fraction(1),),)
    assert e.center == (Fraction(1, 2),)
    assert e.radius2 == Fraction(1, 4)


def test_square_and_cube_are_not_perfect():
    square = perfection_check(SQUARE)
    assert square.nullspace_dimension == 2
    assert not square.is_perfect
    cube = perfection_check(CUBE)
    assert cube.nullspace_dimension == 3
    with pytest.raises(NotPerfectError) as err:
        infer_quadratic(CUBE)
    assert err.value.nullspace_dimension == 3


def test_unique_but_indefinite_quadric():
    verdict = perfection_check(AXES)
    assert verdict.nullspace_dimension == 1
    assert verdict.generator is None
    assert not verdict.is_perfect
    with pytest.raises(NotPerfectError):
        infer_quadratic(AXES)


def test_flat_point_set_is_rejected():
    with pytest.raises(NotFullDimensionalError) as err:
        perfection_check([(0, 0), (1, 1), (2, 2)])
    assert err.value.affine_rank == 1
    assert err.value.dimension == 2


def test_inferred_quadric_matches_catalog(polytope):
    for record_id in ("segment", "G6", "tope35"):
        record, vertices = polytope(record_id)
        assert infer_quadratic(vertices) == record.affine_function()


def test_inference_does_not_depend_on_vertex_order(polytope, rng):
    _, vertices = polytope("G6")
    shuffled = list(vertices)
    rng.shuffle(shuffled)
    assert infer_quadratic(shuffled) == infer_quadratic(vertices)


def test_removing_a_vertex_breaks_perfection(polytope):
    _, vertices = polytope("G6")
    verdict = perfection_check(vertices[1:])
    assert verdict.nullspace_dimension == 2
    assert not verdict.is_perfect


def unimodular_image(points, rng):
    n = len(points[0])
    # upper unitriangular, so det = 1
    u = [[int(i == j) if j <= i else rng.randint(-2, 2) for j in range(n)] for i in range(n)]
    return [tuple(sum(u[i][j] * p[j] for j in range(n)) for i in range(n)) for p in points]


def test_perfection_is_invariant_under_unimodular_maps(polytope, rng):
    _, vertices = polytope("G6")
    for _ in range(3):
        moved = unimodular_image(vertices, rng)
        assert perfection_check(moved).is_perfect
        assert perfection_check(moved).nullspace_dimension == 1
    assert perfection_check(unimodular_image(SQUARE, rng)).nullspace_dimension == 2


def test_every_vertex_of_a_minimal_perfect_set_is_needed(polytope):
    # 35 = 7 * 10 / 2 vertices, the fewest a perfect 7-polytope can have
    _, vertices = polytope("tope35")
    for k in range(len(vertices)):
        rest = vertices[:k] + vertices[k + 1:]
        assert perfection_check(rest).nullspace_dimension == 2
