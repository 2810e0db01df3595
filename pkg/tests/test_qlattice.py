from fractions import Fraction

import pytest

from perfect_delaunay.core.qlattice import (
    AffineQuadraticFunction,
    QuadraticForm,
    eval_affine,
    eval_bilinear,
    eval_form,
    integer_norm,
    lattice_point,
)
from perfect_delaunay.exceptions import DimensionMismatchError, DomainError, NotPositiveDefiniteError

A2 = QuadraticForm.from_rows([[2, 1], [1, 2]])


def test_eval_form():
    assert eval_form(A2, (1, 0)) == 2
    assert eval_form(A2, (1, -1)) == 2
    assert eval_form(A2, (1, 1)) == 6
    assert eval_form(A2, (Fraction(1, 2), 0)) == Fraction(1, 2)


def test_bilinear_is_symmetric(rng):
    for _ in range(50):
        x = (rng.randint(-5, 5), rng.randint(-5, 5))
        y = (rng.randint(-5, 5), rng.randint(-5, 5))
        assert eval_bilinear(A2, x, y) == eval_bilinear(A2, y, x)
        assert eval_form(A2, x) == integer_norm(A2.integer_gram, x)


def test_polarization_identity(rng):
    form = QuadraticForm.from_rows([[4, 1, -2], [1, 3, 0], [-2, 0, 5]])
    for _ in range(50):
        x = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3))
        y = tuple(rng.randint(-5, 5) for _ in range(3))
        s = tuple(a + b for a, b in zip(x, y))
        assert eval_form(form, s) == eval_form(form, x) + eval_form(form, y) + 2 * eval_bilinear(form, x, y)


def test_dimension_checks():
    with pytest.raises(DimensionMismatchError):
        eval_form(A2, (1, 2, 3))
    with pytest.raises(DimensionMismatchError):
        AffineQuadraticFunction(A2, (0,), 1)


def test_lattice_point():
    assert lattice_point([1, "2", Fraction(6, 3)]) == (1, 2, 2)
    with pytest.raises(ValueError):
        lattice_point([Fraction(1, 2)])


def test_integer_gram():
    assert A2.integer_gram == ((2, 1), (1, 2))
    assert QuadraticForm.from_rows([[1, "1/2"], ["1/2", 1]]).integer_gram is None


def test_ldlt_of_indefinite_form_raises():
    form = QuadraticForm.from_rows([[1, 2], [2, 1]])
    assert not form.is_positive_definite()
    with pytest.raises(NotPositiveDefiniteError):
        form.ldlt


def test_affine_function():
    e = AffineQuadraticFunction(QuadraticForm.from_rows([[1]]), ("1/2",), "1/4")
    assert e.center == (Fraction(1, 2),)
    assert e((0,)) == 0
    assert e((1,)) == 0
    assert eval_affine(e, (2,)) == 2
    with pytest.raises(DomainError):
        AffineQuadraticFunction(A2, (0, 0), -1)
