from fractions import Fraction

import pytest
import sympy

from perfect_delaunay.core.exactmath import (
    IncrementalSpan,
    SymmetricRationalMatrix,
    affine_basis,
    affine_rank,
    determinant,
    inverse,
    is_positive_definite,
    isqrt_floor,
    lattice_index,
    ldlt_decompose,
    mat_mul,
    mat_vec,
    primitive_integer_vector,
    rank,
    row_reduce,
    solve,
    to_rational,
)
from perfect_delaunay.exceptions import DimensionMismatchError, DomainError, NotPositiveDefiniteError


def random_matrix(rng, rows, cols, lo=-3, hi=3):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def test_to_rational_refuses_floats():
    assert to_rational("3/4") == Fraction(3, 4)
    assert to_rational(5) == Fraction(5)
    with pytest.raises(TypeError):
        to_rational(0.5)


def test_ldlt_small_example():
    ldl = ldlt_decompose(SymmetricRationalMatrix.from_rows([[2, 1], [1, 2]]))
    assert ldl.diagonal == (Fraction(2), Fraction(3, 2))
    assert ldl.lower[1][0] == Fraction(1, 2)
    assert ldl.lower[0][0] == ldl.lower[1][1] == 1


def test_ldlt_reports_failing_minor():
    with pytest.raises(NotPositiveDefiniteError) as err:
        ldlt_decompose(SymmetricRationalMatrix.from_rows([[1, 2], [2, 1]]))
    assert err.value.index == 2
    assert err.value.pivot == -3


def test_ldlt_reconstructs_matrix(rng):
    for _ in range(20):
        n = rng.randint(1, 5)
        a = random_matrix(rng, n, n)
        # A^T A + I is positive definite
        m = [[sum(a[k][i] * a[k][j] for k in range(n)) + (i == j) for j in range(n)] for i in range(n)]
        ldl = ldlt_decompose(SymmetricRationalMatrix.from_rows(m))
        d = [[ldl.diagonal[i] if i == j else 0 for j in range(n)] for i in range(n)]
        lt = [list(col) for col in zip(*ldl.lower)]
        assert mat_mul(mat_mul(ldl.lower, d), lt) == tuple(tuple(Fraction(x) for x in row) for row in m)


def test_positive_definite_matches_sympy(rng):
    for _ in range(40):
        n = rng.randint(1, 4)
        a = random_matrix(rng, n, n)
        m = [[a[i][j] + a[j][i] for j in range(n)] for i in range(n)]
        expected = sympy.Matrix(m).is_positive_definite
        assert is_positive_definite(SymmetricRationalMatrix.from_rows(m)) == expected


def test_symmetric_matrix_validation():
    with pytest.raises(ValueError):
        SymmetricRationalMatrix.from_rows([[1, 2], [3, 1]])
    with pytest.raises(DimensionMismatchError):
        SymmetricRationalMatrix.from_rows([[1, 2, 3], [2, 1, 0]])


def test_rank_matches_sympy(rng):
    for _ in range(40):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        m = random_matrix(rng, rows, cols, -2, 2)
        assert rank(m) == sympy.Matrix(m).rank()


def test_nullspace_is_primitive_kernel(rng):
    for _ in range(30):
        rows, cols = rng.randint(1, 4), rng.randint(2, 6)
        m = random_matrix(rng, rows, cols)
        red = row_reduce(m)
        assert red.rank + len(red.nullspace_basis) == cols
        for v in red.nullspace_basis:
            assert all(x.denominator == 1 for x in v)
            assert primitive_integer_vector(v) == tuple(int(x) for x in v)
            assert not any(mat_vec(m, v))


def test_row_reduce_echelon_is_row_order_independent(rng):
    m = random_matrix(rng, 4, 5)
    shuffled = list(m)
    rng.shuffle(shuffled)
    assert row_reduce(m).echelon == row_reduce(shuffled).echelon


def test_row_reduce_empty_matrix_needs_columns():
    red = row_reduce([], 3)
    assert red.rank == 0
    assert len(red.nullspace_basis) == 3
    with pytest.raises(DimensionMismatchError):
        row_reduce([])


def test_solve_inverse_determinant(rng):
    for _ in range(20):
        n = rng.randint(1, 4)
        m = random_matrix(rng, n, n)
        det = determinant(m)
        assert det == int(sympy.Matrix(m).det())
        if det == 0:
            with pytest.raises(DomainError):
                solve(m, [1] * n)
            continue
        rhs = [rng.randint(-5, 5) for _ in range(n)]
        x = solve(m, rhs)
        assert mat_vec(m, x) == tuple(Fraction(b) for b in rhs)
        inv = inverse(m)
        assert mat_mul(m, inv) == tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def test_primitive_integer_vector():
    assert primitive_integer_vector([Fraction(1, 2), Fraction(3, 4)]) == (2, 3)
    assert primitive_integer_vector([4, -6, 0]) == (2, -3, 0)
    assert primitive_integer_vector([0, 0]) == (0, 0)


def test_isqrt_floor():
    assert isqrt_floor(Fraction(17, 4)) == 2
    assert isqrt_floor(0) == 0
    assert isqrt_floor(Fraction(1, 4)) == 0
    assert isqrt_floor(9) == 3
    with pytest.raises(DomainError):
        isqrt_floor(Fraction(-1, 3))


def test_isqrt_floor_brackets_the_root(rng):
    for _ in range(200):
        q = Fraction(rng.randint(0, 10 ** 6), rng.randint(1, 10 ** 3))
        k = isqrt_floor(q)
        assert k * k <= q < (k + 1) * (k + 1)


def test_affine_basis_and_rank():
    square = [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert affine_basis(square) == (0, 1, 2)
    assert affine_rank(square) == 2
    assert affine_rank([(0, 0), (1, 1), (2, 2)]) == 1
    assert affine_rank([(5, 5)]) == 0


def test_incremental_span():
    span = IncrementalSpan(3)
    assert span.add((1, 1, 0))
    assert span.add((0, 1, 1))
    assert not span.add((1, 2, 1))
    assert span.contains((2, 1, -1))
    assert not span.contains((0, 0, 1))
    assert len(span) == 2


def test_lattice_index():
    assert lattice_index([(2, 0), (0, 1)], 2) == 2
    assert lattice_index([(1, 1), (1, -1)], 2) == 2
    assert lattice_index([(1, 0), (0, 1), (1, 1)], 2) == 1
    assert lattice_index([(1, 1), (2, 2)], 2) == 0


def test_lattice_index_matches_determinant(rng):
    for _ in range(30):
        n = rng.randint(1, 4)
        m = random_matrix(rng, n, n)
        assert lattice_index(m, n) == abs(int(sympy.Matrix(m).det()))
