from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from dualbimod.linalg import (
    Mat,
    Subspace,
    det,
    inverse,
    is_invertible,
    kernel_basis,
    rank,
    rref,
    scalar,
    solve,
)


def small_matrices(max_rows=5, max_cols=5, lo=-3, hi=3):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def test_rref_identity():
    R, piv = rref(Mat.identity(3))
    assert R == Mat.identity(3) and piv == [0, 1, 2]


def test_rref_zero():
    R, piv = rref(Mat.zeros(2, 2))
    assert R.is_zero() and piv == []


def test_rref_hand_reduced():
    R, piv = rref(Mat.from_rows([[2, 4], [1, 2]]))
    assert R == Mat.from_rows([[1, 2], [0, 0]]) and piv == [0]


def test_kernel_examples():
    assert kernel_basis(Mat.identity(4)).ncols == 0
    assert kernel_basis(Mat.zeros(1, 3)).ncols == 3
    K = kernel_basis(Mat.from_rows([[1, 1]]))
    assert K.ncols == 1 and K.col(0) == [-1, 1]


def test_solve_examples():
    b = [scalar(3), scalar("1/2"), scalar(-7)]
    assert solve(Mat.identity(3), b) == b
    assert solve(Mat.from_rows([[1, 1]]), [2]) == [2, 0]
    assert solve(Mat.zeros(1, 1), [1]) is None


def test_fractions_stay_exact():
    A = Mat.from_rows([[3, 1], [1, 3]])
    Ai = inverse(A)
    assert Ai[0, 0] == scalar("3/8") and Ai[0, 1] == scalar("-1/8")
    assert A @ Ai == Mat.identity(2)


def test_large_entries_do_not_overflow():
    big = 10**40
    A = Mat.from_rows([[big, 1], [1, big]])
    assert det(A) == big * big - 1
    assert A @ inverse(A) == Mat.identity(2)


def test_singular_inverse_raises():
    with pytest.raises(Exception):
        inverse(Mat.from_rows([[1, 2], [2, 4]]))
    assert not is_invertible(Mat.from_rows([[1, 2], [2, 4]]))


@given(small_matrices())
def test_rank_nullity(rows):
    A = Mat.from_rows(rows)
    assert rank(A) + kernel_basis(A).ncols == A.ncols


@given(small_matrices())
def test_rank_matches_sympy(rows):
    assert rank(Mat.from_rows(rows)) == oracles.rank(Mat.from_rows(rows))


@given(small_matrices())
def test_rref_matches_sympy_and_is_idempotent(rows):
    A = Mat.from_rows(rows)
    R, piv = rref(A)
    Rs, piv_s = oracles.rref(A)
    assert piv == piv_s
    assert [[Fraction(int(v.numerator), int(v.denominator)) for v in row] for row in R.to_rows()] == [
        [Fraction(int(sp_v.p), int(sp_v.q)) for sp_v in Rs.row(i)] for i in range(Rs.rows)
    ]
    R2, piv2 = rref(R)
    assert R2 == R and piv2 == piv


@given(small_matrices())
def test_pivot_columns_full_rank(rows):
    A = Mat.from_rows(rows)
    _, piv = rref(A)
    assert rank(A.submatrix(list(range(A.nrows)), piv)) == len(piv)


@given(small_matrices(), st.data())
def test_solve_is_exact(rows, data):
    A = Mat.from_rows(rows)
    b = data.draw(st.lists(st.integers(-5, 5), min_size=A.nrows, max_size=A.nrows))
    x = solve(A, b)
    if x is not None:
        assert A.apply(x) == [scalar(v) for v in b]
    else:
        assert not Subspace(A.sparse_columns(), A.nrows).contains({i: scalar(v) for i, v in enumerate(b) if v})


@given(small_matrices(4, 4))
def test_kernel_vectors_are_killed(rows):
    A = Mat.from_rows(rows)
    K = kernel_basis(A)
    assert (A @ K).is_zero()


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_sympy(rows):
    import sympy

    assert det(Mat.from_rows(rows)) == sympy.Matrix(rows).det()
