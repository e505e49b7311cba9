from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nilflex.linalg import (
    Matrix,
    NotACocycle,
    QuotientMap,
    inverse,
    minor_nonzero_witness,
    nullspace_basis,
    rank,
    rref,
    solve,
    symbolic_det,
)
from nilflex.poly import MultiPoly

small = st.integers(-4, 4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    assert rank(Matrix(rows)) == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_nullspace_is_kernel_of_right_size(rows):
    m = Matrix(rows)
    ns = nullspace_basis(m)
    assert len(ns) == m.ncols - rank(m)
    for v in ns:
        assert not any(m.apply(v))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_when_invertible(rows):
    m = Matrix(rows)
    if sympy.Matrix(rows).det() == 0:
        with pytest.raises(ValueError):
            inverse(m)
    else:
        assert m @ inverse(m) == Matrix.identity(3)


def test_rref_pivots():
    r, k, piv = rref(Matrix([[0, 2, 4], [0, 1, 2], [1, 0, 1]]))
    assert k == 2 and piv == (0, 1)
    assert r.rows[1] == (0, 1, 2)


def test_solve():
    m = Matrix([[1, 2], [3, 4]])
    assert solve(m, [5, 6]) == (Fraction(-4), Fraction(9, 2))
    assert solve(Matrix([[1, 1], [1, 1]]), [1, 2]) is None


def test_quotient_coordinates_and_non_cocycle():
    e = lambda i: tuple(Fraction(int(i == j)) for j in range(3))
    q = QuotientMap([e(0), e(1)], [e(0)], 3)
    assert q.rank == 1
    assert q.coordinates((Fraction(5), Fraction(2), Fraction(0))) == (Fraction(2),)
    with pytest.raises(NotACocycle):
        q.coordinates(e(2))


def test_symbolic_det_against_sympy():
    names = ("A", "B", "C")
    A, B, C = MultiPoly.gens(names)
    m = Matrix([[A, B, 0], [C, A, B], [0, C, A]])
    det = symbolic_det(m)
    a, b, c = sympy.symbols("A B C")
    ref = sympy.expand(sympy.Matrix([[a, b, 0], [c, a, b], [0, c, a]]).det())
    assert sympy.expand(sympy.sympify(str(det).replace("^", "**"))) == ref


def test_minor_witness_certifies_rank():
    A, B = MultiPoly.gens(("A", "B"))
    m = Matrix([[A, B], [2 * A, 2 * B]])
    rows, cols, det = minor_nonzero_witness(m, 1)
    assert not det.is_zero()
    assert minor_nonzero_witness(m, 2) is None
