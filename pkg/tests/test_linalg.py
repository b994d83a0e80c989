from fractions import Fraction

import numpy as np
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from dmorse.linalg import as_fraction_matrix, bareiss_echelon, hstack, identity, is_integral, nullspace, rank, to_jsonable, zeros

entries = st.one_of(st.integers(-4, 4), st.fractions(min_value=-3, max_value=3, max_denominator=4))


@st.composite
def matrices(draw):
    r = draw(st.integers(0, 5))
    c = draw(st.integers(0, 5))
    rows = draw(st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r))
    return as_fraction_matrix(rows, (r, c))


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_matches_sympy(m):
    ref = sympy.Matrix(m.shape[0], m.shape[1], [sympy.Rational(x.numerator, x.denominator) for x in m.flat]).rank()
    assert rank(m) == ref


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_nullspace_is_a_kernel_basis(m):
    z = nullspace(m)
    assert z.shape == (m.shape[1], m.shape[1] - rank(m))
    assert all(x == 0 for x in (m @ z).flat)
    assert rank(z) == z.shape[1]


def test_bareiss_keeps_integers():
    m = as_fraction_matrix([[2, 4, 1], [1, 2, 3], [0, 0, 5]])
    rows, pivots = bareiss_echelon(m)
    assert pivots == [0, 2]
    assert all(isinstance(x, int) for row in rows for x in row)


def test_fraction_entries_are_cleared():
    m = as_fraction_matrix([[Fraction(1, 2), Fraction(1, 3)], [1, Fraction(2, 3)]])
    assert rank(m) == 1


def test_helpers():
    assert rank(zeros(0, 3)) == 0
    assert rank(identity(4)) == 4
    assert is_integral(identity(2))
    assert not is_integral(as_fraction_matrix([[Fraction(1, 2)]]))
    assert hstack(zeros(2, 0), identity(2)).shape == (2, 2)
    assert to_jsonable(as_fraction_matrix([[Fraction(-1, 2), 3]])) == [["-1/2", 3]]
    assert isinstance(identity(2), np.ndarray)
