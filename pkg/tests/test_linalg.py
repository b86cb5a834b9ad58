from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.linalg import (NOT_IN_IMAGE, CochainComplex, CohomologyBasis, Field, MalformedComplex,
                             SparseMatrix, betti_numbers, rank, rank_kernel_image, solve_in_image)
from oracle import dense_rank, sparse_rank

FIELDS = [Field(2), Field(3), Field(5), Field(0)]


@st.composite
def matrices(draw, max_dim=7):
    F = draw(st.sampled_from(FIELDS))
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    lo, hi = (-3, 3) if F.p == 0 else (0, F.p - 1)
    rows = draw(st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r))
    return F, rows


def test_field_parse():
    assert Field.parse("Q") == Field(0)
    assert Field.parse("F3") == Field(3)
    assert Field.parse("2") == Field(2)
    with pytest.raises(ValueError):
        Field(4)


def test_field_arithmetic():
    F = Field(7)
    assert F.mul(3, F.inv(3)) == 1
    assert F(Fraction(1, 2)) == 4
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@given(matrices())
def test_rank_matches_sympy(fr):
    F, rows = fr
    m = SparseMatrix.from_dense(F, rows)
    assert rank(m) == dense_rank(rows, F.p)


@given(matrices())
def test_rank_nullity(fr):
    F, rows = fr
    m = SparseMatrix.from_dense(F, rows)
    r, ker, img = rank_kernel_image(m)
    assert r + len(ker) == m.ncols
    assert len(img) == r
    for v in ker:
        assert v and not m.apply(v)
    # the kernel vectors are independent
    K = SparseMatrix.from_columns(F, m.ncols, ker) if ker else None
    if K is not None:
        assert sparse_rank(K, F.p) == len(ker)


@given(matrices(), st.data())
def test_solve_in_image(fr, data):
    F, rows = fr
    m = SparseMatrix.from_dense(F, rows)
    x = {j: F(data.draw(st.integers(0, 4))) for j in range(m.ncols)}
    x = {j: v for j, v in x.items() if v}
    b = m.apply(x)
    sol = solve_in_image(m, b)
    assert sol is not NOT_IN_IMAGE
    assert m.apply(sol) == b


def test_not_in_image():
    F = Field(0)
    m = SparseMatrix.from_dense(F, [[1, 0], [0, 0]])
    assert solve_in_image(m, {1: 1}) is NOT_IN_IMAGE
    assert not NOT_IN_IMAGE


def test_transpose_and_product():
    F = Field(3)
    a = SparseMatrix.from_dense(F, [[1, 2], [0, 1], [2, 2]])
    assert a.transpose().transpose() == a
    assert (a.transpose() @ a).to_dense() == [[2, 0], [0, 0]]


def test_malformed_complex():
    F = Field(0)
    d0 = SparseMatrix.from_dense(F, [[1], [1]])
    d1 = SparseMatrix.from_dense(F, [[1, 0]])
    C = CochainComplex(F, {0: 1, 1: 2, 2: 1}, {0: d0, 1: d1})
    with pytest.raises(MalformedComplex):
        C.check()


def test_cohomology_of_interval_and_circle():
    for F in FIELDS:
        # interval: two vertices, one edge
        d0 = SparseMatrix.from_dense(F, [[-1, 1]])
        assert betti_numbers(CochainComplex(F, {0: 2, 1: 1}, {0: d0})) == [1, 0]
        # circle with two edges
        d0 = SparseMatrix.from_dense(F, [[-1, 1], [1, -1]])
        C = CochainComplex(F, {0: 2, 1: 2}, {0: d0})
        assert betti_numbers(C) == [1, 1]
        B = CohomologyBasis(C, 1)
        assert B.dim == 1
        assert B.is_coboundary(d0.apply({0: F.one}))
        assert not B.is_coboundary({0: F.one})
        with pytest.raises(ValueError):
            CohomologyBasis(CochainComplex(F, {0: 2, 1: 2, 2: 1},
                                           {0: d0, 1: SparseMatrix.from_dense(F, [[0, 0]])}), 0).coords({0: 1})


@given(matrices(max_dim=6))
def test_cohomology_of_two_term_complex(fr):
    F, rows = fr
    m = SparseMatrix.from_dense(F, rows)
    C = CochainComplex(F, {0: m.ncols, 1: m.nrows}, {0: m})
    r = dense_rank(rows, F.p)
    assert betti_numbers(C, 1) == [m.ncols - r, m.nrows - r]
