from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hhlab.errors import NotASubspace
from hhlab.fields import Field, QQ
from hhlab.linalg import (
    Mat, Subspace, kernel_basis, rank, row_space, solve, solve_multi,
)

F2 = Field(2)
F5 = Field(5)


def test_field_basics():
    assert QQ.of("1/2") == Fraction(1, 2)
    assert F5.of("1/2") == 3  # 2 * 3 = 6 = 1 mod 5
    assert F2.of(-1) == 1
    with pytest.raises(ValueError):
        Field(4)
    with pytest.raises(ZeroDivisionError):
        F2.of(Fraction(1, 2))


def test_rank_identity_and_zero():
    assert rank(Mat.identity(QQ, 3)) == 3
    assert rank(Mat.zeros(QQ, 3, 3)) == 0


def test_rank_equal_rows_mod2():
    m = Mat.from_dense(F2, [[1, 1], [1, 1]])
    assert rank(m) == 1


def test_kernel_dims():
    assert kernel_basis(Mat.zeros(QQ, 3, 3)).dim == 3
    assert kernel_basis(Mat.identity(QQ, 3)).dim == 0
    k = kernel_basis(Mat.from_dense(F2, [[1, 1]]))
    assert k.dim == 1
    assert k.basis_vectors() == [(1, 1)]


def test_solve_cases():
    assert solve(Mat.identity(QQ, 2), (QQ.of(1), QQ.of(2))) == (Fraction(1), Fraction(2))
    assert solve(Mat.zeros(QQ, 2, 2), (QQ.of(1), QQ.of(0))) is None
    assert solve(Mat.from_dense(QQ, [[2]]), (QQ.of(1),)) == (Fraction(1, 2),)


def test_solve_multi_mixed_consistency():
    # One inconsistent rhs must not corrupt the consistent ones.
    m = Mat.from_dense(QQ, [[0, 0], [1, 0]])
    bad = (QQ.of(1), QQ.of(0))
    good = (QQ.of(0), QQ.of(3))
    sols = solve_multi(m, [bad, good, bad])
    assert sols[0] is None and sols[2] is None
    assert m.apply(sols[1]) == good


def test_quotient_dim():
    full = Subspace.from_vectors(QQ, 3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    zero = Subspace.from_vectors(QQ, 3, [])
    assert full.quotient_dim(full) == 0
    assert full.quotient_dim(zero) == 3
    big = Subspace.from_vectors(QQ, 3, [(1, 0, 0), (0, 1, 0)])
    small = Subspace.from_vectors(QQ, 3, [(1, 1, 0)])
    assert big.quotient_dim(small) == 1
    outside = Subspace.from_vectors(QQ, 3, [(0, 0, 1)])
    with pytest.raises(NotASubspace):
        big.quotient_dim(outside)


def test_matmul_and_stack():
    a = Mat.from_dense(QQ, [[1, 2], [3, 4]])
    b = Mat.from_dense(QQ, [[0, 1], [1, 0]])
    assert (a @ b) == Mat.from_dense(QQ, [[2, 1], [4, 3]])
    assert (a - a).is_zero()


# --- property tests --------------------------------------------------------

def sparse_matrices(field):
    scalars = st.integers(min_value=-4, max_value=4)
    return st.integers(min_value=1, max_value=6).flatmap(
        lambda r: st.integers(min_value=1, max_value=6).flatmap(
            lambda c: st.lists(
                st.tuples(st.integers(0, r - 1), st.integers(0, c - 1), scalars),
                max_size=12,
            ).map(lambda ts: Mat.from_triples(field, r, c, ts))
        )
    )


@settings(max_examples=120, deadline=None)
@given(sparse_matrices(QQ))
def test_rank_transpose_q(m):
    assert rank(m) == rank(m.transpose())


@settings(max_examples=120, deadline=None)
@given(sparse_matrices(F2))
def test_rank_transpose_f2(m):
    assert rank(m) == rank(m.transpose())


@settings(max_examples=120, deadline=None)
@given(sparse_matrices(F5))
def test_rank_nullity(m):
    assert kernel_basis(m).dim + rank(m) == m.cols


@settings(max_examples=100, deadline=None)
@given(sparse_matrices(QQ), st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_solve_roundtrip(m, coeffs):
    x = tuple(QQ.of(c) for c in coeffs[: m.cols])
    rhs = m.apply(x)
    sol = solve(m, rhs)
    assert sol is not None
    assert m.apply(sol) == rhs


@settings(max_examples=60, deadline=None)
@given(sparse_matrices(F5))
def test_kernel_vectors_annihilated(m):
    for v in kernel_basis(m).basis_vectors():
        assert not any(m.apply(v))


@settings(max_examples=60, deadline=None)
@given(sparse_matrices(QQ))
def test_determinism_repeat(m):
    r1 = rank(m)
    k1 = kernel_basis(m)
    assert rank(m) == r1
    assert kernel_basis(m) == k1


@settings(max_examples=60, deadline=None)
@given(sparse_matrices(F2))
def test_row_space_dim(m):
    assert row_space(m).dim == rank(m)
