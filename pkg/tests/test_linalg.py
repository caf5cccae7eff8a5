from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dgdeform import _kernels_py
from dgdeform.errors import SchemaError
from dgdeform.fields import F2, F3, F5, Q, Field
from dgdeform.linalg import (ExactMatrix, Subspace, SubquotientBasis, cohomology_at, inverse,
                             nullspace, rank, rref, solve_linear)

FIELDS = [F2, F3, F5, Q]


@st.composite
def matrices(draw, max_dim=6):
    F = draw(st.sampled_from(FIELDS))
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(1, max_dim))
    hi = 4 if F.p == 0 else F.p - 1
    lo = -4 if F.p == 0 else 0
    rows = [[F(draw(st.integers(lo, hi))) for _ in range(c)] for _ in range(r)]
    return ExactMatrix(F, r, c, rows)


def test_field_basics():
    assert F3.red(2 * 2) == 1 and F3.inv(2) == 2
    assert Q("3/4") * 4 == 3
    assert F5(Fraction(1, 2)) == 3
    with pytest.raises(SchemaError):
        F2(Fraction(1, 2))
    with pytest.raises(SchemaError):
        Field.from_name("r")
    assert Field.from_name("f5") == F5 and Field.from_name("q") == Q


def test_rref_small():
    rows, piv = rref(F3, [[1, 2, 0], [2, 1, 0], [0, 0, 1]], 3)
    assert piv == [0, 2]
    assert rows == [[1, 2, 0], [0, 0, 1]]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(A):
    ker = nullspace(A)
    assert rank(A) + len(ker) == A.ncols
    for v in ker:
        assert not any(A.apply(v))


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_linear_round_trip(A, data):
    F = A.field
    hi = 3 if F.p == 0 else F.p - 1
    x = [F(data.draw(st.integers(0, hi))) for _ in range(A.ncols)]
    b = A.apply(x)
    sol = solve_linear(A, b)
    assert sol is not None
    x0, K = sol
    assert A.apply(x0) == b
    assert len(K) == A.ncols - rank(A)


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_subspace_reduce_is_canonical(A):
    F = A.field
    S = Subspace(F, A.ncols, A.rows)
    for v in A.rows:
        assert S.contains(v)
        assert not any(S.reduce(v))
    if S.dim:
        w = [F.red(x + y) for x, y in zip(S.basis[0], [F.one] * A.ncols)]
        assert S.reduce(w) == S.reduce([F.one] * A.ncols)


def test_inverse_and_cohomology():
    F = F5
    A = ExactMatrix(F, 2, 2, [[1, 2], [3, 4]])
    assert A @ inverse(A) == ExactMatrix.identity(F, 2)
    d0 = ExactMatrix(F, 1, 1, [[1]])
    d1 = ExactMatrix(F, 0, 1, [])
    H = cohomology_at(d0, d1)
    assert H.dim == 0
    with pytest.raises(SchemaError):
        cohomology_at(ExactMatrix(F, 1, 1, [[1]]), ExactMatrix(F, 1, 1, [[1]]))


def test_subquotient_classify():
    F = F3
    H = SubquotientBasis(F, 3, [[1, 0, 0], [0, 1, 0]], [[1, 1, 0]])
    assert H.dim == 1
    a = H.classify([1, 0, 0])
    b = H.classify([0, 1, 0])
    assert a != [0] and b == [F.red(-x) for x in a]
    assert H.classify([1, 1, 0]) == [0]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 7), st.integers(1, 7), st.data())
def test_kernels_agree(p, r, c, data):
    rows = [[data.draw(st.integers(0, p - 1)) for _ in range(c)] for _ in range(r)]
    a = _kernels_py.rref_modp([x[:] for x in rows], c, p)
    try:
        from dgdeform import _kernels
    except ImportError:
        pytest.skip("compiled kernels not built")
    b = _kernels.rref_modp([x[:] for x in rows], c, p)
    assert [list(x) for x in a[0]] == [list(x) for x in b[0]] and list(a[1]) == list(b[1])
