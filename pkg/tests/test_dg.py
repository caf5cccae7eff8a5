import pytest
from hypothesis import given, settings, strategies as st

from dgdeform.dg import (AlgebraMap, DGAlgebra, DGModule, ModuleMap, TensorAlgebra, complex_module,
                         identity_map, opposite, regular, validate_dg_algebra, validate_module)
from dgdeform.dgops import (adjunction_check, cohomology, cone, direct_sum, end_algebra,
                            find_dg_iso, hom_complex, quotient_module, shift, subalgebra,
                            submodule, tensor_over)
from dgdeform.errors import PreconditionError, SchemaError
from dgdeform.fields import F2, F3, F5, Q
from dgdeform.graded import GradedSpace
from dgdeform.library import (contractible_cdga, contractible_pair, ground_module, keller_base,
                              polynomial_window, truncated_polynomial)
from dgdeform.linalg import ExactMatrix, inverse

from oracles import cohomology_dim


# random complexes with known cohomology ------------------------------------

@st.composite
def complexes(draw, fields=(F2, F3, F5)):
    """Sum of atoms k[n] and (k[n] -> k[n+1]) under a random basis change.

    Returns the complex and the expected cohomology dimensions.
    """
    F = fields if isinstance(fields, type(F2)) else draw(st.sampled_from(fields))
    atoms = draw(st.lists(st.tuples(st.integers(0, 3), st.booleans()), min_size=1, max_size=5))
    degrees, diff, expect = [], {}, {}
    for n, pair in atoms:
        if pair:
            a = len(degrees)
            degrees += [n, n + 1]
            diff[a] = {a + 1: 1}
        else:
            degrees.append(n)
            expect[n] = expect.get(n, 0) + 1
    M = complex_module(F, degrees, diff, window=(0, 4))
    # random invertible change of basis within each degree
    dim = len(degrees)
    rows = [[F.zero] * dim for _ in range(dim)]
    for d in set(degrees):
        idx = [i for i, x in enumerate(degrees) if x == d]
        k = len(idx)
        # unitriangular factors keep the change of basis invertible
        U = ExactMatrix(F, k, k, [[1 if r == c else (draw(st.integers(0, F.p - 1)) if c > r else 0)
                                   for c in range(k)] for r in range(k)])
        L = ExactMatrix(F, k, k, [[1 if r == c else (draw(st.integers(0, F.p - 1)) if c < r else 0)
                                   for c in range(k)] for r in range(k)])
        blk = (L @ U).rows
        for r, i in enumerate(idx):
            for c, j in enumerate(idx):
                rows[i][j] = blk[r][c]
    P = ExactMatrix(F, dim, dim, rows)
    D = inverse(P) @ M.d_full() @ P
    new = {j: {i: x for i, x in enumerate(col) if x} for j, col in enumerate(D.columns())}
    return complex_module(F, degrees, new, window=(0, 4)), expect


@settings(max_examples=40, deadline=None)
@given(complexes())
def test_cohomology_matches_atoms_and_oracle(data):
    M, expect = data
    h = cohomology(M, (0, 4))
    for n in range(0, 5):
        assert h.dim(n) == expect.get(n, 0) == cohomology_dim(M, n)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([F2, F3, F5]), st.data())
def test_hom_cohomology_is_hom_of_cohomology(F, data):
    M, hm = data.draw(complexes(F))
    N, hn = data.draw(complexes(F))
    H = hom_complex(M, N, "none")
    assert (H.d_full() @ H.d_full()).is_zero()
    h = cohomology(H, H.space.window)
    for n in H.space.window.degrees():
        want = sum(hm.get(i, 0) * hn.get(i + n, 0) for i in range(0, 5))
        assert h.dim(n) == want


@settings(max_examples=25, deadline=None)
@given(complexes())
def test_cone_of_identity_is_acyclic(data):
    M, _ = data
    C = cone(identity_map(M))
    assert cohomology(C, C.space.window).is_acyclic()


# algebras --------------------------------------------------------------------

def test_polynomial_window_structure():
    B = polynomial_window(F3, 6)
    assert B.space.labels == ("1", "x", "x^2", "x^3", "x^4", "x^5", "x^6")
    assert not validate_dg_algebra(B)
    assert B.space.inner() == (0, 5)
    assert B.mul(B.vec(3), B.vec(4)) == [0] * 7   # x^7 is outside the window


def test_leibniz_violation_is_named():
    F = F2
    sp2 = GradedSpace(F, [0, 0, 1], ["1", "s", "t"])
    m2 = {(0, i): {i: 1} for i in range(3)}
    m2.update({(i, 0): {i: 1} for i in range(1, 3)})
    m2[(1, 1)] = {1: 1}          # s^2 = s but d(s^2) = d(s) = t != 2 s t
    B2 = DGAlgebra(sp2, [1, 0, 0], m2, {1: {2: 1}})
    kinds = {(v.kind, v.items) for v in validate_dg_algebra(B2)}
    assert ("leibniz", ("s", "s")) in kinds


def test_contractible_cdga_and_keller_base():
    L = contractible_cdga(F3)
    assert not validate_dg_algebra(L)
    assert cohomology(DGModule(L.space, L.diff)).dims == {0: 1, 1: 0}
    K = keller_base(F3, 4)
    assert not validate_dg_algebra(K)
    h = cohomology(DGModule(K.space, K.diff))
    assert h.dims == {0: 1, 1: 1, 2: 1, 3: 1}


def test_opposite_and_tensor():
    R = truncated_polynomial(F5, 1, 1, "t")
    Rop = opposite(R)
    t = Rop.vec(1)
    assert Rop.mul(t, t) == R.mul(t, t)
    B = polynomial_window(F5, 4)
    T = TensorAlgebra(B, R)
    assert not validate_dg_algebra(T)
    x1, one_t = T.tensor_vec(B.vec(1), R.vec(0)), T.tensor_vec(B.vec(0), R.vec(1))
    # (1 (x) t)(x (x) 1) = (-1)^{|t||x|} x (x) t
    assert T.mul(one_t, x1) == [T.field.red(-v) for v in T.mul(x1, one_t)]


def test_end_algebras():
    B = polynomial_window(F2, 6)
    E = end_algebra(regular(B))
    h = cohomology(DGModule(E.space, E.diff))
    assert [h.dim(n) for n in range(0, 6)] == [1] * 6
    Ec = end_algebra(contractible_pair(F3))
    assert cohomology(DGModule(Ec.space, Ec.diff), Ec.space.window).is_acyclic()
    ev = Ec.evaluation_module()
    assert not validate_module(ev)


def test_sub_and_quotient_modules():
    B = polynomial_window(F3, 6)
    M = regular(B).forget(left=True)
    S, inc = submodule(M, [M.space.basis_vector(i) for i in range(2, 7)])
    Qm, pr = quotient_module(M, [M.space.basis_vector(i) for i in range(2, 7)])
    assert S.dim == 5 and Qm.dim == 2
    assert not validate_module(S) and not validate_module(Qm)
    assert (pr.matrix @ inc.matrix).is_zero()
    with pytest.raises(SchemaError):
        submodule(M, [M.space.basis_vector(1)])


def test_tensor_over_unit():
    B = truncated_polynomial(F3, 2)
    M = regular(B)
    X = tensor_over(M.forget(left=True), M)
    assert X.dim == B.dim


def test_adjunction_round_trip():
    B = truncated_polynomial(F3, 1)
    Mreg = regular(B)
    r = adjunction_check(Mreg.forget(left=True), Mreg, Mreg.forget(left=True))
    assert r["chain_map"] and r["round_trip"]
    k = ground_module(F3, B)
    r2 = adjunction_check(k, Mreg, Mreg.forget(left=True))
    assert r2["chain_map"] and r2["round_trip"]


def test_subalgebra_and_shift():
    K = keller_base(F2, 3)
    vecs = [K.unit_vector()] + [K.space.basis_vector(i) for i in range(K.dim) if K.deg(i) >= 2]
    C, incl = subalgebra(K, vecs)
    assert incl.is_valid() and C.dim == len(vecs)
    M = contractible_pair(F2)
    assert shift(M).space.degrees == (-1, 0)
    with pytest.raises(SchemaError):
        subalgebra(K, [K.space.basis_vector(1)])


def test_find_dg_iso():
    F = F3
    M = complex_module(F, [0, 0, 1], {0: {2: 1}})
    N = complex_module(F, [0, 0, 1], {1: {2: 2}})
    f = find_dg_iso(M, N)
    assert f is not None and f.is_dg_iso()
    assert find_dg_iso(M, complex_module(F, [0, 0, 1], {})) is None


def test_cone_refuses_open_maps():
    M = contractible_pair(F2)
    with pytest.raises(PreconditionError):
        cone(ModuleMap(M, M, ExactMatrix.identity(F2, 2), degree=1))


def test_direct_sum_cohomology():
    a = complex_module(F5, [0], {})
    b = contractible_pair(F5)
    S = direct_sum(a, b)
    assert cohomology(S, (0, 1)).dims == {0: 1, 1: 0}


def test_algebra_map_violations():
    B = polynomial_window(F2, 4)
    bad = AlgebraMap(B, B, ExactMatrix.zero(F2, B.dim, B.dim))
    assert not bad.is_valid()
    ok = AlgebraMap(B, B, ExactMatrix.identity(F2, B.dim))
    assert ok.is_valid()


def test_module_over_q():
    B = truncated_polynomial(Q, 2, 0)
    M = regular(B)
    assert not validate_module(M)
    assert cohomology(M.forget(left=True), (0, 0)).dim(0) == 3
