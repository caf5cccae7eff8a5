import pytest
from hypothesis import given, settings, strategies as st

from dgdeform.artinian import ArtinianDG, dual_bimodule, dual_checks, quotient, validate_artinian
from dgdeform.dg import DGAlgebra, validate_module
from dgdeform.errors import SchemaError
from dgdeform.fields import F2, F3, F5, Q
from dgdeform.graded import GradedSpace
from dgdeform.library import differential_artinian, noncommutative_square_zero, truncated_polynomial


def test_truncated_polynomial_filtration():
    R = truncated_polynomial(F3, 3)
    assert isinstance(R, ArtinianDG)
    assert R.n == 3 and R.starts == (0, 1, 2, 3, 4)
    assert R.describe_filtration() == [["e", "e^2", "e^3"], ["e^2", "e^3"], ["e^3"]]
    assert R.tags == ["dgart+", "dgart-", "art", "cart"]


def test_quotients_are_prefixes_and_compose():
    R = truncated_polynomial(F5, 3)
    Q2, pi = quotient(R, 3)
    Q1, _ = quotient(Q2, 2)
    Q1b, _ = quotient(R, 2)
    assert Q1.key() == Q1b.key()
    assert pi.is_valid()
    with pytest.raises(SchemaError):
        quotient(R, 0)


def test_rebase_to_adapted_basis():
    F = F3
    # basis 1, f = e + e^2, g = e^2 of k[e]/e^3
    sp = GradedSpace(F, [0, 0, 0], ["1", "f", "g"])
    mult = {(0, i): {i: 1} for i in range(3)}
    mult.update({(i, 0): {i: 1} for i in range(1, 3)})
    mult[(1, 1)] = {2: 1}          # f^2 = e^2 = g
    B = DGAlgebra(sp, [1, 0, 0], mult, {})
    R = validate_artinian(B)
    assert R.n == 2 and R.filtration_dims() == [2, 1, 0]
    # scrambled order: g listed before f
    sp2 = GradedSpace(F, [0, 0, 0], ["1", "g", "f"])
    m2 = {(0, i): {i: 1} for i in range(3)}
    m2.update({(i, 0): {i: 1} for i in range(1, 3)})
    m2[(2, 2)] = {1: 1}
    R2 = validate_artinian(DGAlgebra(sp2, [1, 0, 0], m2, {}))
    assert R2.space.labels == ("1", "f", "g")
    assert hasattr(R2, "rebase")


def test_rejects_non_nilpotent_and_bad_augmentation():
    F = F3
    sp = GradedSpace(F, [0, 0], ["1", "p"])
    mult = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {1: 1}}   # p idempotent
    with pytest.raises(SchemaError):
        validate_artinian(DGAlgebra(sp, [1, 0], mult, {}))
    R = truncated_polynomial(F, 1)
    with pytest.raises(SchemaError):
        validate_artinian(R, [1, 1])


def test_noncommutative_and_differential_examples():
    N = noncommutative_square_zero(F2)
    assert not N.is_commutative() and N.n == 2
    assert N.describe_filtration() == [["a", "b", "ab"], ["ab"]]
    D = differential_artinian(F2)
    assert D.n == 1 and D.diff
    assert "dgart-" in D.tags and "dgart+" not in D.tags


def test_dual_bimodule_signs_odd_generator():
    R = truncated_polynomial(Q, 1, 1, "t")
    Rs = dual_bimodule(R)
    t, ts = R.vec(1), Rs.space.basis_vector(1)
    assert Rs.space.labels == ("1*", "t*") and Rs.space.degrees == (0, -1)
    assert Rs.act_l(t, ts) == [-1, 0]     # t . t* = -1*
    assert Rs.act_r(ts, t) == [1, 0]      # t* . t = 1*


ARTINIANS = [
    lambda F: truncated_polynomial(F, 1),
    lambda F: truncated_polynomial(F, 3),
    lambda F: truncated_polynomial(F, 2, 1, "t"),
    lambda F: truncated_polynomial(F, 1, -1, "t"),
    noncommutative_square_zero,
    differential_artinian,
]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(ARTINIANS), st.sampled_from([F2, F3, F5, Q]))
def test_dual_bimodule_axioms(make, F):
    R = make(F)
    c = dual_checks(R)
    assert c["bimodule"] and c["k_submodule"] and c["hom_k_is_k"]
    assert not validate_module(dual_bimodule(R))
