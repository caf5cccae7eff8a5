import pytest
from conftest import FINITE_MC, load
from oracles import Naive, mc_summary

from dgdeform.dg import AlgebraMap
from dgdeform.errors import PreconditionError
from dgdeform.fields import Q
from dgdeform.library import polynomial_window, truncated_polynomial
from dgdeform.linalg import ExactMatrix
from dgdeform.mc import (MCContext, brute_mc, compare_mc, fiber_o1, groupoid_skeleton, lift_enumerate,
                         lift_fiber, morphism_o0, obstruction_o2, torsor_act, torsor_suite)

# Frozen from the brute-force oracle in oracles.py (exhaustive enumeration of
# B (x) m in degrees -1, 0, 1 and the gauge action by conjugation).
FROZEN = {
    "contr_r2_f2": (2, 1, [2], [1]),
    "keller_pair_r2_f2": (4, 2, [2, 2], [2, 2]),
    "keller_pair_r2_f3": (9, 3, [3, 3, 3], [3, 3, 3]),
    "keller_pair_r3_f2": (8, 2, [4, 4], [4, 4]),
    "keller_pair_r3_f3": (27, 3, [9, 9, 9], [9, 9, 9]),
    "kx_nc_f2": (6, 4, [1, 1, 2, 2], [4, 4, 8, 8]),
    "kx_r2_f2": (2, 2, [1, 1], [2, 2]),
    "kx_r2_f3": (3, 3, [1, 1, 1], [3, 3, 3]),
    "kx_r2_f5": (5, 5, [1] * 5, [5] * 5),
    "kx_r3_f2": (2, 2, [1, 1], [4, 4]),
    "kx_rdiff_f2": (2, 1, [2], [1]),
    "kx_rtheta_f3": (3, 3, [1, 1, 1], [3, 3, 3]),
}


@pytest.mark.parametrize("name", FINITE_MC)
def test_groupoid_matches_frozen_oracle(name):
    I = load(name)
    sk = groupoid_skeleton(MCContext(I.B, I.R))
    got = (len(sk.objects), len(sk.orbits), sorted(len(o) for o in sk.orbits), sorted(sk.aut_counts()))
    assert got == FROZEN[name]


@pytest.mark.parametrize("name", ["kx_r2_f3", "kx_r3_f2", "kx_nc_f2", "kx_rtheta_f3", "contr_r2_f2"])
def test_groupoid_matches_live_oracle(name):
    I = load(name)
    ctx = MCContext(I.B, I.R)
    sk = groupoid_skeleton(ctx)
    ref = mc_summary(I.B, I.R)
    assert sorted(tuple(sorted(d.items())) for d in sk.to_json()["objects"]) == ref["mc"]
    assert (len(sk.orbits), sorted(sk.aut_counts())) == (ref["orbits"], ref["aut"])


@pytest.mark.parametrize("name", ["kx_r3_f2", "kx_nc_f2", "keller_pair_r3_f2"])
def test_stratified_equals_exhaustive(name):
    I = load(name)
    ctx = MCContext(I.B, I.R)
    log = []
    assert lift_enumerate(I.B, I.R, strata=log) == brute_mc(ctx)
    assert log[-1]["points"] == FROZEN[name][0]


def test_worked_example_mc_cone():
    # MC = {l x⊗e}; every orbit is a point
    for name, p in (("kx_r2_f2", 2), ("kx_r2_f3", 3), ("kx_r2_f5", 5)):
        I = load(name)
        ctx = MCContext(I.B, I.R)
        objs = brute_mc(ctx)
        assert [ctx.describe(o) for o in objs] == [{}] + [{"x⊗e": l} for l in range(1, p)]


def test_gauge_action_agrees_with_naive():
    I = load("kx_nc_f2")
    ctx, N = MCContext(I.B, I.R), Naive(I.B, I.R)
    name = {(i, j): f"{I.B.space.labels[i]}⊗{I.R.space.labels[j]}"
            for i in range(I.B.dim) for j in range(I.R.dim)}
    key = {v: k for k, v in name.items()}
    for a in brute_mc(ctx):
        na = {key[lab]: v for lab, v in ctx.describe(a).items()}
        for u in N.elements(0):
            uc = ctx.parse({name[k]: v for k, v in u.items()}, 0)
            want = {name[k]: v for k, v in sorted(N.act(u, na).items())}
            assert ctx.describe(ctx.gauge_act(uc, a)) == want


def test_o2_obstruction_example():
    I = load("kx_r3_f2")
    ctx = MCContext(I.B, I.R)
    xi = ctx.bar().parse({"x⊗e": 1})
    o = obstruction_o2(ctx, xi)
    js = o.to_json()
    assert not o.is_zero and js["ambient_dim"] == 1 and js["coords"] == [1]
    assert js["cocycle"] == {"x^2⊗e^2": 1}
    assert lift_fiber(ctx, xi).empty
    # the zero point is unobstructed
    assert obstruction_o2(ctx, ctx.bar().zero()).is_zero


def test_o2_refuses_non_mc_point():
    I = load("keller_pair_r3_f2")
    ctx = MCContext(I.B, I.R)
    bad = [1] * ctx.bar().dim(1)
    assert not ctx.bar().is_mc(bad)
    with pytest.raises(PreconditionError):
        obstruction_o2(ctx, bad)


def test_o1_and_translation():
    I = load("kx_nc_f2")
    ctx = MCContext(I.B, I.R)
    objs = brute_mc(ctx)
    bar = ctx.bar()
    by_base = {}
    for o in objs:
        by_base.setdefault(ctx.reduce_to(bar, o), []).append(o)
    pairs = [v for v in by_base.values() if len(v) > 1]
    assert pairs
    a, b = pairs[0][:2]
    o1 = fiber_o1(ctx, a, b)
    assert o1.degree == 1
    eta = ctx.restrict(ctx.embed([x - y for x, y in zip(b, a)], 1), 1, ctx.R.n)
    assert torsor_act(ctx, a, eta) == tuple(b)


@pytest.mark.parametrize("name", FINITE_MC)
def test_torsor_suite(name):
    I = load(name)
    rep = torsor_suite(MCContext(I.B, I.R))
    assert rep["ok"]
    assert rep["Z1_dim"] == (2 if name.startswith("keller") else 1)
    assert rep["morphism_checks"] > 0 and all(m["ok"] for m in rep["morphisms"])
    assert all(p["obstruction_ok"] and p["fiber_matches"] and p["difference_bijective"]
               for p in rep["points"])


def test_o0_on_worked_example():
    I = load("kx_r2_f3")
    ctx = MCContext(I.B, I.R)
    z = ctx.zero()
    rep = morphism_o0(ctx, z, z, ctx.bar().zero(0))
    assert rep["nonempty"] and rep["fiber_size"] == 3 and rep["H0_dim"] == 1 and rep["kernel_dim"] == 0


@pytest.mark.parametrize("name", ["keller_pair_r2_f2", "keller_pair_r2_f3",
                                  "keller_pair_r3_f2", "keller_pair_r3_f3"])
def test_comparison_is_equivalence(name):
    I = load(name)
    rep = compare_mc(I.phi, I.R)
    p = I.B.field.p
    assert rep["equivalence"]
    assert rep["orbits_C"] == rep["orbits_B"] == p
    assert rep["objects_C"] == p


def test_comparison_negative_control():
    # k -> k[x] is not a quasi-isomorphism; the induced functor misses objects
    F = load("kx_r2_f3").B.field
    B = polynomial_window(F, 6)
    k = truncated_polynomial(F, 0)
    phi = AlgebraMap(k, B, ExactMatrix.from_columns(F, B.dim, [B.unit]))
    rep = compare_mc(phi, truncated_polynomial(F, 1))
    assert not rep["essentially_surjective"] and not rep["equivalence"]
    assert rep["orbits_C"] == 1 and rep["orbits_B"] == 3


def test_symbolic_strata_over_q():
    B = polynomial_window(Q, 6)
    R = truncated_polynomial(Q, 2)
    st = lift_enumerate(B, R)
    assert len(st.first_stratum) == 1
    ctx = st.ctxs[2]
    xi = st.ctxs[1].parse({"x⊗e": Q("2/3")})
    assert st.lift_fiber(2, xi).empty
    assert not obstruction_o2(ctx, xi).is_zero
    with pytest.raises(PreconditionError):
        brute_mc(ctx)
