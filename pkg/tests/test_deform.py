import pytest
from conftest import load
from hypothesis import given, settings, strategies as st
from oracles import cohomology_dim

from dgdeform import deform as D
from dgdeform.dg import ModuleMap, regular
from dgdeform.dgops import adjunction_check, cohomology
from dgdeform.errors import PreconditionError, SchemaError
from dgdeform.linalg import ExactMatrix
from dgdeform.library import ground_module
from dgdeform.mc import MCContext, brute_mc


def setup(name, alpha=None):
    I = load(name)
    ctx = MCContext(I.B, I.R)
    E = I.E if I.E is not None else regular(I.B)
    a = ctx.parse(alpha or {}) if alpha is not None else ctx.zero()
    return I, ctx, E, a


def test_worked_example_family_cohomology():
    # H(S_l) = k (degree 0) for l != 0 and A (x) R for l = 0; checked by enumeration too
    I, ctx, E, _ = setup("kx_r2_f3")
    for a in brute_mc(ctx):
        S = D.theta(E, I.R, a, ctx).S
        h = cohomology(S)
        lo, hi = h.window.lo, h.window.hi
        want = {n: 2 for n in range(lo, hi + 1)} if not any(a) else {0: 1}
        assert {n: d for n, d in h.dims.items() if d} == want
        assert {n: cohomology_dim(S, n) for n in range(lo, hi + 1) if cohomology_dim(S, n)} == want


def test_theta_refuses_non_mc():
    I, ctx, E, _ = setup("keller_pair_r2_f2")
    bad = [1] * ctx.dim(1)
    assert not ctx.is_mc(bad)
    with pytest.raises(PreconditionError):
        D.theta(E, I.R, bad, ctx)


def test_theta_needs_left_action():
    I, ctx, E, a = setup("kx_r2_f2")
    with pytest.raises(SchemaError):
        D.theta(E.forget(left=True), I.R, a, ctx)


def test_restriction_is_E():
    for name in ("kx_r2_f5", "kx_nc_f2", "kx_rtheta_f3", "contr_r2_f2", "keller_pair_r3_f2"):
        I, ctx, E, _ = setup(name)
        for a in brute_mc(ctx)[:6]:
            js = D.theta(E, I.R, a, ctx).to_json(with_matrices=False)
            assert js["restriction_equals_E"], (name, a)


@pytest.mark.parametrize("name", ["kx_r2_f3", "kx_nc_f2", "contr_r2_f2", "kx_rdiff_f2"])
def test_theta_functoriality(name):
    I, ctx, E, _ = setup(name)
    objs = brute_mc(ctx)
    checked = 0
    for a in objs:
        for b in objs:
            hs = ctx.hom(a, b)
            if hs.empty:
                continue
            Da, Db = D.theta(E, I.R, a, ctx), D.theta(E, I.R, b, ctx)
            for u in hs.classes()[:3]:
                h = [1] * ctx.dim(-1) if ctx.dim(-1) else None
                rep = D.theta_functoriality(Da, Db, u, h)
                assert rep["iso"] and rep["restricts_to_identity"]
                if h is not None:
                    assert rep["homotopic_iso"] and rep["difference_is_dh"] and rep["allowable"]
                checked += 1
    assert checked


@pytest.mark.parametrize("name,alpha", [("kx_r2_f3", {"x⊗e": 2}), ("kx_nc_f2", {}),
                                        ("kx_rtheta_f3", {"x^2⊗t": 1}), ("contr_r2_f2", None),
                                        ("kx_r3_f2", {"x⊗e^2": 1})])
def test_delta_round_trips(name, alpha):
    I, ctx, E, a = setup(name, alpha)
    S = D.theta(E, I.R, a, ctx).S
    rt = D.delta_round_trips(S)
    assert rt["unit_iso"] and rt["counit_iso"] and rt["comparison_iso"]
    lo, hi = rt["window"]
    assert lo <= 0 < hi


def test_certificates_positive():
    I, ctx, E, a = setup("kx_r2_f3", {"x⊗e": 1})
    Dm = D.theta(E, I.R, a, ctx)
    cert = D.check_def_h(Dm.S, E)
    assert cert.ok and cert.to_json()["eta_rank"] == 14
    T = D.delta(Dm).T
    assert D.check_codef_h(T, E).ok
    triv = D.trivial_codeformation(E, I.R)
    assert D.check_codef_h(triv.T, E).ok


def test_certificates_negative_augmentation_module():
    # m acts by zero: i*S = E, yet S is not graded R-free
    I, ctx, E, _ = setup("kx_r2_f2")
    S = D.augmentation_module(E, I.R)
    cert = D.check_def_h(S, E)
    assert not cert.ok and "free" in cert.reason
    assert D.check_def_h(D.trivial_deformation(E, I.R).S, E).ok


def test_certificate_rejects_wrong_restriction():
    I, ctx, E, a = setup("kx_r2_f3", {"x⊗e": 1})
    S = D.theta(E, I.R, a, ctx).S
    cert = D.check_def_h(S, ground_module(I.B.field, I.B))
    assert not cert.ok and cert.eta is None


@pytest.mark.parametrize("name,alpha", [("kx_r2_f3", {"x⊗e": 1}), ("kx_nc_f2", {}),
                                        ("kx_r3_f2", {"x⊗e^2": 1}), ("kx_rtheta_f3", {"x^2⊗t": 2})])
def test_filtration_and_surjectivity(name, alpha):
    I, ctx, E, a = setup(name, alpha)
    S = D.theta(E, I.R, a, ctx).S
    T = D.trivial_deformation(E, I.R).S
    rep = D.prop312_suite(S, T)
    assert rep["a_surjective"] and rep["b_subquotients_ok"]
    assert rep["b_filtration_length"] == I.R.dim


def test_iso_detected_after_restriction():
    I, ctx, E, _ = setup("kx_r2_f3")
    objs = brute_mc(ctx)
    a = objs[1]
    Da = D.theta(E, I.R, a, ctx)
    f = D.gauge_map(Da, Da, ctx.zero(0))
    rep = D.prop312_suite(Da.S, Da.S, f)
    assert rep["d_istar_iso"] and rep["d_f_iso"] and rep["d_ok"]
    z = ModuleMap(Da.S, Da.S, ExactMatrix.zero(ctx.F, Da.S.dim, Da.S.dim))
    rep0 = D.prop312_suite(Da.S, Da.S, z)
    assert not rep0["d_istar_iso"] and not rep0["d_f_iso"] and rep0["d_ok"]


def test_sigma_and_psi_squares():
    I, ctx, E, a = setup("keller_pair_r2_f2")
    S = D.theta(E, I.R, a, ctx).S
    X, u = D.sigma_unit_iso(E)
    assert u.is_dg_iso_inner()
    assert D.sigma_square(S, E, I.R).is_dg_iso_inner()
    psi = I.phi
    _, pu = D.psi_unit_iso(psi)
    assert pu.is_dg_iso_inner()
    ctxC = MCContext(I.C, I.R)
    for al in brute_mc(ctxC):
        SC = D.theta(regular(I.C), I.R, al, ctxC).S
        assert D.psi_square(SC, psi, I.R).is_dg_iso_inner()
        r = D.psi_theta_square(psi, I.R, al)
        assert r["iso"] and r["beta_is_mc"]


def test_adjunction_for_deformations():
    I, ctx, E, a = setup("kx_r2_f2", {"x⊗e": 1})
    S = D.theta(E, I.R, a, ctx).S
    ER = D.tensor_module(E, regular(I.R))
    r = adjunction_check(S, ER, S)
    assert r["chain_map"] and r["round_trip"]


def test_keller_subalgebra():
    I = load("keller_pair_r2_f3")
    C, incl = D.keller_subalgebra(I.B)
    assert sorted(C.space.labels) == sorted(I.C.space.labels)
    assert incl.is_valid()
    assert all(incl.quasi_iso.values()) and sorted(incl.quasi_iso) == [0, 1, 2, 3]
    assert C.space.dim_at(0) == 1 and C.space.dim_at(-1) == 0


def test_keller_refuses_bad_h0():
    I = load("kres_odd_f3")
    with pytest.raises(PreconditionError):
        D.keller_subalgebra(I.B)


@pytest.mark.parametrize("mode", ["homotopy-equivalence", "P-to-I"])
def test_cone_zigzag(mode):
    I = load("contr_r2_f2")
    z = D.cone_zigzag(I.g, mode)
    c = z["certificates"]
    assert all(c.values()), c


def test_zigzag_bad_mode():
    with pytest.raises(SchemaError):
        D.cone_zigzag(load("contr_r2_f2").g, "sideways")


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 4))
def test_theta_over_f5_is_deformation(lam):
    I, ctx, E, _ = setup("kx_r2_f5")
    a = ctx.parse({"x⊗e": lam}) if lam else ctx.zero()
    Dm = D.theta(E, I.R, a, ctx)
    assert D.check_def_h(Dm.S, E).ok
    assert Dm.to_json(False)["restriction_equals_E"]
