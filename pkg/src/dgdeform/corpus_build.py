"""Regenerate the bundled instance corpus: ``python3 -m dgdeform.corpus_build``."""
import argparse
import os

from .artinian import validate_artinian
from .deform import keller_subalgebra
from .dg import DGAlgebra, DGModule, identity_map
from .dgops import end_algebra
from .fields import F2, F3, F5
from .graded import GradedSpace
from .io import dump_instance, dumps
from .library import (contractible_pair, differential_artinian, ground_module, keller_base,
                      noncommutative_square_zero, polynomial_window, truncated_polynomial)

HERE = os.path.join(os.path.dirname(__file__), "corpus")


def _plain(B, name=None):
    """Forget the tensor bookkeeping; keep the structure constants."""
    return DGAlgebra(B.space, B.unit, B.mult, B.diff, name=name or B.name)


def odd_square_zero(F, deg=-1, var="t"):
    """k[t]/t^2 with |t| odd."""
    sp = GradedSpace(F, [0, deg], ["1", var])
    mult = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}
    return validate_artinian(DGAlgebra(sp, [1, 0], mult, {}, name=f"k[{var}]/{var}^2"))


def build():
    out = {}
    for F in (F2, F3, F5):
        B = polynomial_window(F, 6)
        R = truncated_polynomial(F, 1)
        name = f"kx_r2_{F.name}"
        out[name] = dump_instance(
            name, F, "k[x] (|x| = 1, window [0,6]) with R = k[e]/e^2",
            "worked example: MC cone {l x⊗e}, p singleton orbits, H(S_l) = k for l != 0",
            B=B, R=R, alpha={"x⊗e": 1}, tags=["finite", "worked-example"])
    B = polynomial_window(F2, 6)
    out["kx_r3_f2"] = dump_instance(
        "kx_r3_f2", F2, "k[x] with R = k[e]/e^3 over F2",
        "obstruction example: o2(x⊗e) != 0, MC = {0, x⊗e^2}",
        B=B, R=truncated_polynomial(F2, 2), alpha={"x⊗e": 1}, tags=["finite", "obstruction"])
    out["kx_nc_f2"] = dump_instance(
        "kx_nc_f2", F2, "k[x] with the noncommutative R = k<a,b>/(a^2, b^2, ba)",
        "torsor axioms with noncommutative coefficients",
        B=B, R=noncommutative_square_zero(F2), tags=["finite", "noncommutative"])
    out["kx_rdiff_f2"] = dump_instance(
        "kx_rdiff_f2", F2, "k[x] with R = <1, u, v>, |u| = -1, du = v",
        "torsor axioms with a differential on R",
        B=B, R=differential_artinian(F2), tags=["finite", "differential-R"])
    out["kx_rtheta_f3"] = dump_instance(
        "kx_rtheta_f3", F3, "k[x] with R = k[t]/t^2, |t| = -1",
        "graded coefficients (dgart-), odd generator",
        B=polynomial_window(F3, 6), R=odd_square_zero(F3), alpha={"x^2⊗t": 1},
        tags=["finite", "graded-R"])
    E = contractible_pair(F2)
    End = end_algebra(E)
    Ev = End.evaluation_module()
    out["contr_r2_f2"] = dump_instance(
        "contr_r2_f2", F2, "End(k -> k) acting on the contractible complex, R = k[e]/e^2",
        "MC algebra with a nonzero differential; acyclic End",
        B=_plain(End, "End(k->k)"), R=truncated_polynomial(F2, 1),
        E=DGModule(Ev.space, Ev.diff, None, None, _plain(End, "End(k->k)"), Ev.lact, name="k->k"),
        g=identity_map(E), tags=["finite", "differential-B"])
    for F in (F2, F3):
        K = keller_base(F, 4)
        Kp = _plain(K)
        C, incl = keller_subalgebra(Kp)
        for r, n in (("r2", 1), ("r3", 2)):
            name = f"keller_pair_{r}_{F.name}"
            out[name] = dump_instance(
                name, F, "Keller pair C -> B, B = k[x]_{[0,4]} ⊗ <1,s,t> (ds = t)",
                "comparison theorem: C -> B quasi-iso with H^0 = k induces an MC equivalence",
                B=Kp, R=truncated_polynomial(F, n), C=C, phi=incl, tags=["finite", "keller"])
    Y = truncated_polynomial(F2, 1, 0, "y")
    Yp = _plain(Y)
    out["kres_f2"] = dump_instance(
        "kres_f2", F2, "k over k[y]/y^2 (|y| = 0)",
        "resolution, truncation and finite-model certificates",
        B=Yp, N=ground_module(F2, Yp), tags=["finite", "resolution"])
    Yq = truncated_polynomial(F3, 1, -1, "y")
    out["kres_odd_f3"] = dump_instance(
        "kres_odd_f3", F3, "k over k[y]/y^2 with |y| = -1",
        "resolution over a nonpositively graded algebra",
        B=_plain(Yq), N=ground_module(F3, _plain(Yq)), tags=["finite", "resolution"])
    return out


MANIFEST = {
    "contr_r2_f2": "End of a contractible complex; MC algebra with nonzero differential (torsor axioms)",
    "keller_pair_r2_f2": "Keller pair over F2, R = k[e]/e^2 (comparison theorem, Keller subalgebra)",
    "keller_pair_r2_f3": "Keller pair over F3, R = k[e]/e^2 (comparison theorem, Keller subalgebra)",
    "keller_pair_r3_f2": "Keller pair over F2, R = k[e]/e^3 (comparison theorem, Keller subalgebra)",
    "keller_pair_r3_f3": "Keller pair over F3, R = k[e]/e^3 (comparison theorem, Keller subalgebra)",
    "kres_f2": "k over k[y]/y^2 (resolution, truncation, finite model)",
    "kres_odd_f3": "k over k[y]/y^2 with |y| = -1 (resolution, truncation)",
    "kx_nc_f2": "k[x] with noncommutative R (torsor axioms)",
    "kx_r2_f2": "k[x] with k[e]/e^2 over F2 (worked example, MC groupoid)",
    "kx_r2_f3": "k[x] with k[e]/e^2 over F3 (worked example, MC groupoid)",
    "kx_r2_f5": "k[x] with k[e]/e^2 over F5 (worked example, MC groupoid)",
    "kx_r3_f2": "k[x] with k[e]/e^3 over F2 (order-by-order obstruction)",
    "kx_rdiff_f2": "k[x] with R carrying a differential (torsor axioms)",
    "kx_rtheta_f3": "k[x] with an odd square-zero R (graded coefficients)",
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=HERE)
    args = ap.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    docs = build()
    assert sorted(docs) == sorted(MANIFEST), "manifest and corpus disagree"
    for name, doc in sorted(docs.items()):
        with open(os.path.join(args.out, f"{name}.json"), "w", encoding="utf-8") as fh:
            fh.write(dumps(doc))
    man = {"schema": "manifest", "instances": [
        {"name": n, "file": f"{n}.json", "provenance": MANIFEST[n], "field": docs[n]["field"],
         "tags": docs[n].get("tags", [])} for n in sorted(docs)]}
    with open(os.path.join(args.out, "manifest.json"), "w", encoding="utf-8") as fh:
        fh.write(dumps(man))
    print(f"wrote {len(docs)} instances to {args.out}")


if __name__ == "__main__":
    main()
