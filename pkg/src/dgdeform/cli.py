"""Command line front end.

Every command reads one JSON file (an instance bundle, or for
``validate`` and ``cohomology`` also a bare algebra or module) and
writes one deterministic JSON report.  Exit status: 0 success, 2 schema
violation, 3 precondition refused, 4 internal self-check failure.
"""
import argparse
import json
import os
import sys
from importlib import resources

from . import deform as D
from .artinian import ArtinianDG, dual_checks
from .dg import DGAlgebra, DGModule, regular
from .dgops import cohomology, finite_model, resolve_P, truncate
from .errors import DGError, InternalError, PreconditionError, SchemaError
from .fields import Field
from .graded import ComplexWindow
from .io import Instance, check_schema, dumps, load_any, read_json, report
from .mc import (DEFAULT_BOUND, MCContext, brute_mc, compare_mc, fiber_o1, groupoid_skeleton,
                 lift_enumerate, morphism_o0, obstruction_o2, torsor_suite)

COMMANDS = ("validate", "cohomology", "mc", "obstruct", "lift", "deform", "codeform", "restrict",
            "resolve", "truncate", "finite-model", "keller", "zigzag", "compare", "oracle", "corpus")


# ---------------------------------------------------------------- helpers

def corpus_dir():
    return str(resources.files("dgdeform").joinpath("corpus"))


def corpus_list():
    with open(os.path.join(corpus_dir(), "manifest.json"), encoding="utf-8") as fh:
        return json.load(fh)


def resolve_path(path):
    """A file path, or the name of a bundled instance."""
    if os.path.exists(path):
        return path
    cand = os.path.join(corpus_dir(), path if path.endswith(".json") else f"{path}.json")
    if os.path.exists(cand):
        return cand
    raise SchemaError(f"no such file or bundled instance: {path}")


def parse_window(text):
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like LO:HI, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("window LO must not exceed HI")
    return ComplexWindow(lo, hi)


def parse_terms(text):
    """'x⊗e=1,x^2⊗e^2=2' -> [[label, coef], ...] ('*' also separates factors)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        lab, _, coef = part.partition("=")
        out.append([lab.strip(), coef.strip() or "1"])
    return out


def claim_window(args, M):
    """The reporting window: the faithful inner window, or --window inside it."""
    inner = M.space.inner()
    if args.window is None:
        return inner
    w = args.window
    if w.lo < inner.lo or w.hi > inner.hi:
        raise PreconditionError(f"--window {list(w)} is not inside the faithful window {list(inner)}")
    return w


def _instance(args):
    doc = read_json(resolve_path(args.path))
    if doc.get("schema") != "dginst-v1":
        raise SchemaError(f"command {args.command!r} needs a dginst-v1 instance bundle")
    return Instance(doc, args.field)


def _E(inst):
    """The module deformed: the bundled E, else B as a bimodule over itself."""
    inst.need("B")
    E = inst.E if inst.E is not None else regular(inst.B)
    if E.left is None or not E.left.same_as(inst.B):
        raise SchemaError("E must carry a left action of B")
    return E


def _context(inst):
    inst.need("B", "R")
    return MCContext(inst.B, inst.R)


def _alpha(args, inst, ctx, which="alpha"):
    terms = getattr(args, which, None)
    terms = parse_terms(terms) if terms else (inst.alpha if which == "alpha" else inst.beta)
    if terms is None:
        return ctx.zero()
    return ctx.parse({lab: c for lab, c in terms})


def _cohom_json(M, w):
    h = cohomology(M, w)
    return h.to_json()


def _emit(args, doc):
    text = dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _mcrep(args, inst, windows, body):
    return report("mcrep-v1", args.command, inst.name, inst.field, windows, body)


def _defrep(args, name, F, windows, body):
    return report("defrep-v1", args.command, name, F, windows, body)


def _ctx_windows(ctx, args):
    """Window of B (x) R on which the Maurer-Cartan data is exact (--window narrows it)."""
    inner = ctx.T.space.inner()
    w = args.window or inner
    if w.lo < inner.lo or w.hi > inner.hi:
        raise PreconditionError(f"--window {list(w)} is not inside the faithful window {list(inner)}")
    return {"B⊗R": w}


# --------------------------------------------------------------- commands

def cmd_validate(args):
    doc = read_json(resolve_path(args.path))
    kind = check_schema(doc)
    obj = load_any(doc, args.field)
    out = {"schema": kind, "valid": True}
    if isinstance(obj, DGAlgebra):
        out.update(dim=obj.dim, dims={str(k): v for k, v in obj.space.dims().items()},
                   window=list(obj.space.window), inner=list(obj.space.inner()))
        if isinstance(obj, ArtinianDG):
            out.update(filtration=obj.describe_filtration(), nilpotency=obj.n, tags=obj.tags,
                       dual=_dual_json(obj))
    elif isinstance(obj, DGModule):
        out.update(dim=obj.dim, side=obj.side, window=list(obj.space.window),
                   inner=list(obj.space.inner()))
    else:
        parts = {p: getattr(obj, p).dim for p in ("B", "R", "E", "C", "N")
                 if getattr(obj, p) is not None}
        out.update(instance=obj.name, field=obj.field.name, parts=parts)
        if obj.R is not None:
            out.update(filtration=obj.R.describe_filtration(), tags=obj.R.tags)
        if obj.alpha is not None and obj.B is not None and obj.R is not None:
            ctx = _context(obj)
            out["alpha_is_mc"] = ctx.is_mc(_alpha(args, obj, ctx))
    return out


def _dual_json(R):
    c = dual_checks(R)
    return {k: v for k, v in c.items() if k != "violations"}


def cmd_cohomology(args):
    doc = read_json(resolve_path(args.path))
    obj = load_any(doc, args.field)
    F = args.field or Field.from_name(doc["field"])
    if isinstance(obj, Instance):
        mods = []
        if obj.B is not None:
            mods.append(("B", DGModule(obj.B.space, obj.B.diff, name=obj.B.name)))
        for p in ("E", "N", "C"):
            X = getattr(obj, p)
            if X is not None:
                mods.append((p, X if isinstance(X, DGModule) else DGModule(X.space, X.diff)))
        name = obj.name
    else:
        M = obj if isinstance(obj, DGModule) else DGModule(obj.space, obj.diff, name=obj.name)
        mods = [(doc["schema"].split("-")[0], M)]
        name = doc.get("name", "")
    body, windows = {}, {}
    for key, M in mods:
        w = claim_window(args, M)
        windows[key] = w
        body[key] = _cohom_json(M, w)
    return _defrep(args, name, F, windows, {"cohomology": body})


def cmd_mc(args):
    inst = _instance(args)
    ctx = _context(inst)
    sk = groupoid_skeleton(ctx, args.bound)
    return _mcrep(args, inst, _ctx_windows(ctx, args), {
        "n_objects": len(sk.objects), "n_orbits": len(sk.orbits),
        "orbit_sizes": [len(o) for o in sk.orbits], "skeleton": sk.to_json()})


def cmd_obstruct(args):
    inst = _instance(args)
    ctx = _context(inst)
    bar = ctx.bar()
    alpha = _alpha(args, inst, ctx)
    xi = ctx.reduce_to(bar, alpha)
    body = {"point": bar.describe(xi), "ideal_power": ctx.R.n}
    if not bar.is_mc(xi):
        raise PreconditionError("the reduction of alpha modulo the last power is not Maurer-Cartan")
    o2 = obstruction_o2(ctx, xi, args.seed)
    body["o2"] = o2.to_json()
    beta = _alpha(args, inst, ctx, "beta") if (args.beta or inst.beta) else None
    if beta is not None:
        both_mc = ctx.is_mc(alpha) and ctx.is_mc(beta)
        if not both_mc:
            raise PreconditionError("o1/o0 need alpha and beta to be Maurer-Cartan over R")
        if ctx.reduce_to(bar, alpha) == ctx.reduce_to(bar, beta):
            body["o1"] = fiber_o1(ctx, alpha, beta).to_json()
        hs_bar = bar.hom(ctx.reduce_to(bar, alpha), ctx.reduce_to(bar, beta))
        if not hs_bar.empty and ctx.F.is_finite:
            body["o0"] = [dict(morphism_o0(ctx, alpha, beta, f), f_bar=bar.describe(f, 0))
                          for f in hs_bar.classes()]
    return _mcrep(args, inst, _ctx_windows(ctx, args), body)


def cmd_lift(args):
    inst = _instance(args)
    ctx = _context(inst)
    log = []
    res = lift_enumerate(inst.B, inst.R, args.bound, log)
    if isinstance(res, list):
        body = {"strata": log, "objects": [ctx.describe(a) for a in res], "n_objects": len(res)}
    else:
        first = res.first
        body = {"symbolic": True,
                "first_stratum_basis": [first.describe(first.from_ideal(v, 1, 1))
                                        for v in res.first_stratum],
                "first_stratum_dim": len(res.first_stratum),
                "later_strata": "per-point affine fibers; use obstruct on a chosen point"}
    return _mcrep(args, inst, _ctx_windows(ctx, args), body)


def _deformation(args, inst):
    ctx = _context(inst)
    E = _E(inst)
    alpha = _alpha(args, inst, ctx)
    return ctx, E, alpha, D.theta(E, inst.R, alpha, ctx)


def cmd_deform(args):
    inst = _instance(args)
    ctx, E, alpha, Dm = _deformation(args, inst)
    w = claim_window(args, Dm.S)
    body = Dm.to_json()
    body["cohomology"] = _cohom_json(Dm.S, w)
    body["certificate"] = D.check_def_h(Dm.S, E).to_json()
    body["trivial_cohomology"] = _cohom_json(D.trivial_deformation(E, inst.R).S, w)
    if ctx.F.is_finite and ctx.dim(1) <= args.bound:
        fam = []
        for a in brute_mc(ctx, args.bound):
            S = D.theta(E, inst.R, a, ctx).S
            fam.append({"alpha": ctx.describe(a), "cohomology": cohomology(S, w).to_json()["dims"]})
        body["family"] = fam
    return _defrep(args, inst.name, inst.field, {"S": w}, body)


def cmd_codeform(args):
    inst = _instance(args)
    ctx, E, alpha, Dm = _deformation(args, inst)
    T = D.delta(Dm).T
    w = claim_window(args, T)
    body = {"alpha": ctx.describe(alpha), "dim": T.dim, "labels": list(T.space.labels),
            "cohomology": _cohom_json(T, w),
            "certificate": D.check_codef_h(T, E).to_json(),
            "round_trips": D.delta_round_trips(Dm.S)}
    return _defrep(args, inst.name, inst.field, {"T": w}, body)


def cmd_restrict(args):
    inst = _instance(args)
    ctx, E, alpha, Dm = _deformation(args, inst)
    res = Dm.restriction()
    T = D.delta_module(Dm.S)
    wi, ws = claim_window(args, res.istar), claim_window(args, res.ishriek)
    body = {"alpha": ctx.describe(alpha),
            "i_star": {"dim": res.istar.dim, "cohomology": _cohom_json(res.istar, wi)},
            "i_shriek": {"dim": res.ishriek.dim, "cohomology": _cohom_json(res.ishriek, ws)},
            "comparison_iso": D.comparison_map(Dm.S, T).is_dg_iso_inner()}
    return _defrep(args, inst.name, inst.field, {"i_star": wi, "i_shriek": ws}, body)


def _N(inst):
    inst.need("N")
    return inst.N


def cmd_resolve(args):
    inst = _instance(args)
    res = resolve_P(_N(inst), args.depth)
    P = res.P
    w = ComplexWindow(*res.cert["quasi_iso_window"])
    body = {"certificate": res.cert, "dim": P.dim, "degrees": list(P.space.degrees),
            "labels": list(P.space.labels), "eps_closed": res.eps.is_closed()}
    return _defrep(args, inst.name, inst.field, {"quasi_iso": w}, body)


def cmd_truncate(args):
    inst = _instance(args)
    N = _N(inst)
    res = resolve_P(N, args.depth)
    body = {}
    windows = {}
    for key, M in (("N", N), ("P", res.P)):
        tr = truncate(M, args.at)
        chk = tr.check()
        windows[key] = ComplexWindow(*chk["window"])
        body[key] = {"check": chk, "lower_dim": tr.lower.dim, "upper_dim": tr.upper.dim}
    return _defrep(args, inst.name, inst.field, windows, dict(body, at=args.at))


def cmd_finite_model(args):
    inst = _instance(args)
    N = _N(inst)
    src = N if not N.space.is_closed else resolve_P(N, args.depth).P
    fm = finite_model(src, args.depth)
    w = fm.window
    hm = cohomology(fm.model, w)
    hs = cohomology(src, w)
    body = {"input": "N" if src is N else "P(N)", "model_dim": fm.model.dim,
            "model_closed": fm.model.space.is_closed,
            "model_cohomology": hm.to_json(), "input_cohomology": hs.to_json(),
            "cohomology_matches": hm.dims == hs.dims}
    return _defrep(args, inst.name, inst.field, {"certified": w}, body)


def cmd_keller(args):
    inst = _instance(args)
    inst.need("B")
    C, incl = D.keller_subalgebra(inst.B)
    body = {"dim": C.dim, "labels": list(C.space.labels),
            "degrees": list(C.space.degrees),
            "quasi_iso": {str(k): v for k, v in sorted(incl.quasi_iso.items())},
            "inclusion_valid": incl.is_valid()}
    if inst.C is not None:
        body["matches_bundled"] = sorted(C.space.labels) == sorted(inst.C.space.labels)
    return _defrep(args, inst.name, inst.field, {"B": inst.B.space.inner()}, body)


def cmd_zigzag(args):
    inst = _instance(args)
    inst.need("g")
    z = D.cone_zigzag(inst.g, args.mode)
    A = z["algebra"]
    body = {"dim": A.dim, "certificates": z["certificates"], "cone_dim": z["cone"].dim}
    return _defrep(args, inst.name, inst.field, {"cone": z["cone"].space.inner()}, body)


def cmd_compare(args):
    inst = _instance(args)
    inst.need("phi", "R")
    r = compare_mc(inst.phi, inst.R, args.bound)
    body = {k: v for k, v in r.items() if not k.startswith("skeleton")}
    body["skeleton_C"] = r["skeleton_C"].to_json()
    body["skeleton_B"] = r["skeleton_B"].to_json()
    ctx = MCContext(inst.B, inst.R)
    return _mcrep(args, inst, _ctx_windows(ctx, args), body)


def cmd_oracle(args):
    inst = _instance(args)
    ctx = _context(inst)
    brute = brute_mc(ctx, args.bound)
    strat = lift_enumerate(inst.B, inst.R, args.bound)
    body = {"brute": len(brute), "stratified": len(strat), "equal": brute == strat,
            "torsor": torsor_suite(ctx, args.bound)}
    return _mcrep(args, inst, _ctx_windows(ctx, args), body)


def cmd_corpus(args):
    return corpus_list()


# ------------------------------------------------------------------- main

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=Field.from_name, default=None,
                        help="reinterpret the input over q, f2, f3, f5, ...")
    common.add_argument("--window", type=parse_window, default=None,
                        help="reporting window LO:HI for cohomological claims")
    common.add_argument("--depth", type=int, default=4, help="resolution depth")
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND,
                        help="largest dimension scanned exhaustively")
    common.add_argument("--seed", type=int, default=0, help="seed for redundant second-lift checks")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    ap = argparse.ArgumentParser(prog="dgdeform", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name != "corpus":
            p.add_argument("path", help="JSON file or bundled instance name")
        if name in ("obstruct", "deform", "codeform", "restrict"):
            p.add_argument("--alpha", default=None, help="label=coef list, e.g. 'x⊗e=1'")
        if name == "obstruct":
            p.add_argument("--beta", default=None)
        if name == "truncate":
            p.add_argument("--at", type=int, default=0)
        if name == "zigzag":
            p.add_argument("--mode", default="homotopy-equivalence",
                           choices=["homotopy-equivalence", "P-to-I"])
    return ap


HANDLERS = {name: globals()["cmd_" + name.replace("-", "_")] for name in COMMANDS}


def run(argv=None):
    """Run one job; returns (exit status, report or None)."""
    args = build_parser().parse_args(argv)
    try:
        doc = HANDLERS[args.command](args)
    except DGError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code, None
    except (ArithmeticError, AssertionError, KeyError, IndexError, ValueError) as exc:
        err = InternalError(f"{type(exc).__name__}: {exc}")
        print(f"internal error: {err}", file=sys.stderr)
        return err.exit_code, None
    _emit(args, doc)
    return 0, doc


def main(argv=None):
    status, _ = run(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
