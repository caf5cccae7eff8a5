"""Deformations and co-deformations of a DG module E over B (x) R.

Conventions.  E is a right A-module; when a left action of B is present
(for instance B = End(E) acting by evaluation) Maurer-Cartan elements of
B (x) m twist E (x) R.  On E (x) X (X = R or R*):

* right action  (e (x) x)(a (x) r) = (-1)^{|x||a|} ea (x) xr,
* left action   (b (x) r)(e (x) x) = (-1)^{|r||e|} be (x) rx,
* differential  d(e (x) x) = de (x) x + (-1)^{|e|} e (x) dx.

delta(S) = S (x)_R R* and delta^-1(T) = Hom_{R^op}(R*, T) are computed by
viewing a right (A (x) R)-module as an (A^op, R)-bimodule.
"""

from .artinian import dual_bimodule
from .dg import (AlgebraMap, DGModule, ModuleMap, TensorAlgebra, ground_algebra, regular,
                 tensor_validity,
                 validate_module)
from .dgops import (GradedSubspace, cohomology, cone, end_algebra, find_dg_iso,
                    generated_submodule, hom_complex, merge_action, quotient_module,
                    restrict_scalars, same_structure, shift, split_action, subalgebra,
                    submodule, tensor_over)
from .errors import InternalError, PreconditionError, SchemaError
from .graded import ComplexWindow, GradedSpace, sign, sparse_items
from .linalg import ExactMatrix, Subspace, cohomology_at, nullspace, solve_linear
from .mc import MCContext


# ------------------------------------------------------------ E (x) X

def tensor_module(E, X, TA=None, TB=None):
    """E (x) X for E a right A-module (maybe with left B) and X a right R-module.

    The result is a right (A (x) R)-module, with a left (B (x) R)-action
    when both E and X carry left actions.
    """
    F = E.field
    E = over_ground(E)
    A, R = E.right, X.right
    if R is None:
        raise SchemaError("tensor_module needs a right R-module")
    TA = TA or TensorAlgebra(A, R)
    nX = X.dim
    degrees, labels = [], []
    for i in range(E.dim):
        for j in range(nX):
            degrees.append(E.deg(i) + X.deg(j))
            labels.append(f"{E.space.labels[i]}⊗{X.space.labels[j]}")
    window, valid, olo, ohi = tensor_validity(E, X)
    sp = GradedSpace(F, degrees, labels, window, valid, olo, ohi)
    diff, ract, lact = {}, {}, {}
    for i in range(E.dim):
        s = sign(E.deg(i))
        for j in range(nX):
            t = {}
            for i2, x in E.diff.get(i, {}).items():
                t[i2 * nX + j] = t.get(i2 * nX + j, 0) + x
            for j2, y in X.diff.get(j, {}).items():
                t[i * nX + j2] = t.get(i * nX + j2, 0) + s * y
            diff[i * nX + j] = t
    nR = R.dim
    for (i, a), et in E.ract.items():
        for (j, r), xt in X.ract.items():
            s = sign(X.deg(j) * A.deg(a))
            t = {}
            for i2, x in et.items():
                for j2, y in xt.items():
                    t[i2 * nX + j2] = t.get(i2 * nX + j2, 0) + s * x * y
            ract[(i * nX + j, a * nR + r)] = t
    if E.left is not None and X.left is not None:
        B = E.left
        TB = TB or TensorAlgebra(B, X.left)
        nL = X.left.dim
        for (b, i), et in E.lact.items():
            for (r, j), xt in X.lact.items():
                s = sign(X.left.deg(r) * E.deg(i))
                t = {}
                for i2, x in et.items():
                    for j2, y in xt.items():
                        t[i2 * nX + j2] = t.get(i2 * nX + j2, 0) + s * x * y
                lact[(b * nL + r, i * nX + j)] = t
        M = DGModule(sp, diff, TA, ract, TB, lact, name=f"{E.name}⊗{X.name}")
    else:
        M = DGModule(sp, diff, TA, ract, name=f"{E.name}⊗{X.name}")
    M.layout = (E, X)
    return M


def over_ground(E):
    """A plain complex (no right action) as a right module over the ground field."""
    if E.right is not None:
        return E
    k = ground_algebra(E.field)
    ract = {(i, 0): {i: 1} for i in range(E.dim)}
    return DGModule(E.space, E.diff, k, ract, E.left, E.lact, name=E.name)


def _module_from_matrix(M, dmat, name=""):
    diff = {j: dict(sparse_items(col)) for j, col in enumerate(dmat.columns())}
    out = DGModule(M.space, diff, M.right, M.ract, name=name or M.name)
    if hasattr(M, "layout"):
        out.layout = M.layout
    return out


# ------------------------------------------------------------- restrict

class Restriction:
    """i*S = S (x)_R k and i^!S = Hom_{R^op}(k, S), as DG A-modules."""

    def __init__(self, S):
        T = S.right
        if not isinstance(T, TensorAlgebra):
            raise SchemaError("restriction needs a module over a tensor algebra A (x) R")
        A, R = T.factors
        F = S.field
        self.S = S
        SA = restrict_scalars(S, T.inclusion_left())
        self.SA = SA
        incR = T.inclusion_right()
        ideal = list(R.ideal_indices())
        mvecs = []
        for s in range(S.dim):
            e = S.space.basis_vector(s)
            for r in ideal:
                v = S.act_r(e, incR.apply(R.vec(r)))
                if any(v):
                    mvecs.append(v)
        mvecs = generated_submodule(SA, mvecs)
        self.Sm = GradedSubspace(S.space, mvecs)
        self.istar, self.proj = quotient_module(SA, mvecs, name=f"i*{S.name}")
        self.section = self.proj.section
        rows = []
        for r in ideal:
            rows.extend(S.ract_matrix(incR.apply(R.vec(r))).rows)
        ann = []
        for n in sorted(S.space.by_degree):
            idx = S.space.indices(n)
            sub = ExactMatrix(F, len(rows), len(idx), [[row[i] for i in idx] for row in rows]) \
                if rows else None
            if sub is None:
                ann.extend(S.space.basis_vector(i) for i in idx)
            else:
                ann.extend(S.space.embed(v, n) for v in nullspace(sub))
        self.ishriek, self.incl = submodule(SA, ann, name=f"i!{S.name}")

    def star_of_map(self, f, other):
        """i*f : i*S -> i*S' for f : S -> S' (a map of A (x) R-modules)."""
        F = self.S.field
        cols = []
        for k in self.section:
            cols.append(other.proj.apply(f.apply(self.S.space.basis_vector(k))))
        return ModuleMap(self.istar, other.istar,
                         ExactMatrix.from_columns(F, other.istar.dim, cols), f.degree)

    def star_matrix(self, mat, other, degree=0):
        F = self.S.field
        cols = [other.proj.apply(mat.apply(self.S.space.basis_vector(k))) for k in self.section]
        return ModuleMap(self.istar, other.istar,
                         ExactMatrix.from_columns(F, other.istar.dim, cols), degree)


def restrict(S):
    R = Restriction(S)
    return R.istar, R.ishriek


# ---------------------------------------------------------- deformations

class Deformation:
    """(S, sigma) with S = (E (x) R, d + alpha) and sigma: i*S = E."""

    def __init__(self, E, R, S, alpha=None, ctx=None, name=""):
        self.E, self.R, self.S = E, R, S
        self.alpha, self.ctx = alpha, ctx
        self.name = name

    def restriction(self):
        if not hasattr(self, "_res"):
            self._res = Restriction(self.S)
        return self._res

    def cohomology(self, window=None):
        return cohomology(self.S, window)

    def to_json(self, with_matrices=True):
        S = self.S
        res = self.restriction()
        hS = cohomology(S)
        hI = cohomology(res.istar)
        out = {
            "module": S.name,
            "dim": S.dim,
            "labels": list(S.space.labels),
            "degrees": list(S.space.degrees),
            "cohomology": hS.to_json(),
            "restriction_cohomology": hI.to_json(),
            "restriction_equals_E": same_structure(res.istar, _forget_left(self.E)),
        }
        if self.alpha is not None and self.ctx is not None:
            out["alpha"] = self.ctx.describe(self.alpha)
        if with_matrices:
            out["differential"] = {S.space.labels[j]: S.space.describe(S.d(S.space.basis_vector(j)))
                                   for j in range(S.dim) if any(S.d(S.space.basis_vector(j)))}
        return out


def _forget_left(E):
    E = over_ground(E)
    return E.forget(left=True) if E.left is not None else E


def augmentation_module(E, R):
    """E viewed over A (x) R with m acting by zero: i*S = E but S is not R-free."""
    E = _forget_left(E)
    TA = TensorAlgebra(E.right, R)
    nR = R.dim
    ract = {(i, a * nR): t for (i, a), t in E.ract.items()}
    return DGModule(E.space, E.diff, TA, ract, name=f"{E.name}_eps")


def trivial_deformation(E, R):
    S = tensor_module(_forget_left(E), regular(R))
    return Deformation(E, R, S, name=f"{E.name}⊗{R.name}")


def twisted_module(E, R, alpha_full, ctx=None):
    """(E (x) R, d + alpha) for alpha a vector of B (x) R (B acting on E from the left)."""
    if E.left is None:
        raise SchemaError("twisting needs a left action of the Maurer-Cartan algebra on E")
    ER = tensor_module(E, regular(R))
    dm = ER.d_full() + ER.lact_matrix(alpha_full)
    S = _module_from_matrix(ER.forget(left=True), dm, name=f"S_alpha({E.name})")
    if not (dm @ dm).is_zero():
        raise InternalError("twisted differential does not square to zero")
    return S, ER


def theta(E, R, alpha, ctx=None):
    """S_alpha = (E (x) R, d_{E,R} + alpha) for alpha in MC_R(B), B acting on E."""
    if E.left is None:
        raise SchemaError("theta needs E with a left action of the Maurer-Cartan algebra")
    ctx = ctx or MCContext(E.left, R)
    if not ctx.B.same_as(E.left):
        raise SchemaError("the Maurer-Cartan algebra does not act on E")
    alpha = tuple(ctx.F(x) for x in alpha)
    if not ctx.is_mc(alpha):
        raise PreconditionError("theta needs a Maurer-Cartan element (Q(alpha) != 0)")
    S, ER = twisted_module(E, R, ctx.full(alpha), ctx)
    bad = validate_module(S)
    if bad:
        raise InternalError(f"S_alpha is not a DG module: {bad[0].kind} at {list(bad[0].items)}")
    D = Deformation(E, R, S, alpha, ctx, name="S_alpha")
    D.ER = ER
    return D


def gauge_map(D_alpha, D_beta, u):
    """The isomorphism S_alpha -> S_beta given by left multiplication by 1 + u."""
    ctx = D_alpha.ctx
    F = ctx.F
    g = [F.red(x + y) for x, y in zip(ctx.one(), ctx.full(u, 0))]
    mat = D_alpha.ER.lact_matrix(g)
    return ModuleMap(D_alpha.S, D_beta.S, mat, name="g")


def homotopy_map(D_alpha, D_beta, h):
    """Left multiplication by h in (B (x) m)^-1, a degree -1 map S_alpha -> S_beta."""
    ctx = D_alpha.ctx
    mat = D_alpha.ER.lact_matrix(ctx.full(h, -1))
    return ModuleMap(D_alpha.S, D_beta.S, mat, degree=-1, name="h")


def theta_functoriality(D_alpha, D_beta, u, h=None):
    """Checks that 1+u gives an iso of deformations and that a homotopy h
    changes it by an allowable homotopy (d of a map that vanishes under i*)."""
    ctx = D_alpha.ctx
    F = ctx.F
    f = gauge_map(D_alpha, D_beta, u)
    rA, rB = D_alpha.restriction(), D_beta.restriction()
    istar = rA.star_of_map(f, rB)
    out = {
        "iso": f.is_dg_iso(),
        "restricts_to_identity": istar.matrix == ExactMatrix.identity(F, istar.matrix.nrows),
    }
    if h is not None:
        hm = homotopy_map(D_alpha, D_beta, h)
        Dh = ctx.twisted_d(D_alpha.alpha, D_beta.alpha, -1).apply(list(h))
        u2 = tuple(F.red(x + y) for x, y in zip(u, Dh))
        f2 = gauge_map(D_alpha, D_beta, u2)
        out["homotopic_iso"] = f2.is_dg_iso()
        out["difference_is_dh"] = (f2.matrix - f.matrix) == hm.differential()
        out["allowable"] = rA.star_of_map(hm, rB).matrix.is_zero()
    return out


# -------------------------------------------------------------- delta

class CoDeformation:
    def __init__(self, E, R, T, name=""):
        self.E, self.R, self.T = E, R, T
        self.name = name

    def restriction(self):
        if not hasattr(self, "_res"):
            self._res = Restriction(self.T)
        return self._res


def delta_module(S, Rs=None):
    """S (x)_R R* as a right (A (x) R)-module."""
    T = S.right
    R = T.factors[1]
    Rs = Rs or dual_bimodule(R)
    X = split_action(S, T)
    Y = tensor_over(X, Rs)
    out = merge_action(Y, T)
    out.tensor = Y
    return out


def delta_inv_module(Tm, Rs=None):
    """Hom_{R^op}(R*, T) as a right (A (x) R)-module."""
    TA = Tm.right
    R = TA.factors[1]
    Rs = Rs or dual_bimodule(R)
    X = split_action(Tm, TA)
    H = hom_complex(Rs, X, "right")
    out = merge_action(H, TA)
    out.hom = H
    return out


def delta(D):
    Tm = delta_module(D.S)
    return CoDeformation(D.E, D.R, Tm, name=f"delta({D.name})")


def delta_inv(C):
    S = delta_inv_module(C.T)
    return Deformation(C.E, C.R, S, name=f"delta^-1({C.name})")


def unit_map(S, DS=None, DDS=None):
    """S -> Hom_{R^op}(R*, S (x)_R R*), s -> (phi -> s (x) phi)."""
    F = S.field
    DS = DS or delta_module(S)
    DDS = DDS or delta_inv_module(DS)
    Y, H = DS.tensor, DDS.hom
    Rs = Y.factors[1]
    cols = []
    for s in range(S.dim):
        es = S.space.basis_vector(s)
        mat = ExactMatrix.from_columns(F, DS.dim, [Y.cls(es, Rs.space.basis_vector(j))
                                                   for j in range(Rs.dim)])
        cols.append(H.to_vector(mat, S.deg(s), strict=S.deg(s) in H.space.valid))
    return ModuleMap(S, DDS, ExactMatrix.from_columns(F, DDS.dim, cols), name="unit")


def counit_map(Tm, DT=None, DDT=None):
    """Hom_{R^op}(R*, T) (x)_R R* -> T, f (x) phi -> f(phi)."""
    F = Tm.field
    DT = DT or delta_inv_module(Tm)
    DDT = DDT or delta_module(DT)
    Y, H = DDT.tensor, DT.hom
    nR = Y.factors[1].dim
    cols = []
    for k in Y.pairs:
        i, j = divmod(k, nR)
        cols.append([r[j] for r in H.maps[i].rows])
    return ModuleMap(DDT, Tm, ExactMatrix.from_columns(F, Tm.dim, cols), name="counit")


def comparison_map(S, DS=None):
    """i*S -> i^!(S (x)_R R*), [s] -> s (x) i with i the augmentation functional."""
    F = S.field
    DS = DS or delta_module(S)
    rS, rT = Restriction(S), Restriction(DS)
    Y = DS.tensor
    Rs = Y.factors[1]
    iota = Rs.space.basis_vector(0)
    G = rT.incl.subspace
    cols = []
    for k in rS.section:
        v = Y.cls(S.space.basis_vector(k), iota)
        if not G.contains(v):
            raise InternalError("s (x) i is not annihilated by m")
        cols.append(G.coords(v))
    return ModuleMap(rS.istar, rT.ishriek, ExactMatrix.from_columns(F, rT.ishriek.dim, cols),
                     name="comparison")


def delta_round_trips(S):
    """Unit and counit are DG isomorphisms; the comparison map is one too.

    Claims are made on the common inner window of every module involved.
    """
    DS = delta_module(S)
    DDS = delta_inv_module(DS)
    u = unit_map(S, DS, DDS)
    DDDS = delta_module(DDS)
    c = counit_map(DS, DDS, DDDS)
    cmp_ = comparison_map(S, DS)
    w = S.space.inner()
    for X in (DS, DDS, DDDS):
        w = w.intersect(X.space.inner())
    rS, rT = Restriction(S), Restriction(DS)
    wc = rS.istar.space.inner().intersect(rT.ishriek.space.inner())
    return {
        "window": w.to_json(),
        "unit_iso": u.is_dg_iso_on(w),
        "counit_iso": c.is_dg_iso_on(w),
        "comparison_iso": cmp_.is_dg_iso_on(wc),
        "dims": [S.dim, DS.dim, DDS.dim],
    }


# ---------------------------------------------------------- certificates

class Certificate:
    def __init__(self, ok, reason="", eta=None, sigma=None):
        self.ok, self.reason, self.eta, self.sigma = ok, reason, eta, sigma

    def to_json(self):
        out = {"ok": self.ok, "reason": self.reason}
        if self.eta is not None:
            out["eta_rank"] = self.eta.matrix.rank()
        return out

    def __bool__(self):
        return self.ok


def _identification(istar, E):
    """A closed A-linear iso i*S -> E (the identity when the structures agree)."""
    F = E.field
    if istar.dim != E.dim:
        return None
    if same_structure(istar, E):
        return ModuleMap(istar, E, ExactMatrix.identity(F, E.dim))
    return find_dg_iso(istar, E)


def _cut_to(E, space):
    """E with the degrees that ``space`` does not present faithfully removed, when they
    span a DG submodule (so the cut is a quotient module); None otherwise."""
    w = ComplexWindow(space.valid.lo if space.open_lo else space.window.lo,
                      space.valid.hi if space.open_hi else space.window.hi)
    out = [E.space.basis_vector(i) for i in range(E.dim) if E.deg(i) not in w]
    if not out:
        return E
    if len(generated_submodule(E, out)) != len(out):
        return None
    Qm, _ = quotient_module(E, out, name=E.name)
    lo, hi = max(E.space.window.lo, w.lo), min(E.space.window.hi, w.hi)
    vlo, vhi = max(E.space.valid.lo, w.lo), min(E.space.valid.hi, w.hi)
    sp = GradedSpace(E.field, Qm.space.degrees, Qm.space.labels, (lo, hi), (vlo, vhi),
                     E.space.open_lo or lo > E.space.window.lo,
                     E.space.open_hi or hi < E.space.window.hi)
    return DGModule(sp, Qm.diff, Qm.right, Qm.ract, Qm.left, Qm.lact, name=E.name)


def check_def_h(S, E, sigma=None):
    """Search for eta: (E (x) R)^gr -> S^gr with i*(eta) = sigma^-1."""
    from .linalg import inverse
    E = _forget_left(E)
    T = S.right
    if not isinstance(T, TensorAlgebra):
        return Certificate(False, "S is not a module over a tensor algebra A⊗R")
    A, R = T.factors
    if E.right is None or not E.right.same_as(A):
        return Certificate(False, "E is not a module over the same algebra A")
    F = S.field
    res = Restriction(S)
    istar = res.istar
    E = _cut_to(E, S.space)
    if E is None:
        return Certificate(False, "E does not truncate to the degree window of S")
    if istar.dim != E.dim:
        return Certificate(False, f"i*S has dimension {istar.dim}, E has dimension {E.dim}")
    if sigma is None:
        sigma = _identification(istar, E)
        if sigma is None:
            return Certificate(False, "i*S is not isomorphic to E as a DG module")
    sig_inv = inverse(sigma.matrix)
    H = hom_complex(E, res.SA, "right")
    idx = H.space.indices(0)
    # unknown coefficients c_k with sum c_k pi h_k = sigma^-1
    cols = []
    for k in idx:
        ph = res.proj.matrix @ H.maps[k]
        cols.append([x for row in ph.rows for x in row])
    target = [x for row in sig_inv.rows for x in row]
    if not cols:
        return Certificate(False, "no A-linear degree-0 maps E -> S", sigma=sigma)
    sol = solve_linear(ExactMatrix.from_columns(F, len(target), cols), target)
    if sol is None:
        return Certificate(False, "no graded A-linear lift of the identification exists", sigma=sigma)
    c0, _ = sol
    eta0 = ExactMatrix.zero(F, S.dim, E.dim)
    for c, k in zip(c0, idx):
        if c:
            eta0 = eta0 + H.maps[k].scale(c)
    ER = tensor_module(E, regular(R))
    incR = T.inclusion_right()
    cols = []
    nR = R.dim
    for i in range(E.dim):
        base = eta0.apply(E.space.basis_vector(i))
        for r in range(nR):
            cols.append(S.act_r(base, incR.apply(R.vec(r))))
    eta = ModuleMap(ER, S, ExactMatrix.from_columns(F, S.dim, cols), name="eta")
    W = S.space.inner()
    if not eta.is_homogeneous() or eta.linearity_defects(W):
        raise InternalError("eta is not a graded A⊗R-linear map")
    if not (eta.is_iso() if S.space.is_closed else eta.is_iso_on(W)):
        return Certificate(False, "the canonical lift eta is not bijective (S is not graded R-free)",
                           eta=eta, sigma=sigma)
    return Certificate(True, "graded R-free", eta=eta, sigma=sigma)


def trivial_codeformation(E, R, Rs=None):
    Rs = Rs or dual_bimodule(R)
    T = tensor_module(_forget_left(E), Rs.forget(left=True))
    return CoDeformation(E, R, T, name=f"{E.name}⊗{R.name}*")


def check_codef_h(Tm, E):
    """Cofreeness: delta^-1(T) is a homotopy deformation and the counit is an iso."""
    D = delta_inv_module(Tm)
    c = counit_map(Tm, D)
    if not c.is_dg_iso_inner():
        return Certificate(False, "counit Hom(R*,T)⊗R* -> T is not an isomorphism")
    cert = check_def_h(D, E)
    if not cert.ok:
        return Certificate(False, "delta^-1(T): " + cert.reason)
    res = Restriction(Tm)
    Ec = _cut_to(_forget_left(E), Tm.space)
    if Ec is None or res.ishriek.dim != Ec.dim:
        return Certificate(False, "i^!T has the wrong dimension")
    return Certificate(True, "graded R-cofree", eta=cert.eta, sigma=cert.sigma)


# ------------------------------------------------ R-free modules: flags and maps

def _refined_flag(R):
    """Basis of m ordered so that each tail span is an ideal with 1-dim steps
    and zero induced differential."""
    F = R.field
    order = []
    for j in range(1, R.n + 1):
        lo, hi = R.starts[j], R.starts[j + 1]
        layer = list(range(lo, hi))
        # d on m^j / m^{j+1}: non-cocycles first, then cocycles
        cyc, non = [], []
        for a in layer:
            dv = R.d(R.vec(a))
            if any(dv[b] for b in layer):
                non.append(a)
            else:
                cyc.append(a)
        if non:
            # re-choose the layer basis: complement of cocycles, then cocycles
            rows = []
            for a in layer:
                dv = R.d(R.vec(a))
                rows.append([dv[b] for b in layer])
            Dm = ExactMatrix(F, len(layer), len(layer), [[rows[c][r] for c in range(len(layer))]
                                                         for r in range(len(layer))])
            Z = Subspace(F, len(layer), nullspace(Dm))
            comp = [j2 for j2 in Z.complement_coords()]
            vecs = [[F.one if t == c else F.zero for t in range(len(layer))] for c in comp]
            vecs += Z.basis
            full = []
            for v in vecs:
                w = [F.zero] * R.dim
                for t, x in zip(layer, v):
                    w[t] = x
                full.append(w)
            order.extend(full)
        else:
            order.extend(R.vec(a) for a in layer)
    return order


def prop312_suite(S, T, f=None):
    """(a) i* surjective on Hom; (b) filtration S F_i R with i*S subquotients;
    (d) for a closed degree-0 f: i*f iso => f iso, i*f quasi-iso => f quasi-iso."""
    F = S.field
    TA = S.right
    A, R = TA.factors
    rS, rT = Restriction(S), Restriction(T)
    report = {}
    # (a)
    H = hom_complex(S, T, "right")
    Hi = hom_complex(rS.istar, rT.istar, "right")
    surj = True
    for n in Hi.space.inner().degrees():
        tgt = Hi.space.indices(n)
        if not tgt:
            continue
        imgs = []
        for k in H.space.indices(n):
            m = rS.star_matrix(H.maps[k], rT, n).matrix
            imgs.append(Hi.coords(m, n))
        if Subspace(F, len(tgt), imgs).dim != len(tgt):
            surj = False
    report["a_surjective"] = surj
    # (b)
    flag = _refined_flag(R)
    incR = TA.inclusion_right()
    steps = []
    filt = []
    for t in range(len(flag) + 1):
        vecs = []
        for s in range(S.dim):
            e = S.space.basis_vector(s)
            for r in flag[t:]:
                v = S.act_r(e, incR.apply(r))
                if any(v):
                    vecs.append(v)
        filt.append(GradedSubspace(S.space, vecs))
    whole = [S.space.basis_vector(k) for k in range(S.dim)]
    levels = [GradedSubspace(S.space, whole)] + filt
    ok_b = True
    for t, r in enumerate(flag):
        Ft, Fn = levels[t + 1], levels[t + 2]
        vs = [S.act_r(S.space.basis_vector(k), incR.apply(r)) for k in rS.section]
        span = GradedSubspace(S.space, Fn.basis() + [v for v in vs if any(v)])
        bij = span.dim == Ft.dim and span.dim == Fn.dim + rS.istar.dim
        comm = True
        rdeg = R.space.homogeneous_degree(r) or 0
        for k, v in zip(rS.section, vs):
            ds = S.d(S.space.basis_vector(k))
            lhs = S.d(v)
            rhs = S.act_r(ds, incR.apply(r))
            if not Fn.contains([F.red(x - y) for x, y in zip(lhs, rhs)]):
                comm = False
            for a in range(A.dim):
                ea = TA.inclusion_left().apply(A.vec(a))
                sa = S.act_r(S.act_r(S.space.basis_vector(k), ea), incR.apply(r))
                va = S.act_r(v, ea)
                sg = sign(rdeg * A.deg(a))
                if not Fn.contains([F.red(x - sg * y) for x, y in zip(va, sa)]):
                    comm = False
        steps.append({"bijective": bij, "commutes_with_d": comm})
        ok_b &= bij and comm
    report["b_filtration_length"] = len(flag) + 1
    report["b_subquotients_ok"] = ok_b
    # (d)
    if f is not None:
        fi = rS.star_of_map(f, rT)
        report["d_istar_iso"] = fi.is_iso()
        report["d_f_iso"] = f.is_iso()
        w = S.space.inner().intersect(T.space.inner())
        ci = cohomology(cone(fi), ComplexWindow(w.lo - 1, w.hi))
        cf = cohomology(cone(f), ComplexWindow(w.lo - 1, w.hi))
        report["d_istar_quasi_iso"] = ci.is_acyclic()
        report["d_f_quasi_iso"] = cf.is_acyclic()
        report["d_ok"] = ((not report["d_istar_iso"] or report["d_f_iso"])
                          and (not report["d_istar_quasi_iso"] or report["d_f_quasi_iso"]))
    return report


# ------------------------------------------------------- Sigma and psi*

def sigma(M, E):
    """Sigma(M) = M (x)_B E."""
    return tensor_over(M, E)


def sigma_unit_iso(E):
    """B (x)_B E -> E, b (x) e -> be."""
    F = E.field
    B = E.left
    Bm = regular(B).forget(left=True)
    X = tensor_over(Bm, E)
    nE = E.dim
    cols = []
    for k in X.pairs:
        b, e = divmod(k, nE)
        cols.append(E.act_l(B.vec(b), E.space.basis_vector(e)))
    f = ModuleMap(X, E.forget(left=True), ExactMatrix.from_columns(F, E.dim, cols))
    return X, f


def sigma_R(S, E, R):
    """Sigma_R(S) = S (x)_{B (x) R} (E (x) R)."""
    ER = tensor_module(E, regular(R))
    return tensor_over(S, ER), ER


def restriction_square(S, Y_R, make_plain, cls_R_pair):
    """Generic check that i* commutes with a tensor functor.

    ``make_plain(i*S)`` builds the functor on i*S (a TensorOver);
    ``cls_R_pair(s_vec, j)`` gives the class of s (x) (y_j (x) 1) in Y_R.
    """
    F = S.field
    rS = Restriction(S)
    rY = Restriction(Y_R)
    X = make_plain(rS.istar)
    nY = X.factors[1].dim
    cols = []
    for k in X.pairs:
        i, j = divmod(k, nY)
        s = S.space.basis_vector(rS.section[i])
        cols.append(rY.proj.apply(cls_R_pair(s, j)))
    f = ModuleMap(X, rY.istar, ExactMatrix.from_columns(F, rY.istar.dim, cols))
    return f


def sigma_square(S, E, R):
    """Sigma(i*S) -> i*(Sigma_R S) is a DG isomorphism."""
    Y, ER = sigma_R(S, E, R)
    nR = R.dim

    def plain(istar):
        return tensor_over(istar, E)

    def cls(s, j):
        return Y.cls(s, ER.space.basis_vector(j * nR))
    return restriction_square(S, Y, plain, cls)


def induced_bimodule(psi):
    """B as a (C, B)-bimodule through psi: C -> B."""
    C, B = psi.src, psi.tgt
    lact = {}
    for c in range(C.dim):
        pc = psi.apply(C.vec(c))
        for b in range(B.dim):
            v = B.mul(pc, B.vec(b))
            if any(v):
                lact[(c, b)] = dict(sparse_items(v))
    return DGModule(B.space, B.diff, B, B.mult, C, lact, name=f"{B.name}_psi")


def psi_induction(M, psi):
    bad = psi.violations()
    if bad:
        raise SchemaError(f"not a DG algebra map: {bad[0].kind} at {list(bad[0].items)}")
    return tensor_over(M, induced_bimodule(psi))


def psi_unit_iso(psi):
    """C (x)_C B -> B, c (x) b -> psi(c) b."""
    C, B = psi.src, psi.tgt
    F = B.field
    X = psi_induction(regular(C).forget(left=True), psi)
    cols = []
    for k in X.pairs:
        c, b = divmod(k, B.dim)
        cols.append(B.mul(psi.apply(C.vec(c)), B.vec(b)))
    return X, ModuleMap(X, regular(B).forget(left=True), ExactMatrix.from_columns(F, B.dim, cols))


def tensor_algebra_map(psi, R):
    """psi (x) 1 : C (x) R -> B (x) R."""
    C, B = psi.src, psi.tgt
    F = B.field
    TC, TB = TensorAlgebra(C, R), TensorAlgebra(B, R)
    nR = R.dim
    cols = []
    for k in range(TC.dim):
        i, r = divmod(k, nR)
        v = [F.zero] * TB.dim
        for c, x in sparse_items(psi.apply(C.vec(i))):
            v[c * nR + r] = x
        cols.append(v)
    return AlgebraMap(TC, TB, ExactMatrix.from_columns(F, TB.dim, cols))


def psi_square(S, psi, R):
    """psi*(i*S) -> i*(psi*_R S) is a DG isomorphism."""
    psiR = tensor_algebra_map(psi, R)
    Y = psi_induction(S, psiR)
    nR = R.dim

    def plain(istar):
        return psi_induction(istar, psi)

    def cls(s, j):
        return Y.cls(s, psiR.tgt.vec(j * nR))
    return restriction_square(S, Y, plain, cls)


def psi_theta_square(psi, R, alpha):
    """psi*_R(S_alpha) = S_{psi(alpha)} for E = C and E = B (regular bimodules)."""
    from .mc import _tensor_map
    C, B = psi.src, psi.tgt
    F = B.field
    ctxC, ctxB = MCContext(C, R), MCContext(B, R)
    DC = theta(regular(C), R, alpha, ctxC)
    beta = _tensor_map(psi, ctxC, ctxB)(alpha)
    DB = theta(regular(B), R, beta, ctxB)
    psiR = tensor_algebra_map(psi, R)
    Y = psi_induction(DC.S, psiR)
    TB = psiR.tgt
    nT = TB.dim
    cols = []
    for k in Y.pairs:
        s, y = divmod(k, nT)
        cols.append(TB.mul(psiR.apply(psiR.src.vec(s)), TB.vec(y)))
    f = ModuleMap(Y, DB.S, ExactMatrix.from_columns(F, DB.S.dim, cols))
    return {"iso": f.is_dg_iso_inner(), "beta": ctxB.describe(beta), "beta_is_mc": ctxB.is_mc(beta)}


# ------------------------------------------------------------- Keller

def keller_subalgebra(B):
    """C in B with C^0 = k, C^1 = K + L, C^i = B^i for i >= 2, C^{<0} = 0."""
    F = B.field
    h = cohomology(_as_module(B))
    inner = h.window
    for n in inner.degrees():
        if n < 0 and h.dim(n):
            raise PreconditionError(f"H^{n}(B) != 0")
    if 0 not in inner or h.dim(0) != 1:
        raise PreconditionError("H^0(B) is not k")
    if not Subspace(F, B.space.dim_at(0), [B.space.block(v, 0) for v in h.representatives(0)]).contains(
            B.space.block(B.unit_vector(), 0)):
        raise PreconditionError("H^0(B) is not spanned by the unit")
    vecs = [B.unit_vector()]
    idx1 = B.space.indices(1)
    if idx1:
        H1 = h.groups.get(1) or cohomology_at(B.d_matrix(0), B.d_matrix(1))
        vecs += [B.space.embed(r, 1) for r in H1.reps]
        Z = Subspace(F, len(idx1), nullspace(B.d_matrix(1)))
        vecs += [B.space.embed([F.one if t == j else F.zero for t in range(len(idx1))], 1)
                 for j in Z.complement_coords()]
    for n in B.space.support():
        if n >= 2:
            vecs += [B.space.basis_vector(i) for i in B.space.indices(n)]
    C, incl = subalgebra(B, vecs, name=f"C({B.name})")
    hc = cohomology(_as_module(C), inner)
    iso = {}
    for n in inner.degrees():
        if n < 0:
            continue
        G1, G2 = hc.groups[n], h.groups[n]
        cols = [G2.classify(B.space.block(incl.apply(C.space.embed(r, n)), n)) for r in G1.reps]
        M = ExactMatrix.from_columns(F, G2.dim, cols)
        iso[n] = G1.dim == G2.dim and M.rank() == G2.dim
    incl.quasi_iso = iso
    return C, incl


def _as_module(B):
    return DGModule(B.space, B.diff, name=B.name)


# ---------------------------------------------------------- cone zig-zag

def cone_zigzag(g, mode="homotopy-equivalence"):
    """Subalgebra of End(C(g)) preserving E', with p to End(E') and q to End(E)."""
    if mode not in ("homotopy-equivalence", "P-to-I"):
        raise SchemaError(f"unknown zig-zag mode {mode!r}")
    E, E2 = g.src, g.tgt
    F = E.field
    Cg = cone(g)
    End = end_algebra(Cg)
    H = End.hom
    nE = E.dim
    vecs = []
    for n in sorted(H.space.by_degree):
        idx = H.space.indices(n)
        rows = []
        # entries (r, c) with r in E[1] block, c in E' block must vanish
        for r in range(nE):
            for c in range(nE, Cg.dim):
                rows.append([H.maps[k].rows[r][c] for k in idx])
        sub = ExactMatrix(F, len(rows), len(idx), rows) if rows else None
        basis = nullspace(sub) if sub is not None else \
            [[F.one if a == b else F.zero for a in range(len(idx))] for b in range(len(idx))]
        vecs += [H.space.embed(v, n) for v in basis]
    Cal, incl = subalgebra(End, vecs, name="C")
    EndE = end_algebra(E)
    EndE2 = end_algebra(E2)
    pcols, qcols = [], []
    for k in range(Cal.dim):
        n = Cal.deg(k)
        phi = H.element(incl.apply(Cal.vec(k)))
        b22 = ExactMatrix(F, E2.dim, E2.dim, [row[nE:] for row in phi.rows[nE:]])
        b11 = ExactMatrix(F, nE, nE, [row[:nE] for row in phi.rows[:nE]]).scale(sign(n))
        pcols.append(EndE2.hom.to_vector(b22, n))
        qcols.append(EndE.hom.to_vector(b11, n))
    p = AlgebraMap(Cal, EndE2, ExactMatrix.from_columns(F, EndE2.dim, pcols), name="p")
    q = AlgebraMap(Cal, EndE, ExactMatrix.from_columns(F, EndE.dim, qcols), name="q")
    kp = hom_complex(shift(E), Cg)
    kq = hom_complex(Cg, E2)
    cert = {
        "ker_p_acyclic": cohomology(kp).is_acyclic(),
        "ker_q_acyclic": cohomology(kq).is_acyclic(),
        "p_valid": p.is_valid(),
        "q_valid": q.is_valid(),
    }
    if mode == "P-to-I":
        cert["cone_acyclic"] = cohomology(Cg).is_acyclic()
    for name, phi in (("p", p), ("q", q)):
        cert[f"{name}_quasi_iso"] = _algebra_quasi_iso(phi)
    return {"algebra": Cal, "p": p, "q": q, "certificates": cert, "cone": Cg}


def _algebra_quasi_iso(phi):
    A, B = _as_module(phi.src), _as_module(phi.tgt)
    w = A.space.inner().intersect(B.space.inner())
    f = ModuleMap(A, B, phi.matrix)
    return cohomology(cone(f), ComplexWindow(w.lo - 1, w.hi)).is_acyclic()
