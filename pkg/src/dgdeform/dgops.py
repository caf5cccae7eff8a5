"""Constructions on DG modules: Hom complexes, cones, sub- and quotient
modules, tensor products over an algebra, truncations, free resolutions
and finite models.  All of them are computed degreewise by exact linear
algebra and return canonical (echelon) bases.
"""
from .dg import (AlgebraMap, DGAlgebra, DGModule, ModuleMap, TensorAlgebra,
                 opposite, tensor_validity)
from .errors import InternalError, PreconditionError, SchemaError
from .graded import ComplexWindow, GradedSpace, sign, sparse_items
from .linalg import ExactMatrix, Subspace, cohomology_at, nullspace, rref

NEG_INF = -10 ** 9
POS_INF = 10 ** 9


def _term_label(space, v):
    items = sparse_items(v)
    if len(items) == 1 and items[0][1] == space.field.one:
        return space.labels[items[0][0]]
    parts = []
    for i, x in items:
        c = space.field.to_json(x)
        parts.append(space.labels[i] if c == 1 else f"{c}{space.labels[i]}")
    return "<" + "+".join(parts) + ">"


class GradedSubspace:
    """A graded subspace of a GradedSpace, held degreewise in echelon form."""

    def __init__(self, space, vectors):
        self.space = space
        F = space.field
        per = {}
        for v in vectors:
            d = space.homogeneous_degree(v)
            if d is None:
                continue
            per.setdefault(d, []).append(space.block(v, d))
        self.parts = {}
        for d in sorted(space.by_degree):
            sub = Subspace(F, space.dim_at(d), per.get(d, []))
            self.parts[d] = sub

    def basis(self):
        out = []
        for d, sub in self.parts.items():
            for row in sub.basis:
                out.append(self.space.embed(row, d))
        return out

    @property
    def dim(self):
        return sum(s.dim for s in self.parts.values())

    def reduce(self, v):
        w = list(v)
        sp = self.space
        touched = {sp.degrees[i] for i, x in enumerate(w) if x}
        for d in touched:
            sub = self.parts.get(d)
            if sub is not None and sub.dim:
                idx = self.space.indices(d)
                r = sub.reduce([w[i] for i in idx])
                for i, x in zip(idx, r):
                    w[i] = x
        return w

    def contains(self, v):
        return not any(self.reduce(v))

    def coords(self, v):
        out = []
        for d, sub in self.parts.items():
            out.extend(sub.coords(self.space.block(v, d)))
        return out

    def complement(self):
        """Ambient indices of the canonical quotient coordinates."""
        out = []
        for d, sub in self.parts.items():
            idx = self.space.indices(d)
            out.extend(idx[j] for j in sub.complement_coords())
        return sorted(out)


# ------------------------------------------------------------ sub/quotient

def submodule(M, vectors, name=""):
    """The DG submodule spanned by homogeneous ``vectors`` (must be closed)."""
    F = M.field
    G = GradedSubspace(M.space, vectors)
    basis = G.basis()
    degrees = [M.space.homogeneous_degree(v) for v in basis]
    labels = [_term_label(M.space, v) for v in basis]
    sp = GradedSpace(F, degrees, labels, M.space.window, M.space.valid,
                     M.space.open_lo, M.space.open_hi)

    def coords(v, what):
        if not G.contains(v):
            raise SchemaError(f"subspace is not closed under {what}")
        return dict(sparse_items(G.coords(v)))

    diff = {k: coords(M.d(v), "d") for k, v in enumerate(basis)}
    ract, lact = {}, {}
    if M.right is not None:
        for k, v in enumerate(basis):
            for a in range(M.right.dim):
                ract[(k, a)] = coords(M.act_r(v, M.right.vec(a)), "the right action")
    if M.left is not None:
        for k, v in enumerate(basis):
            for a in range(M.left.dim):
                lact[(a, k)] = coords(M.act_l(M.left.vec(a), v), "the left action")
    S = DGModule(sp, diff, M.right, ract, M.left, lact, name=name)
    incl = ModuleMap(S, M, ExactMatrix.from_columns(F, M.dim, basis))
    incl.subspace = G
    return S, incl


def generated_submodule(M, vectors):
    """Basis of the DG submodule generated by ``vectors`` (closure under d and the actions).

    Near a truncated window edge a plain span can miss elements whose
    preimages were cut off; the closure restores them.
    """
    G = GradedSubspace(M.space, vectors)
    todo = G.basis()
    while todo:
        new = []
        for v in todo:
            imgs = [M.d(v)]
            if M.right is not None:
                imgs += [M.act_r(v, M.right.vec(a)) for a in range(M.right.dim)]
            if M.left is not None:
                imgs += [M.act_l(M.left.vec(a), v) for a in range(M.left.dim)]
            new += [w for w in imgs if any(w) and not G.contains(w)]
        if not new:
            break
        G = GradedSubspace(M.space, G.basis() + new)
        todo = new
    return G.basis()


def quotient_module(M, vectors, name=""):
    """M modulo the DG submodule spanned by ``vectors``; returns (Q, projection)."""
    F = M.field
    G = GradedSubspace(M.space, vectors)
    for v in G.basis():
        if not G.contains(M.d(v)):
            raise SchemaError("quotient by a subspace that is not closed under d")
        if M.right is not None:
            for a in range(M.right.dim):
                if not G.contains(M.act_r(v, M.right.vec(a))):
                    raise SchemaError("quotient by a subspace that is not a right submodule")
        if M.left is not None:
            for a in range(M.left.dim):
                if not G.contains(M.act_l(M.left.vec(a), v)):
                    raise SchemaError("quotient by a subspace that is not a left submodule")
    keep = G.complement()
    pos = {j: k for k, j in enumerate(keep)}
    sp = GradedSpace(F, [M.deg(j) for j in keep], [M.space.labels[j] for j in keep],
                     M.space.window, M.space.valid, M.space.open_lo, M.space.open_hi)

    def project(v):
        w = G.reduce(v)
        return {pos[j]: x for j, x in sparse_items(w)}

    diff = {k: project(M.d(M.space.basis_vector(j))) for k, j in enumerate(keep)}
    ract, lact = {}, {}
    if M.right is not None:
        for k, j in enumerate(keep):
            e = M.space.basis_vector(j)
            for a in range(M.right.dim):
                ract[(k, a)] = project(M.act_r(e, M.right.vec(a)))
    if M.left is not None:
        for k, j in enumerate(keep):
            e = M.space.basis_vector(j)
            for a in range(M.left.dim):
                lact[(a, k)] = project(M.act_l(M.left.vec(a), e))
    Qm = DGModule(sp, diff, M.right, ract, M.left, lact, name=name)
    cols = []
    for j in range(M.dim):
        col = [F.zero] * len(keep)
        for k, x in project(M.space.basis_vector(j)).items():
            col[k] = x
        cols.append(col)
    proj = ModuleMap(M, Qm, ExactMatrix.from_columns(F, len(keep), cols))
    proj.section = keep
    return Qm, proj


def restrict_scalars(M, phi):
    """View a right module over phi.tgt as a right module over phi.src."""
    if M.right is None or not M.right.same_as(phi.tgt):
        raise SchemaError("restriction along a map into a different algebra")
    C = phi.src
    ract = {}
    for m in range(M.dim):
        e = M.space.basis_vector(m)
        for c in range(C.dim):
            ract[(m, c)] = dict(sparse_items(M.act_r(e, phi.apply(C.vec(c)))))
    return DGModule(M.space, M.diff, C, ract, M.left, M.lact, name=M.name)


def direct_sum(M, N, name=""):
    if (M.right is None) != (N.right is None) or (M.right and not M.right.same_as(N.right)):
        raise SchemaError("direct sum of modules over different algebras")
    F = M.field
    labels = list(M.space.labels)
    taken = set(labels)
    for s in N.space.labels:
        labels.append(s if s not in taken else s + "'")
    off = M.dim
    lo = min(M.space.window.lo, N.space.window.lo)
    hi = max(M.space.window.hi, N.space.window.hi)
    vlo = max(M.space.valid.lo if M.space.open_lo else NEG_INF,
              N.space.valid.lo if N.space.open_lo else NEG_INF, lo)
    vhi = min(M.space.valid.hi if M.space.open_hi else POS_INF,
              N.space.valid.hi if N.space.open_hi else POS_INF, hi)
    sp = GradedSpace(F, list(M.space.degrees) + list(N.space.degrees), labels, (lo, hi),
                     (vlo, vhi), M.space.open_lo or N.space.open_lo,
                     M.space.open_hi or N.space.open_hi)
    diff = dict(M.diff)
    for a, t in N.diff.items():
        diff[a + off] = {c + off: x for c, x in t.items()}
    ract = dict(M.ract)
    for (m, a), t in N.ract.items():
        ract[(m + off, a)] = {c + off: x for c, x in t.items()}
    return DGModule(sp, diff, M.right, ract, name=name)


def free_module(V, B, name=""):
    """V (x) B as a right B-module; V contributes its space and differential."""
    F = B.field
    nB = B.dim
    degrees, labels = [], []
    for i in range(V.dim):
        for j in range(nB):
            degrees.append(V.deg(i) + B.deg(j))
            labels.append(f"{V.space.labels[i]}⊗{B.space.labels[j]}")
    window, valid, olo, ohi = tensor_validity(V, B)
    sp = GradedSpace(F, degrees, labels, window, valid, olo, ohi)
    diff, ract = {}, {}
    for i in range(V.dim):
        s = sign(V.deg(i))
        for j in range(nB):
            t = {}
            for i2, x in V.diff.get(i, {}).items():
                t[i2 * nB + j] = t.get(i2 * nB + j, 0) + x
            for j2, y in B.diff.get(j, {}).items():
                t[i * nB + j2] = t.get(i * nB + j2, 0) + s * y
            diff[i * nB + j] = t
            for a in range(nB):
                terms = B.mult.get((j, a))
                if terms:
                    ract[(i * nB + j, a)] = {i * nB + c: x for c, x in terms.items()}
    return DGModule(sp, diff, B, ract, name=name)


# ------------------------------------------------------------------- Hom

class HomComplex(DGModule):
    """Hom(M, N) with basis maps stored as full matrices."""

    def coords(self, mat, n, strict=True):
        lay = self.layouts.get(n)
        if lay is None:
            if strict and not mat.is_zero():
                raise InternalError(f"map of degree {n} outside the Hom window")
            return []
        var_pos, free, basis_full = lay
        flat = [mat.rows[r][c] for (r, c) in var_pos]
        coords = [flat[f] for f in free]
        if strict:
            F = self.field
            rebuilt = [F.zero] * len(flat)
            for x, v in zip(coords, basis_full):
                if x:
                    rebuilt = [F.red(a + x * b) for a, b in zip(rebuilt, v)]
            if rebuilt != flat:
                raise InternalError(f"degree-{n} map is not in the Hom complex")
        return coords

    def to_vector(self, mat, n, strict=True):
        v = [self.field.zero] * self.dim
        for k, x in zip(self.space.indices(n), self.coords(mat, n, strict)):
            v[k] = x
        return v

    def element(self, v):
        """Full matrix of a (possibly inhomogeneous) Hom vector."""
        F = self.field
        out = ExactMatrix.zero(F, self.tgt.dim, self.src.dim)
        for k, x in sparse_items(v):
            out = out + self.maps[k].scale(x)
        return out


def _truncated(space, d):
    """True when degree d was cut off by an open window edge (unknown, not zero)."""
    w = space.window
    return (d > w.hi and space.open_hi) or (d < w.lo and space.open_lo)


def _ideal_indices(A):
    """Basis indices spanning (a subset of) the augmentation ideal of A."""
    if hasattr(A, "ideal_indices"):
        return list(A.ideal_indices())
    if isinstance(A, TensorAlgebra):
        B, R = A.factors
        iB, iR = set(_ideal_indices(B)), set(_ideal_indices(R))
        return [i * R.dim + j for i in range(B.dim) for j in range(R.dim) if i in iB or j in iR]
    return [i for i in range(A.dim) if A.deg(i) != 0]


def generator_degrees(M, A=None):
    """Degrees of M / M.I for I the augmentation ideal of A (all of M when A is None)."""
    if A is None:
        return M.space.support()
    F = M.field
    out = []
    ideal = _ideal_indices(A)
    for d in M.space.support():
        idx = M.space.indices(d)
        vecs = []
        for c in range(M.dim):
            for a in ideal:
                if M.deg(c) + A.deg(a) == d:
                    v = M.act_r(M.space.basis_vector(c), A.vec(a))
                    if any(v):
                        vecs.append([v[i] for i in idx])
        if Subspace(F, len(idx), vecs).dim < len(idx):
            out.append(d)
    return out


def hom_complex(M, N, over="auto", name=""):
    """The complex of maps M -> N with d(f) = d f - (-1)^|f| f d.

    ``over='right'`` keeps only right-linear maps (f(ma) = f(m) a);
    ``over='none'`` keeps all k-linear maps.  Residual structure: a left
    action from N's left action and a right action from M's left action.
    """
    F = M.field
    if over == "auto":
        over = "right" if (M.right is not None and N.right is not None) else "none"
    if over == "right":
        if M.right is None or N.right is None or not M.right.same_as(N.right):
            raise SchemaError("Hom over an algebra needs two right modules over the same algebra")
    elif over != "none":
        raise SchemaError(f"unsupported linearity {over!r}")
    A = M.right if over == "right" else None
    nlo = N.space.window.lo - M.space.window.hi
    nhi = N.space.window.hi - M.space.window.lo
    degrees, maps, layouts = [], [], {}
    for n in range(nlo, nhi + 1):
        var_pos = [(r, c) for c in range(M.dim) for r in N.space.indices(M.deg(c) + n)]
        if not var_pos:
            continue
        vix = {rc: k for k, rc in enumerate(var_pos)}
        rows = []
        if A is not None:
            for c in range(M.dim):
                ec = M.space.basis_vector(c)
                for a in range(A.dim):
                    dd = M.deg(c) + A.deg(a)
                    if _truncated(M.space, dd) or dd + n not in N.space.window:
                        continue
                    ea = A.vec(a)
                    ma = M.act_r(ec, ea)
                    eq = {}
                    for c2, x in sparse_items(ma):
                        for t in N.space.indices(dd + n):
                            k = vix[(t, c2)]
                            eq.setdefault(t, {})
                            eq[t][k] = eq[t].get(k, 0) + x
                    for r in N.space.indices(M.deg(c) + n):
                        ra = N.act_r(N.space.basis_vector(r), ea)
                        k = vix[(r, c)]
                        for t, y in sparse_items(ra):
                            eq.setdefault(t, {})
                            eq[t][k] = eq[t].get(k, 0) - y
                    for t, row in eq.items():
                        dense = [F.zero] * len(var_pos)
                        for k, x in row.items():
                            dense[k] = F.red(x)
                        if any(dense):
                            rows.append(dense)
        if rows:
            basis = nullspace(ExactMatrix(F, len(rows), len(var_pos), rows))
        else:
            basis = [[F.one if i == j else F.zero for i in range(len(var_pos))]
                     for j in range(len(var_pos))]
        if not basis:
            continue
        pivcols = set()
        if rows:
            _, piv = rref(F, rows, len(var_pos))
            pivcols = set(piv)
        free = [j for j in range(len(var_pos)) if j not in pivcols]
        layouts[n] = (var_pos, free, basis)
        for v in basis:
            mat = [[F.zero] * M.dim for _ in range(N.dim)]
            for (r, c), x in zip(var_pos, v):
                mat[r][c] = x
            degrees.append(n)
            maps.append(ExactMatrix(F, N.dim, M.dim, mat))
    counters = {}
    labels = []
    for n in degrees:
        k = counters.get(n, 0)
        counters[n] = k + 1
        labels.append(f"h{n}.{k}")
    open_hi = N.space.open_hi or M.space.open_lo
    open_lo = N.space.open_lo or M.space.open_hi
    vhi, vlo = nhi, nlo
    # a map is fixed by its values on generators of M
    gens = generator_degrees(M, A) or [M.space.window.lo]
    if N.space.open_hi:
        vhi = min(vhi, N.space.valid.hi - max(gens))
    if M.space.open_lo:
        vhi = min(vhi, N.space.window.hi - M.space.valid.lo)
    if N.space.open_lo:
        vlo = max(vlo, N.space.valid.lo - min(gens))
    if M.space.open_hi:
        vlo = max(vlo, N.space.window.lo - M.space.valid.hi)
    sp = GradedSpace(F, degrees, labels, (nlo, nhi), (vlo, vhi), open_lo, open_hi)
    H = HomComplex(sp, {})
    H.src, H.tgt, H.maps, H.layouts, H.over = M, N, maps, layouts, over
    dM, dN = M.d_full(), N.d_full()
    diff = {}
    for k, (n, f) in enumerate(zip(degrees, maps)):
        Df = dN @ f - (f @ dM).scale(sign(n))
        diff[k] = dict(sparse_items(H.to_vector(Df, n + 1)))
    lact, ract = {}, {}
    left = N.left if N.left is not None else None
    right = M.left if M.left is not None else None
    if left is not None:
        for a in range(left.dim):
            La = N.lact_matrix(left.vec(a))
            for k, (n, f) in enumerate(zip(degrees, maps)):
                lact[(a, k)] = dict(sparse_items(H.to_vector(La @ f, n + left.deg(a), strict=vlo <= n + left.deg(a) <= vhi)))
    if right is not None:
        for b in range(right.dim):
            Lb = M.lact_matrix(right.vec(b))
            for k, (n, f) in enumerate(zip(degrees, maps)):
                ract[(k, b)] = dict(sparse_items(H.to_vector(f @ Lb, n + right.deg(b), strict=vlo <= n + right.deg(b) <= vhi)))
    out = HomComplex(sp, diff, right, ract, left, lact, name=name or f"Hom({M.name},{N.name})")
    out.src, out.tgt, out.maps, out.layouts, out.over = M, N, maps, layouts, over
    return out


class EndAlgebra(DGAlgebra):
    """End(E) under composition, with E as a left module by evaluation."""

    def evaluation_module(self):
        E = self.hom.src
        lact = {}
        for k, f in enumerate(self.hom.maps):
            for e in range(E.dim):
                col = [r[e] for r in f.rows]
                lact[(k, e)] = dict(sparse_items(col))
        return DGModule(E.space, E.diff, E.right, E.ract, self, lact, name=E.name)

    def as_map(self, v):
        return self.hom.element(v)


def end_algebra(E, over="auto", name=""):
    H = hom_complex(E.forget(left=True), E.forget(left=True), over)
    F = E.field
    mult = {}
    degs = H.space.degrees
    for a, f in enumerate(H.maps):
        for b, g in enumerate(H.maps):
            n = degs[a] + degs[b]
            if n not in H.space.window:
                continue
            fg = f @ g
            if fg.is_zero():
                continue
            mult[(a, b)] = dict(sparse_items(H.to_vector(fg, n)))
    unit = H.to_vector(ExactMatrix.identity(F, E.dim), 0)
    B = EndAlgebra(H.space, unit, mult, H.diff, name=name or f"End({E.name})")
    B.hom = H
    return B


# ------------------------------------------------------------------ cone

class Cone(DGModule):
    pass


def cone(f, name=""):
    """M[1] (+) N with d(sm, n) = (-s dm, f(m) + dn)."""
    M, N = f.src, f.tgt
    if f.degree != 0:
        raise PreconditionError("cone needs a map of degree 0")
    if not f.is_closed():
        raise PreconditionError("cone needs a closed map (d f = 0)")
    if (M.right is None) != (N.right is None) or (M.right is not None and not M.right.same_as(N.right)):
        raise SchemaError("cone of a map between modules over different algebras")
    F = M.field
    off = M.dim
    degrees = [d - 1 for d in M.space.degrees] + list(N.space.degrees)
    labels = [f"{s}[1]" for s in M.space.labels] + list(N.space.labels)
    if len(set(labels)) != len(labels):
        labels = [f"{s}[1]" for s in M.space.labels] + [f"{s}'" for s in N.space.labels]
    lo = min(M.space.window.lo - 1, N.space.window.lo)
    hi = max(M.space.window.hi - 1, N.space.window.hi)
    vlo = max(M.space.valid.lo - 1 if M.space.open_lo else NEG_INF,
              N.space.valid.lo if N.space.open_lo else NEG_INF, lo)
    vhi = min(M.space.valid.hi - 1 if M.space.open_hi else POS_INF,
              N.space.valid.hi if N.space.open_hi else POS_INF, hi)
    sp = GradedSpace(F, degrees, labels, (lo, hi), (vlo, vhi),
                     M.space.open_lo or N.space.open_lo, M.space.open_hi or N.space.open_hi)
    diff = {}
    fcols = f.matrix.columns()
    for m in range(M.dim):
        t = {c: -x for c, x in M.diff.get(m, {}).items()}
        for c, x in sparse_items(fcols[m]):
            t[c + off] = t.get(c + off, 0) + x
        diff[m] = t
    for n, t in N.diff.items():
        diff[n + off] = {c + off: x for c, x in t.items()}
    ract = {}
    if M.right is not None:
        ract.update(M.ract)
        for (n, a), t in N.ract.items():
            ract[(n + off, a)] = {c + off: x for c, x in t.items()}
    C = Cone(sp, diff, M.right, ract, name=name or f"cone({f.name})")
    C.src_dim, C.f = off, f
    return C


def cone_inclusion(C):
    """N -> cone(f)."""
    F = C.field
    M, N = C.f.src, C.f.tgt
    cols = [[F.one if i == M.dim + j else F.zero for i in range(C.dim)] for j in range(N.dim)]
    return ModuleMap(N, C, ExactMatrix.from_columns(F, C.dim, cols))


# ------------------------------------------------------------ cohomology

class CohomologyReport:
    def __init__(self, module, window, groups):
        self.module = module
        self.window = window
        self.groups = groups

    @property
    def dims(self):
        return {n: g.dim for n, g in self.groups.items()}

    def dim(self, n):
        return self.groups[n].dim if n in self.groups else None

    def is_acyclic(self):
        return all(g.dim == 0 for g in self.groups.values())

    def total(self):
        return sum(g.dim for g in self.groups.values())

    def nonzero_degrees(self):
        return [n for n, g in self.groups.items() if g.dim]

    def representatives(self, n):
        sp = self.module.space
        return [sp.embed(r, n) for r in self.groups[n].reps]

    def classify(self, v, n):
        return self.groups[n].classify(self.module.space.block(v, n))

    def to_json(self):
        sp = self.module.space
        return {
            "window": self.window.to_json(),
            "dims": {str(n): g.dim for n, g in self.groups.items()},
            "representatives": {str(n): [sp.describe(v) for v in self.representatives(n)]
                                for n, g in self.groups.items() if g.dim},
        }


def cohomology(M, window=None):
    """Per-degree cohomology on the inner window (or the window given)."""
    if window is None:
        window = M.space.inner()
    window = ComplexWindow(*window)
    groups = {}
    for n in window.degrees():
        groups[n] = cohomology_at(M.d_matrix(n - 1), M.d_matrix(n))
    return CohomologyReport(M, window, groups)


def induced_on_cohomology(f, n, rep_src=None, rep_tgt=None):
    """Matrix of H^n(f) in the canonical cohomology bases."""
    hs = rep_src or cohomology(f.src, (n, n))
    ht = rep_tgt or cohomology(f.tgt, (n, n))
    cols = [ht.classify(f.apply(v), n) for v in hs.representatives(n)]
    return ExactMatrix.from_columns(f.src.field, ht.dim(n), cols)


# ---------------------------------------------------------- tensor over C

class TensorOver(DGModule):
    def cls(self, u, v):
        """Class of u (x) v in the quotient, as a vector."""
        F = self.field
        nN = self.factors[1].dim
        flat = [F.zero] * (self.factors[0].dim * nN)
        for i, x in sparse_items(u):
            for j, y in sparse_items(v):
                flat[i * nN + j] = F.red(x * y)
        return self._project(flat)


def tensor_over(M, N, name=""):
    """M (x)_C N for M.right == C == N.left, by degreewise coequalizer."""
    C = M.right
    if C is None or N.left is None or not C.same_as(N.left):
        raise SchemaError("tensor over an algebra needs a right C-module and a left C-module")
    F = M.field
    nN = N.dim
    window, valid, olo, ohi = tensor_validity(M, N)
    lo = valid[0] if olo else window[0]
    hi = valid[1] if ohi else window[1]
    pdeg = [M.deg(i) + N.deg(j) for i in range(M.dim) for j in range(nN)]
    ptot = GradedSpace(F, pdeg, [f"{a}⊗{b}" for a in M.space.labels for b in N.space.labels],
                       window)
    rels = []
    for i in range(M.dim):
        ei = M.space.basis_vector(i)
        for c in range(C.dim):
            if _truncated(M.space, M.deg(i) + C.deg(c)):
                continue
            ec = C.vec(c)
            ic = M.act_r(ei, ec)
            for j in range(nN):
                if _truncated(N.space, C.deg(c) + N.deg(j)):
                    continue
                dd = M.deg(i) + C.deg(c) + N.deg(j)
                if not lo <= dd <= hi:
                    continue
                cj = N.act_l(ec, N.space.basis_vector(j))
                v = [F.zero] * len(pdeg)
                for a, x in sparse_items(ic):
                    v[a * nN + j] = F.red(v[a * nN + j] + x)
                for b, y in sparse_items(cj):
                    v[i * nN + b] = F.red(v[i * nN + b] - y)
                if any(v):
                    rels.append(v)
    G = GradedSubspace(ptot, rels)
    keep = [k for k in G.complement() if lo <= pdeg[k] <= hi]
    pos = {k: t for t, k in enumerate(keep)}

    def project(flat):
        w = G.reduce(flat)
        out = [F.zero] * len(keep)
        for k, x in sparse_items(w):
            if k in pos:
                out[pos[k]] = x
        return out

    sp = GradedSpace(F, [pdeg[k] for k in keep], [ptot.labels[k] for k in keep],
                     (lo, hi) if keep or lo <= hi else (0, 0), (lo, hi), olo, ohi)
    diff, lact, ract = {}, {}, {}
    for t, k in enumerate(keep):
        i, j = divmod(k, nN)
        flat = [F.zero] * len(pdeg)
        s = sign(M.deg(i))
        for a, x in M.diff.get(i, {}).items():
            flat[a * nN + j] = F.red(flat[a * nN + j] + x)
        for b, y in N.diff.get(j, {}).items():
            flat[i * nN + b] = F.red(flat[i * nN + b] + s * y)
        diff[t] = dict(sparse_items(project(flat)))
        if M.left is not None:
            for a in range(M.left.dim):
                ai = M.act_l(M.left.vec(a), M.space.basis_vector(i))
                flat = [F.zero] * len(pdeg)
                for a2, x in sparse_items(ai):
                    flat[a2 * nN + j] = x
                lact[(a, t)] = dict(sparse_items(project(flat)))
        if N.right is not None:
            for b in range(N.right.dim):
                jb = N.act_r(N.space.basis_vector(j), N.right.vec(b))
                flat = [F.zero] * len(pdeg)
                for b2, y in sparse_items(jb):
                    flat[i * nN + b2] = y
                ract[(t, b)] = dict(sparse_items(project(flat)))
    T = TensorOver(sp, diff, N.right, ract, M.left, lact, name=name or f"{M.name}⊗{N.name}")
    T.factors = (M, N)
    T.pairs = keep
    T._project = project
    return T


# ------------------------------------------- B (x) R actions, split/merge

def split_action(S, T):
    """A right (B (x) R)-module as a (B^op, R)-bimodule.

    b . s = (-1)^{|b||s|} s (b (x) 1) and s . r = s (1 (x) r).
    """
    if not isinstance(T, TensorAlgebra) or S.right is None or not S.right.same_as(T):
        raise SchemaError("split_action needs a right module over a tensor algebra")
    B, R = T.factors
    Bop = opposite(B)
    iB, iR = T.inclusion_left(), T.inclusion_right()
    lact, ract = {}, {}
    for s in range(S.dim):
        e = S.space.basis_vector(s)
        for b in range(B.dim):
            sg = sign(B.deg(b) * S.deg(s))
            lact[(b, s)] = {c: sg * x for c, x in sparse_items(S.act_r(e, iB.apply(B.vec(b))))}
        for r in range(R.dim):
            ract[(s, r)] = dict(sparse_items(S.act_r(e, iR.apply(R.vec(r)))))
    return DGModule(S.space, S.diff, R, ract, Bop, lact, name=S.name)


def merge_action(X, T):
    """Inverse of ``split_action``: x (b (x) r) = (-1)^{|b||x|} (b . x) . r."""
    B, R = T.factors
    if X.left is None or X.right is None:
        raise SchemaError("merge_action needs a bimodule")
    nR = R.dim
    ract = {}
    for x in range(X.dim):
        e = X.space.basis_vector(x)
        xr = [X.act_r(e, R.vec(r)) for r in range(nR)]
        for b in range(B.dim):
            bx = X.act_l(B.vec(b), e)
            sg = sign(B.deg(b) * X.deg(x))
            # go through whichever intermediate degree the window presents exactly
            via_b = X.space.faithful(X.deg(x) + B.deg(b))
            for r in range(nR):
                if via_b or not X.space.faithful(X.deg(x) + R.deg(r)):
                    v = X.act_r(bx, R.vec(r))
                else:
                    v = X.act_l(B.vec(b), xr[r])
                ract[(x, b * nR + r)] = {c: sg * y for c, y in sparse_items(v)}
    return DGModule(X.space, X.diff, T, ract, name=X.name)


# ------------------------------------------------------------ truncation

class Truncation:
    def __init__(self, lower, upper, inclusion, projection, at):
        self.lower, self.upper = lower, upper
        self.inclusion, self.projection = inclusion, projection
        self.at = at

    def check(self):
        """Exactness and the three cohomology vanishing statements."""
        inc, pr = self.inclusion.matrix, self.projection.matrix
        report = {
            "injective": inc.rank() == inc.ncols,
            "surjective": pr.rank() == pr.nrows,
            "exact": (pr @ inc).is_zero() and inc.rank() + pr.rank() == inc.nrows,
            "chain_maps": self.inclusion.is_closed() and self.projection.is_closed(),
        }
        M = self.projection.src
        win = M.space.inner()
        hl = cohomology(self.lower, win)
        hu = cohomology(self.upper, win)
        hm = cohomology(M, win)
        report["lower_vanishes_above"] = all(hl.dim(n) == 0 for n in win.degrees() if n >= self.at)
        report["upper_vanishes_below"] = all(hu.dim(n) == 0 for n in win.degrees() if n < self.at)
        report["splits_cohomology"] = all(
            hm.dim(n) == (hl.dim(n) if n < self.at else hu.dim(n)) for n in win.degrees())
        report["window"] = win.to_json()
        report["ok"] = all(v for k, v in report.items() if k != "window")
        return report


def _no_positive_part(M):
    A = M.right
    return A is None or all(d <= 0 for d in A.space.degrees)


def truncate(M, at=0):
    """tau_{<at} M = (+)_{i<at} M^i (+) d(M^{at-1}) and the quotient tau_{>=at} M."""
    if not _no_positive_part(M):
        raise PreconditionError("truncation needs an algebra concentrated in degrees <= 0")
    vecs = [M.space.basis_vector(i) for i in range(M.dim) if M.deg(i) < at]
    vecs += [M.d(M.space.basis_vector(i)) for i in M.space.indices(at - 1)]
    lower, inc = submodule(M, vecs, name=f"tau<{at}")
    upper, pr = quotient_module(M, vecs, name=f"tau>={at}")
    return Truncation(lower, upper, inc, pr, at)


# ------------------------------------------------------------ resolution

class Resolution:
    def __init__(self, P, eps, steps, cert):
        self.P, self.eps, self.steps, self.cert = P, eps, steps, cert


def _graded_kernel(f):
    """Homogeneous basis of ker f for a degree-preserving module map."""
    M = f.src
    F = M.field
    out = []
    for n in sorted(M.space.by_degree):
        idx = M.space.indices(n)
        sub = ExactMatrix.from_columns(F, f.tgt.dim, [f.matrix.columns()[i] for i in idx])
        for v in nullspace(sub):
            out.append(M.space.embed(v, n))
    return out


def resolve_P(N, depth=4):
    """Bar-type free resolution ... -> P_{-1} -> P_0 -> N, totalized.

    P_0 = N (x) B with the tensor differential, P_{-j} = K_{j-1} (x) B for
    K_{j-1} the kernel of the previous step.  Returns a ``Resolution``
    whose certificate records where cone(eps) is acyclic.
    """
    B = N.right
    if B is None:
        raise PreconditionError("resolution needs a right module")
    if not _no_positive_part(N):
        raise PreconditionError("resolution needs an algebra concentrated in degrees <= 0")
    if depth < 0:
        raise PreconditionError("depth must be nonnegative")
    F = N.field
    steps = []
    V = N.forget(right=True, left=True)
    prev_target = N
    prev_incl = None
    for j in range(depth + 1):
        P_j = free_module(V, B, name=f"P{-j}")
        cols = []
        for i in range(V.dim):
            for b in range(B.dim):
                if j == 0:
                    cols.append(N.act_r(N.space.basis_vector(i), B.vec(b)))
                else:
                    img = prev_incl.apply(V.space.basis_vector(i))
                    cols.append(prev_target.act_r(img, B.vec(b)))
        dmap = ModuleMap(P_j, prev_target, ExactMatrix.from_columns(F, prev_target.dim, cols))
        steps.append((P_j, dmap, V))
        if j == depth:
            break
        kvecs = _graded_kernel(dmap)
        K, incl = submodule(P_j, kvecs)
        relabel = GradedSpace(F, K.space.degrees, [f"k{j}.{t}" for t in range(K.dim)],
                              K.space.window)
        V = DGModule(relabel, K.diff, name=f"K{j}")
        prev_target, prev_incl = P_j, ModuleMap(V, P_j, incl.matrix)
    # totalize
    degrees, labels, offsets = [], [], []
    for j, (P_j, _, _) in enumerate(steps):
        offsets.append(len(degrees))
        degrees += [d - j for d in P_j.space.degrees]
        labels += [f"{s}" if j == 0 else f"{s}[{j}]" for s in P_j.space.labels]
    top = max(degrees) if degrees else 0
    bottom = min(degrees) if degrees else 0
    faithful_lo = N.space.window.hi - depth
    sp = GradedSpace(F, degrees, labels, (min(bottom, N.space.window.lo), max(top, N.space.window.hi)),
                     (faithful_lo, N.space.valid.hi), True, N.space.open_hi)
    diff, ract = {}, {}
    for j, (P_j, dmap, _) in enumerate(steps):
        off = offsets[j]
        s = sign(j)
        for a in range(P_j.dim):
            t = {off + c: s * x for c, x in P_j.diff.get(a, {}).items()}
            if j > 0:
                poff = offsets[j - 1]
                for c, x in sparse_items(dmap.matrix.columns()[a]):
                    t[poff + c] = t.get(poff + c, 0) + x
            diff[off + a] = t
        for (a, b), terms in P_j.ract.items():
            ract[(off + a, b)] = {off + c: x for c, x in terms.items()}
    P = DGModule(sp, diff, B, ract, name=f"P({N.name})")
    ecols = []
    eps0 = steps[0][1]
    for k in range(P.dim):
        if k < steps[0][0].dim:
            ecols.append(eps0.matrix.columns()[k])
        else:
            ecols.append([F.zero] * N.dim)
    eps = ModuleMap(P, N, ExactMatrix.from_columns(F, N.dim, ecols), name="eps")
    C = cone(eps)
    hc = cohomology(C, C.space.window)
    bad = hc.nonzero_degrees()
    top_c = C.space.window.hi
    lo_ok = (max(bad) + 1) if bad else C.space.window.lo
    acyclic_win = ComplexWindow(lo_ok, top_c)
    qi = ComplexWindow(lo_ok + 1, N.space.inner().hi)
    cert = {
        "depth": depth,
        "cone_window": C.space.window.to_json(),
        "acyclic_window": acyclic_win.to_json(),
        "quasi_iso_window": qi.to_json(),
        "nonzero_cone_degrees": bad,
        "free_ranks": [V.dim for (_, _, V) in steps],
        "acyclic": not bad,
        # cohomology of the cone may only sit at the truncated bottom edge
        "edge_only": all(b == C.space.window.lo for b in bad),
    }
    cert["certified"] = cert["edge_only"] and acyclic_win.hi - acyclic_win.lo + 1 >= depth
    return Resolution(P, eps, steps, cert)


def is_locally_nilpotent_degree0(B):
    """Degree-0 basis elements off the unit are nilpotent within the window."""
    idx = B.space.indices(0)
    unit = B.unit_vector()
    skip = next((i for i in idx if unit[i]), None)
    for i in idx:
        if i == skip:
            continue
        x = B.vec(i)
        p = x
        for _ in range(len(idx) + 1):
            p = B.mul(p, x)
            if not any(p):
                break
        else:
            return False
    return True


class FiniteModel:
    def __init__(self, model, zigzag, window, resolution=None):
        self.model, self.zigzag, self.window = model, zigzag, window
        self.resolution = resolution


def finite_model(N, depth=4):
    """A finite-dimensional, bounded model of N with a zig-zag of quasi-isos.

    Closed (non-truncated) inputs are already finite and are returned as
    they are.  Otherwise N is resolved and the resolution is truncated from
    below at the lowest certified degree.
    """
    B = N.right
    if B is None:
        raise PreconditionError("finite model needs a right module")
    if not _no_positive_part(N):
        raise PreconditionError("finite model needs an algebra concentrated in degrees <= 0")
    if not is_locally_nilpotent_degree0(B):
        raise PreconditionError("degree-0 part of the algebra failed the locality (nilpotence) check")
    if N.space.is_closed:
        ident = ModuleMap(N, N, ExactMatrix.identity(N.field, N.dim))
        return FiniteModel(N, [ident], N.space.inner())
    res = resolve_P(N, depth)
    win = N.space.inner()
    qi = ComplexWindow(*res.cert["quasi_iso_window"])
    a = max(win.lo, qi.lo)
    tr = truncate(res.P, at=a)
    M = tr.upper
    sp = GradedSpace(M.field, M.space.degrees, M.space.labels, M.space.window,
                     (a, M.space.valid.hi), False, M.space.open_hi)
    model = DGModule(sp, M.diff, M.right, M.ract, name=f"model({N.name})")
    proj = ModuleMap(res.P, model, tr.projection.matrix)
    cert = ComplexWindow(a, min(win.hi, qi.hi))
    return FiniteModel(model, [res.eps, proj], cert, res)


def check_quasi_iso(f, window):
    """True when cone(f) is acyclic on ``window`` shifted by -1 and window."""
    C = cone(f)
    w = ComplexWindow(window.lo - 1, window.hi)
    h = cohomology(C, w)
    return h.is_acyclic()


# ------------------------------------------------------- more helpers

def shift(M, name=""):
    """M[1]: degrees lowered by one, d negated, actions unchanged."""
    sp = M.space
    lo, hi = sp.window
    nsp = GradedSpace(M.field, [d - 1 for d in sp.degrees], [f"{s}[1]" for s in sp.labels],
                      (lo - 1, hi - 1), (sp.valid.lo - 1, sp.valid.hi - 1), sp.open_lo, sp.open_hi)
    diff = {a: {c: -x for c, x in t.items()} for a, t in M.diff.items()}
    return DGModule(nsp, diff, M.right, M.ract, M.left, M.lact, name=name or f"{M.name}[1]")


def subalgebra(B, vectors, name=""):
    """The DG subalgebra spanned by homogeneous ``vectors`` (must contain 1)."""
    F = B.field
    G = GradedSubspace(B.space, vectors)
    if not G.contains(B.unit_vector()):
        raise SchemaError("subalgebra does not contain the unit")
    basis = G.basis()
    degrees = [B.space.homogeneous_degree(v) for v in basis]
    labels = [_term_label(B.space, v) for v in basis]
    sp = GradedSpace(F, degrees, labels, B.space.window, B.space.valid,
                     B.space.open_lo, B.space.open_hi)

    def coords(v, what):
        if not G.contains(v):
            raise SchemaError(f"subspace is not closed under {what}")
        return dict(sparse_items(G.coords(v)))

    mult = {}
    for a, u in enumerate(basis):
        for b, v in enumerate(basis):
            if degrees[a] + degrees[b] in B.space.window:
                t = coords(B.mul(u, v), "products")
                if t:
                    mult[(a, b)] = t
    diff = {a: coords(B.d(u), "d") for a, u in enumerate(basis)}
    unit = G.coords(B.unit_vector())
    C = DGAlgebra(sp, unit, mult, diff, name=name)
    incl = AlgebraMap(C, B, ExactMatrix.from_columns(F, B.dim, basis), name="incl")
    return C, incl


def closed_degree0_maps(M, N):
    """Basis of closed degree-0 maps M -> N (linear over the right algebra if any)."""
    H = hom_complex(M, N)
    idx = H.space.indices(0)
    if not idx:
        return H, []
    Z = nullspace(H.d_matrix(0))
    return H, [H.element(H.space.embed(z, 0)) for z in Z]


def find_dg_iso(M, N, seed=0, tries=64):
    """Some closed degree-0 isomorphism M -> N, or None.

    Tries the echelon basis of closed maps, then all combinations when
    there are few, then seeded random combinations.
    """
    import random
    from itertools import product as iproduct
    if M.dim != N.dim or M.space.degrees and sorted(M.space.degrees) != sorted(N.space.degrees):
        return None
    F = M.field
    H, Z = closed_degree0_maps(M, N)
    if M.dim == 0:
        return ModuleMap(M, N, ExactMatrix.zero(F, 0, 0))

    def ok(mat):
        f = ModuleMap(M, N, mat)
        return f if f.is_iso() else None

    for z in Z:
        f = ok(z)
        if f:
            return f
    if not Z:
        return None
    if F.is_finite and F.p ** len(Z) <= 4096:
        for coeffs in iproduct(F.elements(), repeat=len(Z)):
            mat = ExactMatrix.zero(F, N.dim, M.dim)
            for c, z in zip(coeffs, Z):
                if c:
                    mat = mat + z.scale(c)
            f = ok(mat)
            if f:
                return f
        return None
    rng = random.Random(seed)
    for _ in range(tries):
        mat = ExactMatrix.zero(F, N.dim, M.dim)
        for z in Z:
            c = rng.randrange(F.p) if F.is_finite else rng.randint(-5, 5)
            mat = mat + z.scale(c)
        f = ok(mat)
        if f:
            return f
    return None


def same_structure(M, N):
    """Equal degrees and structure tables, ignoring labels and windows."""
    if M.space.degrees != N.space.degrees:
        return False
    if M.diff != N.diff or M.ract != N.ract or M.lact != N.lact:
        return False
    for a, b in ((M.right, N.right), (M.left, N.left)):
        if (a is None) != (b is None) or (a is not None and not a.same_as(b)):
            return False
    return True


def adjunction_check(N, M, S):
    """Hom_R(N (x)_Q M, S) = Hom_Q(N, Hom_R(M, S)) via alpha(f)(n)(m) = f(n (x) m).

    N is a right Q-module, M a (Q, R)-bimodule, S a right R-module.
    Returns the two matrices and whether they are mutually inverse chain
    isomorphisms.
    """
    F = N.field
    X = tensor_over(N, M)
    H1 = hom_complex(X, S, "right")
    Y = hom_complex(M, S, "right")
    H2 = hom_complex(N, Y, "right")
    # alpha
    acols = []
    for k, f in enumerate(H1.maps):
        deg = H1.deg(k)
        g = [[F.zero] * N.dim for _ in range(Y.dim)]
        for n in range(N.dim):
            en = N.space.basis_vector(n)
            cols = [f.apply(X.cls(en, M.space.basis_vector(m))) for m in range(M.dim)]
            mat = ExactMatrix.from_columns(F, S.dim, cols)
            yv = Y.to_vector(mat, N.deg(n) + deg)
            for r, x in enumerate(yv):
                g[r][n] = x
        acols.append(H2.to_vector(ExactMatrix(F, Y.dim, N.dim, g), deg))
    alpha = ExactMatrix.from_columns(F, H2.dim, acols)
    # beta
    bcols = []
    nM = M.dim
    for k, g in enumerate(H2.maps):
        deg = H2.deg(k)
        cols = []
        for t in range(X.dim):
            i, j = divmod(_pair_of(X, t), nM)
            yv = g.apply(N.space.basis_vector(i))
            cols.append(Y.element(yv).apply(M.space.basis_vector(j)))
        mat = ExactMatrix.from_columns(F, S.dim, cols)
        bcols.append(H1.to_vector(mat, deg))
    beta = ExactMatrix.from_columns(F, H1.dim, bcols)
    chain = (H2.d_full() @ alpha) == (alpha @ H1.d_full())
    return {
        "dims": (H1.dim, H2.dim),
        "alpha": alpha, "beta": beta,
        "chain_map": chain,
        "round_trip": (alpha @ beta) == ExactMatrix.identity(F, H2.dim)
        and (beta @ alpha) == ExactMatrix.identity(F, H1.dim),
    }


def _pair_of(X, t):
    """Pair index (i * dim N + j) of the t-th basis element of a TensorOver."""
    return X.pairs[t]
