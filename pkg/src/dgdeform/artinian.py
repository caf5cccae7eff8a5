"""Augmented artinian DG algebras and the dual bimodule R*.

An ``ArtinianDG`` is always stored in an *adapted* basis: the unit first,
then a complement of m^2 in m, then of m^3 in m^2, and so on.  Every power
m^j is then a tail of coordinates, quotients R/m^j are prefixes, and the
canonical lift of a class from R/m^j to R is zero padding.
"""
from itertools import product

from .dg import AlgebraMap, DGAlgebra, DGModule, validate_dg_algebra
from .errors import SchemaError
from .graded import GradedSpace, sign, sparse_items
from .linalg import ExactMatrix, Subspace, inverse, nullspace


class ArtinianDG(DGAlgebra):
    """Artinian DG algebra in an adapted basis.

    ``starts[j]`` is the first coordinate of m^j (``starts[0] = 0``,
    ``starts[1] = 1``, ``starts[n + 1] = dim``).
    """

    def __init__(self, space, unit, mult, diff, starts, name=""):
        super().__init__(space, unit, mult, diff, name=name)
        self.starts = tuple(starts)

    @property
    def n(self):
        """Nilpotency order: least n with m^(n+1) = 0."""
        return len(self.starts) - 2

    @property
    def augmentation(self):
        F = self.field
        return [F.one] + [F.zero] * (self.dim - 1)

    def power_indices(self, j):
        j = min(j, len(self.starts) - 1)
        return range(self.starts[j], self.dim)

    def ideal_indices(self):
        return self.power_indices(1)

    def filtration_dims(self):
        return [self.dim - s for s in self.starts[1:]]

    @property
    def tags(self):
        degs = set(self.space.degrees)
        out = []
        pos = all(d >= 0 for d in degs)
        neg = all(d <= 0 for d in degs)
        if pos:
            out.append("dgart+")
        if neg:
            out.append("dgart-")
        if pos and neg:
            out.append("art")
            if self.is_commutative():
                out.append("cart")
        return out

    def is_commutative(self):
        for a, b in product(range(self.dim), repeat=2):
            if self.mult.get((a, b), {}) != self.mult.get((b, a), {}):
                return False
        return True

    def describe_filtration(self):
        lab = self.space.labels
        return [[lab[i] for i in self.power_indices(j)] for j in range(1, self.n + 1)]

    def __repr__(self):
        return f"ArtinianDG({self.name or '?'}, dim={self.dim}, n={self.n}, tags={self.tags})"


def _label(space, v):
    items = sparse_items(v)
    if len(items) == 1 and items[0][1] == space.field.one:
        return space.labels[items[0][0]]
    parts = []
    for i, x in items:
        c = space.field.to_json(x)
        parts.append(space.labels[i] if c == 1 else f"{c}{space.labels[i]}")
    return "(" + "+".join(parts) + ")"


def _augmentation_violations(R, aug):
    F = R.field
    out = []

    def ev(v):
        return F.red(sum(a * x for a, x in zip(aug, v)))

    if ev(R.unit_vector()) != F.one:
        out.append("augmentation does not send 1 to 1")
    for i in range(R.dim):
        if aug[i] and R.deg(i) != 0:
            out.append(f"augmentation is nonzero on {R.space.labels[i]} of degree {R.deg(i)}")
        if ev(R.d(R.vec(i))):
            out.append(f"augmentation does not vanish on d({R.space.labels[i]}): m is not d-stable")
    for a, b in product(range(R.dim), repeat=2):
        if ev(R.mul(R.vec(a), R.vec(b))) != F.red(aug[a] * aug[b]):
            out.append(f"augmentation is not multiplicative on ({R.space.labels[a]}, {R.space.labels[b]})")
    return out


def validate_artinian(R, augmentation=None, name=None):
    """Check the artinian axioms and return the algebra in an adapted basis."""
    F = R.field
    if not R.space.is_closed:
        raise SchemaError("an artinian DG algebra must be finite (closed window)")
    bad = validate_dg_algebra(R)
    if bad:
        v = bad[0]
        raise SchemaError(f"not a DG algebra: {v.kind} at {list(v.items)}")
    if augmentation is None:
        augmentation = R.unit_vector()
    aug = [F(x) for x in augmentation]
    if len(aug) != R.dim:
        raise SchemaError("augmentation vector has the wrong length")
    msgs = _augmentation_violations(R, aug)
    if msgs:
        raise SchemaError(msgs[0])
    m = nullspace(ExactMatrix(F, 1, R.dim, [aug]))
    powers = [Subspace(F, R.dim, m)]
    while powers[-1].dim:
        prev = powers[-1]
        prods = [R.mul(a, b) for a in prev.basis for b in m]
        nxt = Subspace(F, R.dim, prods)
        if nxt.dim == prev.dim:
            raise SchemaError("maximal ideal is not nilpotent")
        if not nxt.issubset(prev):
            raise SchemaError("powers of the maximal ideal are not decreasing")
        powers.append(nxt)
    # adapted basis: unit, then complements of m^(j+1) in m^j
    basis = [R.unit_vector()]
    starts = [0, 1]
    for j in range(len(powers) - 1):
        hi, lo = powers[j], powers[j + 1]
        reduced = [lo.reduce(v) for v in hi.basis]
        comp = Subspace(F, R.dim, reduced).basis
        basis.extend(comp)
        starts.append(len(basis))
    sp = R.space
    P = ExactMatrix.from_columns(F, R.dim, basis)
    if P == ExactMatrix.identity(F, R.dim):
        return ArtinianDG(sp, R.unit, R.mult, R.diff, starts, name=R.name if name is None else name)
    Pinv = inverse(P)
    degrees = [sp.homogeneous_degree(v) for v in basis]
    labels = [_label(sp, v) for v in basis]
    nsp = GradedSpace(F, degrees, labels, sp.window)
    mult, diff = {}, {}
    for a, b in product(range(R.dim), repeat=2):
        w = Pinv.apply(R.mul(basis[a], basis[b]))
        if any(w):
            mult[(a, b)] = dict(sparse_items(w))
    for a in range(R.dim):
        w = Pinv.apply(R.d(basis[a]))
        if any(w):
            diff[a] = dict(sparse_items(w))
    unit = [F.one] + [F.zero] * (R.dim - 1)
    out = ArtinianDG(nsp, unit, mult, diff, starts, name=R.name if name is None else name)
    out.rebase = P
    return out


def quotient(R, j):
    """R/m^j and the projection; ``j`` runs over 1..n+1."""
    if not 1 <= j <= R.n + 1:
        raise SchemaError(f"quotient index {j} outside 1..{R.n + 1}")
    F = R.field
    k = R.starts[j]
    sp = GradedSpace(F, R.space.degrees[:k], R.space.labels[:k])
    mult = {}
    for (a, b), terms in R.mult.items():
        if a < k and b < k:
            t = {c: x for c, x in terms.items() if c < k}
            if t:
                mult[(a, b)] = t
    diff = {}
    for a, terms in R.diff.items():
        if a < k:
            t = {c: x for c, x in terms.items() if c < k}
            if t:
                diff[a] = t
    Q = ArtinianDG(sp, R.unit[:k], mult, diff, R.starts[:j + 1],
                   name=f"{R.name}/m^{j}" if R.name else "")
    rows = [[F.one if c == r else F.zero for c in range(R.dim)] for r in range(k)]
    pi = AlgebraMap(R, Q, ExactMatrix(F, k, R.dim, rows), name="pi")
    return Q, pi


def dual_bimodule(R):
    """R* = Hom_k(R, k) with (rf)(q) = (-1)^{(|f|+|q|)|r|} f(qr), (fr)(p) = f(rp).

    (R*)^i is the dual of R^{-i}; basis element ``e*`` is dual to ``e``.
    The differential is (df)(r) = -(-1)^{|f|} f(dr).
    """
    F = R.field
    n = R.dim
    degrees = [-d for d in R.space.degrees]
    labels = [f"{s}*" for s in R.space.labels]
    sp = GradedSpace(F, degrees, labels)
    # structure constants of R: coefficient of e_i in e_a e_b
    lact, ract, diff = {}, {}, {}
    for r in range(n):
        for f in range(n):
            left, right = {}, {}
            for q in range(n):
                # (r f)(e_q) = sign * coeff of e_f in e_q e_r
                c = R.mult.get((q, r), {}).get(f)
                if c:
                    s = sign((degrees[f] + R.deg(q)) * R.deg(r))
                    left[q] = left.get(q, 0) + s * c
                # (f r)(e_p) = coeff of e_f in e_r e_p
                c = R.mult.get((r, q), {}).get(f)
                if c:
                    right[q] = right.get(q, 0) + c
            if left:
                lact[(r, f)] = left
            if right:
                ract[(f, r)] = right
    for f in range(n):
        t = {}
        s = -sign(degrees[f])
        for q in range(n):
            c = R.diff.get(q, {}).get(f)
            if c:
                t[q] = t.get(q, 0) + s * c
        if t:
            diff[f] = t
    return DGModule(sp, diff, R, ract, R, lact, name=f"{R.name}*" if R.name else "R*")


def dual_checks(R, Rs=None):
    """Structural checks on R*: bimodule axioms, k inside R*, Hom_R(k, R*) = k."""
    from .dg import validate_module
    Rs = Rs or dual_bimodule(R)
    F = R.field
    viol = validate_module(Rs)
    iota = Rs.space.basis_vector(0)
    sub = Subspace(F, Rs.dim, [iota])
    sub_ok = True
    for r in range(R.dim):
        if not sub.contains(Rs.act_l(R.vec(r), iota)) or not sub.contains(Rs.act_r(iota, R.vec(r))):
            sub_ok = False
    # left R-linear maps k -> R*: elements killed by m on the left, of any degree
    rows = []
    for r in R.ideal_indices():
        M = Rs.lact_matrix(R.vec(r))
        rows.extend(M.rows)
    ann = nullspace(ExactMatrix(F, len(rows), Rs.dim, rows)) if rows else \
        [Rs.space.basis_vector(i) for i in range(Rs.dim)]
    hom_k = Subspace(F, Rs.dim, ann)
    return {
        "bimodule": not viol,
        "violations": [(v.kind, list(v.items)) for v in viol],
        "k_submodule": sub_ok,
        "hom_k_dim": hom_k.dim,
        "hom_k_is_k": hom_k.dim == 1 and hom_k.contains(iota),
    }
