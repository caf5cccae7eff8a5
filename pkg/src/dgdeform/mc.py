"""The Maurer-Cartan groupoid of B (x) m for an artinian DG algebra R.

Objects are alpha in (B (x) m)^1 with Q(alpha) = d alpha + alpha^2 = 0.
A gauge map alpha -> beta is g = 1 + u, u in (B (x) m)^0, with
g alpha - beta g - d g = 0; it is affine-linear in u, so every Hom-set is
an affine subspace.  Homotopies h in (B (x) m)^{-1} move g by
d h + beta h + h alpha, a linear subspace V(alpha, beta); morphisms of the
groupoid are the cosets of V.

Elements are stored as tuples of coordinates on the basis pairs
``(b, r)`` of B (x) R of the relevant degree with r in m.
"""
import random
from itertools import product

from .dg import TensorAlgebra
from .errors import InternalError, PreconditionError, SchemaError
from .graded import sparse_items
from .kernels import mc_scan
from .linalg import ExactMatrix, Subspace, SubquotientBasis, cohomology_at, nullspace, solve_linear
from .artinian import quotient

DEFAULT_BOUND = 16


def _span_elements(F, basis, dim):
    """All vectors of span(basis) over a finite field, in a fixed order."""
    if not F.is_finite:
        raise PreconditionError("enumeration needs a finite field")
    for coeffs in product(F.elements(), repeat=len(basis)):
        v = [F.zero] * dim
        for c, b in zip(coeffs, basis):
            if c:
                v = [F.red(x + c * y) for x, y in zip(v, b)]
        yield v


class MCContext:
    """Coordinates and linear operators on B (x) m in degrees -1 .. 3."""

    MARGIN = range(-1, 4)

    def __init__(self, B, R, check_margin=True):
        if B.field != R.field:
            raise SchemaError("B and R live over different fields")
        self.B, self.R = B, R
        self.F = B.field
        self.T = TensorAlgebra(B, R)
        self.nR = R.dim
        if check_margin:
            bad = [k for k in self.MARGIN if not self.T.space.faithful(k)]
            if bad:
                raise PreconditionError(
                    f"window of B (x) R is not faithful in degrees {bad}; need degrees -1..3")
        self._idx = {}
        self._dm = {}
        self._H = {}
        self._bar = None

    # -- coordinates
    def idx(self, deg, s=1):
        key = (deg, s)
        if key not in self._idx:
            start = self.R.starts[min(s, len(self.R.starts) - 1)]
            self._idx[key] = [k for k in self.T.space.indices(deg) if k % self.nR >= start]
        return self._idx[key]

    def dim(self, deg, s=1):
        return len(self.idx(deg, s))

    def embed(self, coords, deg, s=1):
        v = [self.F.zero] * self.T.dim
        for k, x in zip(self.idx(deg, s), coords):
            v[k] = x
        return v

    def restrict(self, v, deg, s=1):
        idx = self.idx(deg, s)
        inside = set(idx)
        for k, x in sparse_items(v):
            if k not in inside:
                raise InternalError(
                    f"vector has a component {self.T.space.labels[k]} outside (B⊗m^{s})^{deg}")
        return tuple(v[k] for k in idx)

    def zero(self, deg=1, s=1):
        return tuple([self.F.zero] * self.dim(deg, s))

    def one(self):
        return self.T.unit_vector()

    def dmat(self, deg, s=1):
        key = (deg, s)
        if key not in self._dm:
            src, tgt = self.idx(deg, s), self.idx(deg + 1, s)
            pos = {c: r for r, c in enumerate(tgt)}
            rows = [[self.F.zero] * len(src) for _ in tgt]
            for j, a in enumerate(src):
                for c, x in self.T.diff.get(a, {}).items():
                    if c not in pos:
                        raise InternalError("d does not preserve B⊗m^s")
                    rows[pos[c]][j] = x
            self._dm[key] = ExactMatrix(self.F, len(tgt), len(src), rows)
        return self._dm[key]

    def H(self, deg, s=1):
        key = (deg, s)
        if key not in self._H:
            self._H[key] = cohomology_at(self.dmat(deg - 1, s), self.dmat(deg, s))
        return self._H[key]

    def describe(self, coords, deg=1, s=1):
        return self.T.space.describe(self.embed(coords, deg, s))

    def parse(self, terms, deg=1, s=1):
        """Coordinates from a {label: coef} mapping (labels of B (x) R)."""
        v = [self.F.zero] * self.T.dim
        for lab, c in terms.items():
            lab = lab.replace("*", "⊗")
            if lab not in self.T.space.index:
                raise SchemaError(f"unknown basis element {lab!r} of B⊗R")
            v[self.T.space.index[lab]] = self.F(c)
        try:
            return self.restrict(v, deg, s)
        except InternalError as e:
            raise SchemaError(str(e)) from None

    # -- MC equation and gauge action
    def full(self, coords, deg=1):
        return self.embed(coords, deg)

    def defect_full(self, alpha):
        a = self.full(alpha)
        T = self.T
        return [self.F.red(x + y) for x, y in zip(T.d(a), T.mul(a, a))]

    def defect(self, alpha):
        """Q(alpha) = d alpha + alpha^2 in (B (x) m)^2 coordinates."""
        return self.restrict(self.defect_full(alpha), 2)

    def is_mc(self, alpha):
        return not any(self.defect_full(alpha))

    def gauge_inverse_full(self, u):
        F, T = self.F, self.T
        uu = self.full(u, 0)
        neg = [F.red(-x) for x in uu]
        out = self.one()
        term = self.one()
        for _ in range(self.R.n + 1):
            term = T.mul(term, neg)
            if not any(term):
                break
            out = [F.red(x + y) for x, y in zip(out, term)]
        else:
            if any(T.mul(term, neg)):
                raise InternalError("gauge element is not unipotent")
        return out

    def gauge_act(self, u, alpha):
        """(1 + u) . alpha = g alpha g^-1 + g d(g^-1)."""
        F, T = self.F, self.T
        g = [F.red(x + y) for x, y in zip(self.one(), self.full(u, 0))]
        gi = self.gauge_inverse_full(u)
        a = self.full(alpha)
        out = [F.red(x + y) for x, y in zip(T.mul(T.mul(g, a), gi), T.mul(g, T.d(gi)))]
        return self.restrict(out, 1)

    def compose(self, u2, u1):
        """(1 + u2)(1 + u1) = 1 + u1 + u2 + u2 u1."""
        F, T = self.F, self.T
        a, b = self.full(u2, 0), self.full(u1, 0)
        prod_ = T.mul(a, b)
        return self.restrict([F.red(x + y + z) for x, y, z in zip(a, b, prod_)], 0)

    def gauge_operator(self, alpha, beta):
        """Matrix of u -> u alpha - beta u - d u, (B (x) m)^0 -> (B (x) m)^1."""
        T = self.T
        a, b = self.full(alpha), self.full(beta)
        cols = []
        for k in self.idx(0):
            e = [self.F.zero] * T.dim
            e[k] = self.F.one
            v = [self.F.red(x - y - z) for x, y, z in zip(T.mul(e, a), T.mul(b, e), T.d(e))]
            cols.append(self.restrict(v, 1))
        return ExactMatrix.from_columns(self.F, self.dim(1), cols)

    def twisted_d(self, alpha, beta, deg):
        """Matrix of d^{alpha,beta}(x) = dx + beta x - (-1)^|x| x alpha on (B (x) m)^deg."""
        T = self.T
        a, b = self.full(alpha), self.full(beta)
        s = -1 if deg % 2 else 1
        cols = []
        for k in self.idx(deg):
            e = [self.F.zero] * T.dim
            e[k] = self.F.one
            v = [self.F.red(x + y - s * z) for x, y, z in zip(T.d(e), T.mul(b, e), T.mul(e, a))]
            cols.append(self.restrict(v, deg + 1))
        return ExactMatrix.from_columns(self.F, self.dim(deg + 1), cols)

    def homotopy_space(self, alpha, beta):
        """V(alpha, beta) = {dh + beta h + h alpha : h in (B (x) m)^-1}."""
        M = self.twisted_d(alpha, beta, -1)
        return Subspace(self.F, self.dim(0), M.columns())

    def hom(self, alpha, beta):
        return HomSet(self, alpha, beta)

    # -- reductions along R -> R/m^n
    def bar(self):
        """Context for R/I with I = m^n the last nonzero power."""
        if self._bar is None:
            Rb, _ = quotient(self.R, self.R.n)
            self._bar = MCContext(self.B, Rb, check_margin=False)
        return self._bar

    def reduce_to(self, other, coords, deg=1):
        """Image under the projection R -> other.R (a prefix of coordinates)."""
        nb = other.nR
        v = [self.F.zero] * other.T.dim
        for k, x in zip(self.idx(deg), coords):
            i, r = divmod(k, self.nR)
            if r < nb and x:
                v[i * nb + r] = x
        return other.restrict(v, deg)

    def lift_from(self, other, coords, deg=1):
        """Zero-padded lift of coordinates from a quotient context."""
        v = [self.F.zero] * self.T.dim
        for k, x in zip(other.idx(deg), coords):
            i, r = divmod(k, other.nR)
            v[i * self.nR + r] = x
        return self.restrict(v, deg)

    def ideal_part(self, coords, deg, s):
        """Coordinates of a vector lying in (B (x) m^s)^deg."""
        return self.restrict(self.embed(coords, deg), deg, s)

    def from_ideal(self, coords, deg, s):
        return self.restrict(self.embed(coords, deg, s), deg)


class HomSet:
    """Gauge maps alpha -> beta modulo homotopy: (u0 + K) / V."""

    def __init__(self, ctx, alpha, beta):
        self.ctx, self.alpha, self.beta = ctx, tuple(alpha), tuple(beta)
        F = ctx.F
        L = ctx.gauge_operator(alpha, beta)
        rhs = [F.red(b - a) for a, b in zip(alpha, beta)]
        sol = solve_linear(L, rhs)
        self.V = ctx.homotopy_space(alpha, beta)
        if sol is None:
            self.u0, self.K, self.W = None, [], []
            return
        self.u0, self.K = sol
        for v in self.V.basis:
            if any(L.apply(v)):
                raise InternalError("homotopy moves a gauge map off the Hom-set")
        self.W = Subspace(F, ctx.dim(0), [self.V.reduce(k) for k in self.K]).basis

    @property
    def empty(self):
        return self.u0 is None

    @property
    def class_dim(self):
        return None if self.empty else len(self.W)

    def count(self):
        if self.empty:
            return 0
        F = self.ctx.F
        if not F.is_finite:
            raise PreconditionError("class counts need a finite field")
        return F.p ** len(self.W)

    def canonical(self, u):
        return tuple(self.V.reduce(u))

    def contains(self, u):
        L = self.ctx.gauge_operator(self.alpha, self.beta)
        F = self.ctx.F
        return list(L.apply(list(u))) == [F.red(b - a) for a, b in zip(self.alpha, self.beta)]

    def classes(self):
        """Canonical coset representatives (finite fields only)."""
        if self.empty:
            return []
        F = self.ctx.F
        base = self.V.reduce(self.u0)
        out = []
        for w in _span_elements(F, self.W, self.ctx.dim(0)):
            out.append(tuple(F.red(x + y) for x, y in zip(base, w)))
        return sorted(out)

    def all_maps(self):
        """Every gauge map alpha -> beta (finite fields only)."""
        if self.empty:
            return []
        F = self.ctx.F
        return sorted(tuple(F.red(x + y) for x, y in zip(self.u0, k))
                      for k in _span_elements(F, self.K, self.ctx.dim(0)))


# ----------------------------------------------------------- enumeration

def mc_defect(ctx, alpha):
    return ctx.defect(alpha)


def gauge_act(ctx, u, alpha):
    if not ctx.is_mc(alpha):
        raise PreconditionError("gauge action on an element that is not Maurer-Cartan")
    out = ctx.gauge_act(u, alpha)
    if not ctx.is_mc(out):
        raise InternalError("gauge action left the Maurer-Cartan cone")
    return out


def gauge_classes(ctx, alpha, beta):
    for x in (alpha, beta):
        if not ctx.is_mc(x):
            raise PreconditionError("gauge classes between elements that are not Maurer-Cartan")
    hs = ctx.hom(alpha, beta)
    if not ctx.F.is_finite:
        raise PreconditionError("enumerating gauge classes needs a finite field")
    return hs.classes()


def _scan_terms(ctx):
    T = ctx.T
    V1, V2 = ctx.idx(1), ctx.idx(2)
    pos = {c: r for r, c in enumerate(V2)}
    p = ctx.F.p
    lin, quad = [], []
    for a, ka in enumerate(V1):
        for c, x in T.diff.get(ka, {}).items():
            lin.append((pos[c], a, int(x) % p))
    for a, ka in enumerate(V1):
        for b, kb in enumerate(V1):
            for c, x in T.product_terms(ka, kb).items():
                if c in pos:
                    quad.append((pos[c], a, b, int(x) % p))
                else:
                    raise InternalError("product of degree-1 elements left (B⊗m)^2")
    return lin, quad


def _decode(code, p, n):
    out = []
    for _ in range(n):
        code, r = divmod(code, p)
        out.append(r)
    return tuple(out)


def brute_mc(ctx, bound=DEFAULT_BOUND):
    """All Maurer-Cartan elements by exhaustive scan (finite fields)."""
    F = ctx.F
    if not F.is_finite:
        raise PreconditionError("exhaustive scan needs a finite field")
    n = ctx.dim(1)
    if n > bound:
        raise PreconditionError(f"(B⊗m)^1 has dimension {n} > bound {bound}")
    lin, quad = _scan_terms(ctx)
    m = ctx.dim(2)
    codes = mc_scan(F.p, n, m, [0] * m, lin, quad)
    return sorted(_decode(c, F.p, n) for c in codes)


class Fiber:
    """Lifts of one point: ``point + span(directions)`` (possibly empty)."""

    def __init__(self, ctx, point, directions):
        self.ctx, self.point, self.directions = ctx, point, directions

    @property
    def empty(self):
        return self.point is None

    def elements(self):
        if self.empty:
            return []
        F = self.ctx.F
        out = []
        for w in _span_elements(F, self.directions, len(self.point)):
            out.append(tuple(F.red(x + y) for x, y in zip(self.point, w)))
        return out

    def size(self):
        if self.empty:
            return 0
        return self.ctx.F.p ** len(self.directions)


def lift_fiber(ctx, xi):
    """Maurer-Cartan lifts of xi (over R/m^n) to R: alpha~ + eta0 + Z^1(B (x) I)."""
    F = ctx.F
    bar = ctx.bar()
    n = ctx.R.n
    if not bar.is_mc(xi):
        raise PreconditionError("the point to lift is not Maurer-Cartan over R/I")
    at = ctx.lift_from(bar, xi)
    q = ctx.restrict(ctx.defect_full(at), 2, n)
    sol = solve_linear(ctx.dmat(1, n), [F.red(-x) for x in q])
    if sol is None:
        return Fiber(ctx, None, [])
    eta0, Z1 = sol
    point = tuple(F.red(x + y) for x, y in zip(at, ctx.from_ideal(eta0, 1, n)))
    dirs = [list(ctx.from_ideal(z, 1, n)) for z in Z1]
    return Fiber(ctx, point, dirs)


def lift_enumerate(B, R, bound=DEFAULT_BOUND, strata=None):
    """MC_R(B) built stratum by stratum along R -> R/m^n -> ... -> k.

    Over a finite field returns the sorted list of all elements.  Over Q
    returns a ``SymbolicStrata`` with the first stratum as a linear space
    and a per-point fiber map for the later ones.
    """
    F = B.field
    ctxs = []
    for j in range(1, R.n + 2):
        Rj = R if j == R.n + 1 else quotient(R, j)[0]
        ctxs.append(MCContext(B, Rj, check_margin=(j == R.n + 1)))
    if not F.is_finite:
        first = ctxs[1] if len(ctxs) > 1 else ctxs[0]
        return SymbolicStrata(ctxs, first)
    current = [()]
    log = []
    for j in range(1, len(ctxs)):
        ctx = ctxs[j]
        ctx._bar = ctxs[j - 1]
        nxt = []
        obstructed = 0
        for xi in current:
            fib = lift_fiber(ctx, xi)
            if fib.empty:
                obstructed += 1
                continue
            if len(nxt) + fib.size() > F.p ** bound:
                raise PreconditionError("stratified enumeration exceeds the bound")
            nxt.extend(fib.elements())
        log.append({"stratum": j, "points_below": len(current), "obstructed": obstructed,
                    "points": len(nxt)})
        current = nxt
    if strata is not None:
        strata.extend(log)
    return sorted(current)


class SymbolicStrata:
    """Exact description over Q: MC(R/m^2) is the linear space Z^1(B (x) m/m^2)."""

    def __init__(self, ctxs, first):
        self.ctxs = ctxs
        self.first = first
        self.first_stratum = nullspace(first.dmat(1, 1)) if first.dim(1) else []

    def lift_fiber(self, j, xi):
        ctx = self.ctxs[j]
        ctx._bar = self.ctxs[j - 1]
        return lift_fiber(ctx, xi)


# ------------------------------------------------------------ skeletons

def orbits(ctx, objects):
    """Partition of ``objects`` into gauge orbits."""
    F = ctx.F
    objs = sorted(set(tuple(o) for o in objects))
    n0 = ctx.dim(0)
    group_size = F.p ** n0 if F.is_finite else None
    if group_size is not None and group_size <= 4096:
        members = set(objs)
        seen, out = set(), []
        group = list(_span_elements(F, [[F.one if i == j else F.zero for i in range(n0)]
                                        for j in range(n0)], n0))
        for o in objs:
            if o in seen:
                continue
            orb = {ctx.gauge_act(tuple(u), o) for u in group}
            if not orb <= members:
                raise InternalError("gauge orbit leaves the enumerated object set")
            seen |= orb
            out.append(sorted(orb))
        return out
    reps, out = [], []
    for o in objs:
        for k, r in enumerate(reps):
            if not ctx.hom(r, o).empty:
                out[k].append(o)
                break
        else:
            reps.append(o)
            out.append([o])
    return out


class GroupoidSkeleton:
    def __init__(self, ctx, objects, orbit_list):
        self.ctx = ctx
        self.objects = objects
        self.orbits = orbit_list
        self.reps = [orb[0] for orb in orbit_list]
        self.hom = {}
        for i, a in enumerate(self.reps):
            for j, b in enumerate(self.reps):
                hs = ctx.hom(a, b)
                self.hom[(i, j)] = hs

    def orbit_of(self, obj):
        obj = tuple(obj)
        for k, orb in enumerate(self.orbits):
            if obj in orb:
                return k
        raise KeyError(obj)

    def aut_counts(self):
        return [self.hom[(i, i)].count() for i in range(len(self.reps))]

    def to_json(self):
        ctx = self.ctx
        return {
            "objects": [ctx.describe(o) for o in self.objects],
            "orbits": [[self.objects.index(o) for o in orb] for orb in self.orbits],
            "representatives": [self.objects.index(r) for r in self.reps],
            "hom": [{"source": i, "target": j, "classes": hs.count(),
                     "representatives": [ctx.describe(u, 0) for u in hs.classes()]}
                    for (i, j), hs in sorted(self.hom.items())],
            "automorphism_classes": self.aut_counts(),
        }


def groupoid_skeleton(ctx, bound=DEFAULT_BOUND, objects=None):
    if not ctx.F.is_finite:
        raise PreconditionError("groupoid skeletons are computed over finite fields only")
    if objects is None:
        objects = brute_mc(ctx, bound) if ctx.dim(1) <= bound else lift_enumerate(ctx.B, ctx.R, bound)
    objects = sorted(set(tuple(o) for o in objects))
    return GroupoidSkeleton(ctx, objects, orbits(ctx, objects))


# ----------------------------------------------------------- obstructions

class ObstructionClass:
    def __init__(self, degree, group, coords, cocycle, ctx, s):
        self.degree, self.group, self.coords = degree, group, coords
        self.cocycle = cocycle
        self.ctx, self.s = ctx, s

    @property
    def is_zero(self):
        return not any(self.coords)

    @property
    def ambient_dim(self):
        return self.group.dim

    def to_json(self):
        ctx = self.ctx
        F = ctx.F
        return {
            "degree": self.degree,
            "ambient_dim": self.group.dim,
            "coords": [F.to_json(x) for x in self.coords],
            "zero": self.is_zero,
            "cocycle": ctx.describe(self.cocycle, self.degree, self.s),
            "basis": [ctx.describe(r, self.degree, self.s) for r in self.group.reps],
        }


def _random_vector(F, n, rng):
    if F.is_finite:
        return [rng.randrange(F.p) for _ in range(n)]
    return [F(rng.randint(-3, 3)) for _ in range(n)]


def obstruction_o2(ctx, xi, seed=0):
    """[Q(alpha~)] in H^2(B (x) I) for xi in MC over R/I, I = m^n."""
    F = ctx.F
    bar = ctx.bar()
    n = ctx.R.n
    xi = tuple(F(x) for x in xi)
    if not bar.is_mc(xi):
        raise PreconditionError("o2 needs a Maurer-Cartan element over R/I")
    H = ctx.H(2, n)
    at = ctx.lift_from(bar, xi)
    q = ctx.restrict(ctx.defect_full(at), 2, n)
    try:
        c1 = H.classify(list(q))
    except ValueError:
        raise SchemaError("Q of a lift is not a cocycle: the algebra data is inconsistent") from None
    rng = random.Random(seed)
    eta = _random_vector(F, ctx.dim(1, n), rng)
    at2 = tuple(F.red(x + y) for x, y in zip(at, ctx.from_ideal(eta, 1, n)))
    q2 = ctx.restrict(ctx.defect_full(at2), 2, n)
    c2 = H.classify(list(q2))
    if c1 != c2:
        raise InternalError("o2 depends on the chosen lift")
    return ObstructionClass(2, H, c1, q, ctx, n)


def fiber_o1(ctx, alpha, beta):
    """[alpha - beta] in H^1(B (x) I) for two lifts of the same point."""
    F = ctx.F
    bar = ctx.bar()
    n = ctx.R.n
    for x in (alpha, beta):
        if not ctx.is_mc(x):
            raise PreconditionError("o1 needs Maurer-Cartan elements")
    if ctx.reduce_to(bar, alpha) != ctx.reduce_to(bar, beta):
        raise PreconditionError("o1 needs two lifts of the same point")
    diff = [F.red(a - b) for a, b in zip(alpha, beta)]
    z = ctx.restrict(ctx.embed(diff, 1), 1, n)
    H = ctx.H(1, n)
    return ObstructionClass(1, H, H.classify(list(z)), z, ctx, n)


def torsor_act(ctx, alpha, eta):
    """alpha + eta for eta in Z^1(B (x) I)."""
    n = ctx.R.n
    if any(ctx.dmat(1, n).apply(list(eta))):
        raise PreconditionError("translation by a non-cocycle")
    F = ctx.F
    return tuple(F.red(x + y) for x, y in zip(alpha, ctx.from_ideal(eta, 1, n)))


def morphism_o0(ctx, alpha, beta, f_bar):
    """Lifts of the gauge class f_bar: pi(alpha) -> pi(beta) to alpha -> beta.

    Returns a report with the fiber (as homotopy classes over R), the
    transitivity of the H^0(B (x) I)-action, and the kernel of the action
    computed two ways: by enumeration, and as
    ker(H^0(B (x) I) -> H^0(B (x) m, d^{alpha,beta})).
    """
    F = ctx.F
    if not F.is_finite:
        raise PreconditionError("morphism fibers are enumerated over finite fields only")
    bar = ctx.bar()
    n = ctx.R.n
    for x in (alpha, beta):
        if not ctx.is_mc(x):
            raise PreconditionError("o0 needs Maurer-Cartan lifts")
    a_bar, b_bar = ctx.reduce_to(bar, alpha), ctx.reduce_to(bar, beta)
    hs_bar = bar.hom(a_bar, b_bar)
    if hs_bar.empty or not hs_bar.contains(f_bar):
        raise PreconditionError("f is not a gauge map between the reductions")
    target = hs_bar.canonical(f_bar)
    hs = ctx.hom(alpha, beta)
    fiber = [c for c in hs.classes() if hs_bar.canonical(ctx.reduce_to(bar, c, 0)) == target]
    H0 = ctx.H(0, n)
    zreps = [list(ctx.from_ideal(r, 0, n)) for r in H0.reps]
    hz = list(_span_elements(F, zreps, ctx.dim(0))) if zreps else [[F.zero] * ctx.dim(0)]
    coeff_list = list(product(F.elements(), repeat=len(zreps)))
    # d^{alpha,beta} squares to zero (asserted) and the linear kernel
    dm1 = ctx.twisted_d(alpha, beta, -1)
    d0 = ctx.twisted_d(alpha, beta, 0)
    if not (d0 @ dm1).is_zero():
        raise InternalError("d^{alpha,beta} does not square to zero")
    Htw = SubquotientBasis(F, ctx.dim(0), nullspace(d0), dm1.columns())
    img = ExactMatrix.from_columns(F, Htw.dim, [Htw.classify(z) for z in zreps]) if zreps \
        else ExactMatrix.zero(F, Htw.dim, 0)
    lin_kernel = nullspace(img) if zreps else []
    lin_kernel_set = {tuple(v) for v in _span_elements(F, lin_kernel, len(zreps))} if zreps else {()}
    report = {
        "fiber_size": len(fiber),
        "fiber": [ctx.describe(c, 0) for c in fiber],
        "H0_dim": H0.dim,
        "H0_size": F.p ** H0.dim,
        "kernel_dim": len(lin_kernel),
        "nonempty": bool(fiber),
    }
    if fiber:
        g0 = fiber[0]
        orbit = set()
        enum_kernel = set()
        for coeffs, z in zip(coeff_list, hz):
            c = hs.canonical([F.red(x + y) for x, y in zip(g0, z)])
            orbit.add(c)
            if c == hs.canonical(list(g0)):
                enum_kernel.add(tuple(coeffs))
        report["transitive"] = orbit == set(fiber)
        report["kernel_enumerated"] = len(enum_kernel)
        report["kernel_matches"] = enum_kernel == lin_kernel_set
        report["free_quotient"] = len(fiber) * len(enum_kernel) == F.p ** H0.dim
    return report


# ---------------------------------------------------------- comparison

def _tensor_map(phi, ctxC, ctxB):
    """phi (x) 1 on coordinates of a given degree."""
    F = ctxC.F
    nR = ctxC.nR

    def apply(coords, deg=1):
        v = [F.zero] * ctxB.T.dim
        for k, x in zip(ctxC.idx(deg), coords):
            if not x:
                continue
            i, r = divmod(k, nR)
            img = phi.apply(phi.src.vec(i))
            for c, y in sparse_items(img):
                v[c * nR + r] = F.red(v[c * nR + r] + x * y)
        return ctxB.restrict(v, deg)
    return apply


def compare_mc(phi, R, bound=DEFAULT_BOUND):
    """Induced functor MC_R(C) -> MC_R(B) for an algebra map phi: C -> B."""
    bad = phi.violations()
    if bad:
        v = bad[0]
        raise SchemaError(f"not a DG algebra map: {v.kind} at {list(v.items)}")
    C, B = phi.src, phi.tgt
    ctxC, ctxB = MCContext(C, R), MCContext(B, R)
    skC = groupoid_skeleton(ctxC, bound)
    skB = groupoid_skeleton(ctxB, bound)
    f = _tensor_map(phi, ctxC, ctxB)
    images = [f(r) for r in skC.reps]
    for img in images:
        if not ctxB.is_mc(img):
            raise InternalError("phi does not preserve the Maurer-Cartan equation")
    hit = [skB.orbit_of(img) for img in images]
    ess = set(hit) == set(range(len(skB.reps)))
    inj = len(set(hit)) == len(hit)
    full = faithful = True
    homs = []
    for (i, j), hs in sorted(skC.hom.items()):
        hsB = ctxB.hom(images[i], images[j])
        src = hs.classes()
        img = {hsB.canonical(f(u, 0)) for u in src}
        nB = hsB.count()
        faithful &= len(img) == len(src)
        full &= len(img) == nB
        homs.append({"source": i, "target": j, "classes_C": len(src), "classes_B": nB,
                     "image": len(img)})
    return {
        "objects_C": len(skC.objects), "objects_B": len(skB.objects),
        "orbits_C": len(skC.reps), "orbits_B": len(skB.reps),
        "essentially_surjective": ess, "pi0_injective": inj,
        "pi0_bijection": ess and inj, "full": full, "faithful": faithful,
        "equivalence": ess and inj and full and faithful, "hom": homs,
        "skeleton_C": skC, "skeleton_B": skB,
    }


# ------------------------------------------------------- torsor checks

def torsor_suite(ctx, bound=DEFAULT_BOUND, max_objects=12):
    """Exhaustive check of the lifting torsor structure along R -> R/I.

    For every Maurer-Cartan point over R/I: the fiber is nonempty exactly
    when o2 vanishes, it agrees with brute force, and differences inside
    a fiber biject onto Z^1(B (x) I).  For pairs of lifts (first
    ``max_objects`` in sorted order) every gauge class below is checked
    with ``morphism_o0``.
    """
    F = ctx.F
    if not F.is_finite:
        raise PreconditionError("torsor checks enumerate and need a finite field")
    bar = ctx.bar()
    n = ctx.R.n
    full = brute_mc(ctx, bound)
    below = brute_mc(bar, bound)
    by_point = {}
    for a in full:
        by_point.setdefault(ctx.reduce_to(bar, a), []).append(a)
    z1 = len(nullspace(ctx.dmat(1, n))) if ctx.dim(1, n) else 0
    points = []
    ok = True
    for xi in below:
        o2 = obstruction_o2(ctx, xi)
        fib = lift_fiber(ctx, xi)
        brute = sorted(by_point.get(xi, []))
        rec = {"point": bar.describe(xi), "o2_zero": o2.is_zero, "fiber_size": len(brute)}
        rec["obstruction_ok"] = o2.is_zero == (not fib.empty) == bool(brute)
        rec["fiber_matches"] = sorted(fib.elements()) == brute
        if brute:
            a0 = brute[0]
            diffs = set()
            cocycles = True
            for a in brute:
                d = [F.red(x - y) for x, y in zip(a, a0)]
                z = ctx.restrict(ctx.embed(d, 1), 1, n)
                if any(ctx.dmat(1, n).apply(list(z))):
                    cocycles = False
                diffs.add(z)
            rec["difference_bijective"] = cocycles and len(diffs) == len(brute) == F.p ** z1
        else:
            rec["difference_bijective"] = True
        ok &= rec["obstruction_ok"] and rec["fiber_matches"] and rec["difference_bijective"]
        points.append(rec)
    morphisms = []
    objs = full[:max_objects]
    for a, b in product(objs, repeat=2):
        ab, bb = ctx.reduce_to(bar, a), ctx.reduce_to(bar, b)
        hs_bar = bar.hom(ab, bb)
        if hs_bar.empty:
            continue
        for f in hs_bar.classes():
            rep = morphism_o0(ctx, a, b, f)
            good = (not rep["nonempty"]) or (rep["transitive"] and rep["kernel_matches"]
                                             and rep["free_quotient"])
            ok &= good
            morphisms.append({"alpha": ctx.describe(a), "beta": ctx.describe(b),
                              "f_bar": bar.describe(f, 0), "fiber_size": rep["fiber_size"],
                              "kernel_dim": rep["kernel_dim"], "H0_dim": rep["H0_dim"], "ok": good})
    return {"ok": ok, "Z1_dim": z1, "objects": len(full), "points_below": len(below),
            "points": points, "morphism_checks": len(morphisms), "morphisms": morphisms}
