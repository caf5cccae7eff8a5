"""DG algebras, DG modules and maps between them, on finite degree windows.

Structure constants are sparse: ``mult[(a, b)] = {c: coef}`` means
``e_a e_b = sum coef e_c``; ``diff[a] = {c: coef}`` likewise.  Products
landing outside the window are dropped, so an algebra presented on
``[lo, hi]`` with an open top end is the honest quotient by everything
above ``hi``.

Sign conventions (Koszul): Leibniz ``d(ab) = d(a)b + (-1)^|a| a d(b)``;
right modules satisfy ``d(ma) = d(m)a + (-1)^|m| m d(a)``; left modules
``d(am) = d(a)m + (-1)^|a| a d(m)``.
"""
from collections import namedtuple
from itertools import product

from .errors import SchemaError
from .graded import GradedSpace, sign, sparse_items
from .linalg import ExactMatrix

Violation = namedtuple("Violation", "kind items detail")


def _clean(F, table, space_in, space_out, shift, what, arity):
    """Reduce coefficients, drop zeros, check degrees."""
    out = {}
    for key, terms in table.items():
        ks = key if arity == 2 else (key,)
        deg = sum(space_in[k].degrees[i] for k, i in enumerate(ks)) + shift
        clean = {}
        for c, coef in terms.items():
            coef = F(coef)
            if coef:
                if space_out.degrees[c] != deg:
                    labs = [space_in[k].labels[i] for k, i in enumerate(ks)]
                    raise SchemaError(
                        f"{what} of {labs} has a term {space_out.labels[c]} of degree "
                        f"{space_out.degrees[c]}, expected degree {deg}")
                clean[c] = coef
        if clean:
            out[key] = clean
    return out


def _apply_sparse(F, table, v, dim):
    out = [0] * dim
    for a, x in sparse_items(v):
        terms = table.get(a)
        if terms:
            for c, coef in terms.items():
                out[c] += x * coef
    return [F.red(x) for x in out]


def _matrix_from_table(F, table, src_idx, tgt_idx):
    pos = {c: r for r, c in enumerate(tgt_idx)}
    rows = [[F.zero] * len(src_idx) for _ in tgt_idx]
    for j, a in enumerate(src_idx):
        for c, coef in table.get(a, {}).items():
            if c in pos:
                rows[pos[c]][j] = coef
    return ExactMatrix(F, len(tgt_idx), len(src_idx), rows)


class DGAlgebra:
    """A DG algebra given by structure constants on a degree window."""

    def __init__(self, space, unit, mult, diff, name=""):
        F = space.field
        self.space = space
        self.name = name
        unit = [F.red(F(x)) for x in unit]
        if len(unit) != space.dim:
            raise SchemaError("unit vector has the wrong length")
        if any(x and space.degrees[i] != 0 for i, x in enumerate(unit)):
            raise SchemaError("unit is not of degree 0")
        self.unit = tuple(unit)
        self.mult = _clean(F, mult, (space, space), space, 0, "product", 2)
        self.diff = _clean(F, diff, (space,), space, 1, "differential", 1)
        rows = {}
        for (a, b), terms in self.mult.items():
            rows.setdefault(a, {})[b] = tuple(terms.items())
        self._rows = rows
        self._key = None

    # -- basic data
    @property
    def field(self):
        return self.space.field

    @property
    def dim(self):
        return self.space.dim

    def deg(self, i):
        return self.space.degrees[i]

    def vec(self, label):
        return self.space.basis_vector(label)

    def unit_vector(self):
        return list(self.unit)

    def out_of_window(self, a, b):
        return (self.deg(a) + self.deg(b)) not in self.space.window

    # -- arithmetic
    def mul(self, u, v):
        F = self.field
        out = [0] * self.dim
        vs = sparse_items(v)
        if not vs:
            return [F.zero] * self.dim
        for a, ua in sparse_items(u):
            row = self._rows.get(a)
            if not row:
                continue
            for b, vb in vs:
                terms = row.get(b)
                if terms:
                    s = ua * vb
                    for c, coef in terms:
                        out[c] += s * coef
        return [F.red(x) for x in out]

    def d(self, v):
        return _apply_sparse(self.field, self.diff, v, self.dim)

    def d_matrix(self, n):
        return _matrix_from_table(self.field, self.diff, self.space.indices(n),
                                  self.space.indices(n + 1))

    def d_full(self):
        idx = range(self.dim)
        return _matrix_from_table(self.field, self.diff, idx, idx)

    def lmul_matrix(self, u):
        cols = [self.mul(u, self.vec(j)) for j in range(self.dim)]
        return ExactMatrix.from_columns(self.field, self.dim, cols)

    def rmul_matrix(self, u):
        cols = [self.mul(self.vec(j), u) for j in range(self.dim)]
        return ExactMatrix.from_columns(self.field, self.dim, cols)

    def product_terms(self, a, b):
        return self.mult.get((a, b), {})

    def key(self):
        if self._key is None:
            self._key = (self.space.key(), self.unit,
                         tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self.mult.items())),
                         tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self.diff.items())))
        return self._key

    def same_as(self, other):
        return isinstance(other, DGAlgebra) and self.key() == other.key()

    def __repr__(self):
        return f"DGAlgebra({self.name or '?'}, dim={self.dim}, window={list(self.space.window)})"


class DGModule:
    """A DG module with an optional right action and an optional left action."""

    def __init__(self, space, diff, right=None, ract=None, left=None, lact=None, name=""):
        F = space.field
        self.space = space
        self.name = name
        self.right = right
        self.left = left
        self.diff = _clean(F, diff, (space,), space, 1, "differential", 1)
        self.ract = _clean(F, ract or {}, (space, right.space), space, 0, "right action", 2) if right else {}
        self.lact = _clean(F, lact or {}, (left.space, space), space, 0, "left action", 2) if left else {}
        if right is not None and right.field != F or left is not None and left.field != F:
            raise SchemaError("module and algebra fields differ")
        self._r = {}
        for (m, a), terms in self.ract.items():
            self._r.setdefault(m, {})[a] = tuple(terms.items())
        self._l = {}
        for (a, m), terms in self.lact.items():
            self._l.setdefault(a, {})[m] = tuple(terms.items())

    @property
    def field(self):
        return self.space.field

    @property
    def dim(self):
        return self.space.dim

    @property
    def side(self):
        if self.right is not None and self.left is not None:
            return "bi"
        if self.right is not None:
            return "right"
        if self.left is not None:
            return "left"
        return "none"

    def deg(self, i):
        return self.space.degrees[i]

    def d(self, v):
        return _apply_sparse(self.field, self.diff, v, self.dim)

    def d_matrix(self, n):
        return _matrix_from_table(self.field, self.diff, self.space.indices(n),
                                  self.space.indices(n + 1))

    def d_full(self):
        idx = range(self.dim)
        return _matrix_from_table(self.field, self.diff, idx, idx)

    def act_r(self, v, w):
        F = self.field
        out = [0] * self.dim
        ws = sparse_items(w)
        for m, x in sparse_items(v):
            row = self._r.get(m)
            if not row:
                continue
            for a, y in ws:
                terms = row.get(a)
                if terms:
                    s = x * y
                    for c, coef in terms:
                        out[c] += s * coef
        return [F.red(x) for x in out]

    def act_l(self, w, v):
        F = self.field
        out = [0] * self.dim
        vs = sparse_items(v)
        for a, y in sparse_items(w):
            row = self._l.get(a)
            if not row:
                continue
            for m, x in vs:
                terms = row.get(m)
                if terms:
                    s = x * y
                    for c, coef in terms:
                        out[c] += s * coef
        return [F.red(x) for x in out]

    def ract_matrix(self, w):
        cols = [self.act_r(self.space.basis_vector(j), w) for j in range(self.dim)]
        return ExactMatrix.from_columns(self.field, self.dim, cols)

    def lact_matrix(self, w):
        cols = [self.act_l(w, self.space.basis_vector(j)) for j in range(self.dim)]
        return ExactMatrix.from_columns(self.field, self.dim, cols)

    def key(self):
        def tab(t):
            return tuple(sorted((k, tuple(sorted(v.items()))) for k, v in t.items()))
        return (self.space.key(), tab(self.diff), tab(self.ract), tab(self.lact),
                self.right.key() if self.right else None,
                self.left.key() if self.left else None)

    def same_as(self, other):
        return isinstance(other, DGModule) and self.key() == other.key()

    def forget(self, right=False, left=False):
        """Drop the chosen actions (e.g. to view a bimodule as a complex)."""
        return DGModule(self.space, self.diff,
                        None if right else self.right, None if right else self.ract,
                        None if left else self.left, None if left else self.lact,
                        name=self.name)

    def __repr__(self):
        return f"DGModule({self.name or '?'}, side={self.side}, dim={self.dim})"


def regular(B):
    """B as a bimodule over itself."""
    return DGModule(B.space, B.diff, right=B, ract=B.mult, left=B, lact=B.mult,
                    name=B.name)


def complex_module(field, degrees, diff, labels=None, name="", window=None):
    """A plain complex (no actions)."""
    space = GradedSpace(field, degrees, labels, window)
    return DGModule(space, diff, name=name)


# ----------------------------------------------------------------- maps

class AlgebraMap:
    """A degree-0 linear map between DG algebras (checked by ``violations``)."""

    def __init__(self, src, tgt, matrix, name=""):
        if matrix.shape != (tgt.dim, src.dim):
            raise ValueError("algebra map matrix has the wrong shape")
        self.src = src
        self.tgt = tgt
        self.matrix = matrix
        self.name = name

    def apply(self, v):
        return self.matrix.apply(v)

    def violations(self):
        A, B = self.src, self.tgt
        out = []
        if self.apply(A.unit_vector()) != B.unit_vector():
            out.append(Violation("unit", (), "unit is not preserved"))
        for j in range(A.dim):
            img = self.apply(A.vec(j))
            if any(x and B.deg(i) != A.deg(j) for i, x in enumerate(img)):
                out.append(Violation("degree", (A.space.labels[j],), "map does not preserve degree"))
            if A.deg(j) + 1 in A.space.window and self.apply(A.d(A.vec(j))) != B.d(img):
                out.append(Violation("chain", (A.space.labels[j],), "map does not commute with d"))
        for a, b in product(range(A.dim), repeat=2):
            deg = A.deg(a) + A.deg(b)
            if deg not in A.space.window or deg not in B.space.window:
                continue
            lhs = self.apply(A.mul(A.vec(a), A.vec(b)))
            rhs = B.mul(self.apply(A.vec(a)), self.apply(A.vec(b)))
            if lhs != rhs:
                out.append(Violation("multiplicative", (A.space.labels[a], A.space.labels[b]),
                                     "map is not multiplicative"))
        return out

    def is_valid(self):
        return not self.violations()

    def compose(self, other):
        """self after other."""
        return AlgebraMap(other.src, self.tgt, self.matrix @ other.matrix)


def _in_window(M, d, d2, window):
    if d2 not in M.space.window:
        return False
    return window is None or (d in window and d2 in window)


class ModuleMap:
    """A homogeneous linear map of degree ``degree`` between DG modules."""

    def __init__(self, src, tgt, matrix, degree=0, name=""):
        if matrix.shape != (tgt.dim, src.dim):
            raise ValueError("module map matrix has the wrong shape")
        self.src = src
        self.tgt = tgt
        self.matrix = matrix
        self.degree = degree
        self.name = name

    def apply(self, v):
        return self.matrix.apply(v)

    def differential(self):
        """The Hom-complex differential d f - (-1)^|f| f d."""
        a = self.tgt.d_full() @ self.matrix
        b = self.matrix @ self.src.d_full()
        return a - b.scale(sign(self.degree))

    def is_closed(self):
        return self.differential().is_zero()

    def is_homogeneous(self):
        for j in range(self.src.dim):
            col = [r[j] for r in self.matrix.rows]
            for i, x in enumerate(col):
                if x and self.tgt.deg(i) != self.src.deg(j) + self.degree:
                    return False
        return True

    def linearity_defects(self, window=None):
        """Pairs (module basis, algebra basis) where linearity fails.

        With ``window``, only pairs whose source and product degrees lie in it count.
        """
        bad = []
        M, N, f = self.src, self.tgt, self
        if M.right is not None and N.right is not None:
            for m, a in product(range(M.dim), range(M.right.dim)):
                if not _in_window(M, M.deg(m), M.deg(m) + M.right.deg(a), window):
                    continue
                e, w = M.space.basis_vector(m), M.right.vec(a)
                if f.apply(M.act_r(e, w)) != N.act_r(f.apply(e), w):
                    bad.append(("right", M.space.labels[m], M.right.space.labels[a]))
        if M.left is not None and N.left is not None:
            F = M.field
            for a, m in product(range(M.left.dim), range(M.dim)):
                if not _in_window(M, M.deg(m), M.deg(m) + M.left.deg(a), window):
                    continue
                e, w = M.space.basis_vector(m), M.left.vec(a)
                s = sign(self.degree * M.left.deg(a))
                lhs = f.apply(M.act_l(w, e))
                rhs = [F.red(s * x) for x in N.act_l(w, f.apply(e))]
                if lhs != rhs:
                    bad.append(("left", M.left.space.labels[a], M.space.labels[m]))
        return bad

    def is_linear(self):
        return not self.linearity_defects()

    def is_iso(self):
        return self.matrix.nrows == self.matrix.ncols and self.matrix.rank() == self.matrix.nrows

    def compose(self, other):
        """self after other."""
        return ModuleMap(other.src, self.tgt, self.matrix @ other.matrix,
                         self.degree + other.degree)

    def is_dg_iso(self):
        return self.degree == 0 and self.is_iso() and self.is_closed() and self.is_linear()

    def is_iso_on(self, window):
        """Bijective from degree n to degree n + |f| for every source degree n in ``window``."""
        M, N, A = self.src, self.tgt, self.matrix
        for n in window.degrees():
            rows, cols = N.space.indices(n + self.degree), M.space.indices(n)
            if len(rows) != len(cols):
                return False
            if cols and ExactMatrix(A.field, len(rows), len(cols),
                                    [[A.rows[r][c] for c in cols] for r in rows]).rank() != len(rows):
                return False
        return True

    def is_dg_iso_on(self, window):
        """Degree-0 closed linear iso in every degree of ``window`` (both ends inside)."""
        if self.degree != 0 or not self.is_iso_on(window):
            return False
        M = self.src
        D = self.differential()
        for c in range(M.dim):
            if M.deg(c) in window and M.deg(c) + 1 in window and any(r[c] for r in D.rows):
                return False
        return not self.linearity_defects(window)

    def is_dg_iso_inner(self):
        """``is_dg_iso_on`` the common inner window of source and target."""
        return self.is_dg_iso_on(self.src.space.inner().intersect(self.tgt.space.inner()))


def identity_map(M):
    return ModuleMap(M, M, ExactMatrix.identity(M.field, M.dim))


# ------------------------------------------------------------ validation

def validate_dg_algebra(B):
    """Every violated in-window identity, as a list of ``Violation``."""
    F, sp = B.field, B.space
    win = sp.window
    lab = sp.labels
    out = []
    one = B.unit_vector()
    if any(B.d(one)):
        out.append(Violation("unit-closed", ("1",), "d(1) != 0"))
    for a in range(B.dim):
        e = B.vec(a)
        if B.mul(one, e) != e or B.mul(e, one) != e:
            out.append(Violation("unit", (lab[a],), "unit does not act as identity"))
    for a in range(B.dim):
        if B.deg(a) + 2 in win and any(B.d(B.d(B.vec(a)))):
            out.append(Violation("d-squared", (lab[a],), "d(d(a)) != 0"))
    for a, b in product(range(B.dim), repeat=2):
        deg = B.deg(a) + B.deg(b)
        if deg + 1 not in win:
            continue
        ea, eb = B.vec(a), B.vec(b)
        lhs = B.d(B.mul(ea, eb))
        s = sign(B.deg(a))
        rhs = [F.red(x + s * y) for x, y in zip(B.mul(B.d(ea), eb), B.mul(ea, B.d(eb)))]
        if lhs != rhs:
            out.append(Violation("leibniz", (lab[a], lab[b]), "d(ab) != d(a)b + (-1)^|a| a d(b)"))
    # associativity through sparse products of basis elements
    for a, b, c in product(range(B.dim), repeat=3):
        if B.deg(a) + B.deg(b) + B.deg(c) not in win:
            continue
        if B.deg(a) + B.deg(b) not in win or B.deg(b) + B.deg(c) not in win:
            continue
        ab = B.mult.get((a, b))
        bc = B.mult.get((b, c))
        if not ab and not bc:
            continue
        ec = B.vec(c)
        ea = B.vec(a)
        lhs = B.mul(_dense(F, ab, B.dim), ec)
        rhs = B.mul(ea, _dense(F, bc, B.dim))
        if lhs != rhs:
            out.append(Violation("associativity", (lab[a], lab[b], lab[c]), "(ab)c != a(bc)"))
    return out


def _dense(F, terms, dim):
    v = [F.zero] * dim
    for c, coef in (terms or {}).items():
        v[c] = coef
    return v


def _sp_lin(F, v, table):
    """Apply a sparse linear map ``{i: {c: coef}}`` to a sparse vector."""
    out = {}
    for i, x in v.items():
        for c, coef in table.get(i, {}).items():
            out[c] = out.get(c, 0) + x * coef
    return {c: y for c, y in ((c, F.red(x)) for c, x in out.items()) if y}


def _sp_bil(F, u, v, table):
    """Apply a sparse bilinear map ``{(i, j): {c: coef}}`` to two sparse vectors."""
    out = {}
    for i, x in u.items():
        for j, y in v.items():
            terms = table.get((i, j))
            if terms:
                s = x * y
                for c, coef in terms.items():
                    out[c] = out.get(c, 0) + s * coef
    return {c: y for c, y in ((c, F.red(x)) for c, x in out.items()) if y}


def _sp_add(F, u, v, s=1):
    out = dict(u)
    for c, y in v.items():
        out[c] = out.get(c, 0) + s * y
    return {c: y for c, y in ((c, F.red(x)) for c, x in out.items()) if y}


def validate_module(M):
    """Check d^2 = 0, unitality, Leibniz and associativity on basis elements.

    Everything runs on the sparse structure tables, so the cost scales
    with the number of nonzero structure constants.
    """
    F, sp = M.field, M.space
    win = sp.window
    lab = sp.labels
    out = []
    for m in range(M.dim):
        if M.deg(m) + 2 in win and _sp_lin(F, _sp_lin(F, {m: 1}, M.diff), M.diff):
            out.append(Violation("d-squared", (lab[m],), "d(d(m)) != 0"))
    A = M.right
    if A is not None:
        one = {a: x for a, x in enumerate(A.unit) if x}
        for m in range(M.dim):
            if _sp_bil(F, {m: 1}, one, M.ract) != {m: 1}:
                out.append(Violation("unit", (lab[m],), "m.1 != m"))
        for m, a in product(range(M.dim), range(A.dim)):
            if M.deg(m) + A.deg(a) + 1 not in win:
                continue
            e, w = {m: 1}, {a: 1}
            lhs = _sp_lin(F, _sp_bil(F, e, w, M.ract), M.diff)
            rhs = _sp_add(F, _sp_bil(F, _sp_lin(F, e, M.diff), w, M.ract),
                          _sp_bil(F, e, _sp_lin(F, w, A.diff), M.ract), sign(M.deg(m)))
            if lhs != rhs:
                out.append(Violation("leibniz", (lab[m], A.space.labels[a]),
                                     "d(ma) != d(m)a + (-1)^|m| m d(a)"))
        for m, a, b in product(range(M.dim), range(A.dim), range(A.dim)):
            if M.deg(m) + A.deg(a) + A.deg(b) not in win or A.deg(a) + A.deg(b) not in A.space.window:
                continue
            if M.deg(m) + A.deg(a) not in win:
                continue
            e = {m: 1}
            lhs = _sp_bil(F, _sp_bil(F, e, {a: 1}, M.ract), {b: 1}, M.ract)
            rhs = _sp_bil(F, e, A.mult.get((a, b), {}), M.ract)
            if lhs != rhs:
                out.append(Violation("associativity", (lab[m], A.space.labels[a], A.space.labels[b]),
                                     "(ma)b != m(ab)"))
    L = M.left
    if L is not None:
        one = {a: x for a, x in enumerate(L.unit) if x}
        for m in range(M.dim):
            if _sp_bil(F, one, {m: 1}, M.lact) != {m: 1}:
                out.append(Violation("unit", (lab[m],), "1.m != m"))
        for a, m in product(range(L.dim), range(M.dim)):
            if M.deg(m) + L.deg(a) + 1 not in win:
                continue
            e, w = {m: 1}, {a: 1}
            lhs = _sp_lin(F, _sp_bil(F, w, e, M.lact), M.diff)
            rhs = _sp_add(F, _sp_bil(F, _sp_lin(F, w, L.diff), e, M.lact),
                          _sp_bil(F, w, _sp_lin(F, e, M.diff), M.lact), sign(L.deg(a)))
            if lhs != rhs:
                out.append(Violation("leibniz", (L.space.labels[a], lab[m]),
                                     "d(am) != d(a)m + (-1)^|a| a d(m)"))
        for a, b, m in product(range(L.dim), range(L.dim), range(M.dim)):
            if M.deg(m) + L.deg(a) + L.deg(b) not in win or L.deg(a) + L.deg(b) not in L.space.window:
                continue
            if M.deg(m) + L.deg(b) not in win:
                continue
            e = {m: 1}
            lhs = _sp_bil(F, {a: 1}, _sp_bil(F, {b: 1}, e, M.lact), M.lact)
            rhs = _sp_bil(F, L.mult.get((a, b), {}), e, M.lact)
            if lhs != rhs:
                out.append(Violation("associativity", (L.space.labels[a], L.space.labels[b], lab[m]),
                                     "a(bm) != (ab)m"))
    if A is not None and L is not None:
        for a, m, b in product(range(L.dim), range(M.dim), range(A.dim)):
            deg = L.deg(a) + M.deg(m) + A.deg(b)
            if deg not in win or L.deg(a) + M.deg(m) not in win or M.deg(m) + A.deg(b) not in win:
                continue
            e = {m: 1}
            lhs = _sp_bil(F, _sp_bil(F, {a: 1}, e, M.lact), {b: 1}, M.ract)
            rhs = _sp_bil(F, {a: 1}, _sp_bil(F, e, {b: 1}, M.ract), M.lact)
            if lhs != rhs:
                out.append(Violation("bimodule", (L.space.labels[a], lab[m], A.space.labels[b]),
                                     "(am)b != a(mb)"))
    return out


# --------------------------------------------------------- constructions

def opposite(B):
    """Same space and d; a.b = (-1)^{|a||b|} ba."""
    mult = {}
    for (b, a), terms in B.mult.items():
        s = sign(B.deg(a) * B.deg(b))
        mult[(a, b)] = {c: s * coef for c, coef in terms.items()}
    name = B.name[:-3] if B.name.endswith("^op") else (B.name + "^op" if B.name else "")
    return DGAlgebra(B.space, B.unit, mult, B.diff, name=name)


def tensor_validity(X, Y):
    """Window, faithful range and open flags of a tensor product X (x) Y."""
    sx, sy = X.space, Y.space
    window = (sx.window.lo + sy.window.lo, sx.window.hi + sy.window.hi)
    lo, hi = window
    if sx.open_hi:
        hi = min(hi, sx.valid.hi + sy.window.lo)
    if sy.open_hi:
        hi = min(hi, sy.valid.hi + sx.window.lo)
    if sx.open_lo:
        lo = max(lo, sx.valid.lo + sy.window.hi)
    if sy.open_lo:
        lo = max(lo, sy.valid.lo + sx.window.hi)
    return window, (lo, hi), sx.open_lo or sy.open_lo, sx.open_hi or sy.open_hi


class TensorAlgebra(DGAlgebra):
    """B (x) R with pair basis index ``i * dim R + j``."""

    def __init__(self, B, R, name=""):
        if B.field != R.field:
            raise SchemaError("tensor factors live over different fields")
        F = B.field
        nR = R.dim
        degrees, labels = [], []
        for i in range(B.dim):
            for j in range(nR):
                degrees.append(B.deg(i) + R.deg(j))
                labels.append(f"{B.space.labels[i]}⊗{R.space.labels[j]}")
        window, valid, olo, ohi = tensor_validity(B, R)
        space = GradedSpace(F, degrees, labels, window, valid, olo, ohi)
        mult = {}
        for (i1, i2), bt in B.mult.items():
            for (j1, j2), rt in R.mult.items():
                s = sign(R.deg(j1) * B.deg(i2))
                terms = {}
                for i3, x in bt.items():
                    for j3, y in rt.items():
                        terms[i3 * nR + j3] = s * x * y
                mult[(i1 * nR + j1, i2 * nR + j2)] = terms
        diff = {}
        for i in range(B.dim):
            for j in range(nR):
                terms = {}
                for i2, x in B.diff.get(i, {}).items():
                    k = i2 * nR + j
                    terms[k] = terms.get(k, 0) + x
                s = sign(B.deg(i))
                for j2, y in R.diff.get(j, {}).items():
                    k = i * nR + j2
                    terms[k] = terms.get(k, 0) + s * y
                if terms:
                    diff[i * nR + j] = terms
        unit = [F.zero] * (B.dim * nR)
        for i, x in sparse_items(B.unit):
            for j, y in sparse_items(R.unit):
                unit[i * nR + j] = F.red(x * y)
        super().__init__(space, unit, mult, diff,
                         name=name or f"{B.name or 'B'}⊗{R.name or 'R'}")
        self.factors = (B, R)

    def pair(self, i, j):
        return i * self.factors[1].dim + j

    def unpair(self, k):
        return divmod(k, self.factors[1].dim)

    def tensor_vec(self, u, v):
        F = self.field
        out = [F.zero] * self.dim
        for i, x in sparse_items(u):
            for j, y in sparse_items(v):
                out[self.pair(i, j)] = F.red(x * y)
        return out

    def inclusion_left(self):
        """b -> b (x) 1."""
        B, R = self.factors
        cols = [self.tensor_vec(B.vec(i), R.unit_vector()) for i in range(B.dim)]
        return AlgebraMap(B, self, ExactMatrix.from_columns(self.field, self.dim, cols))

    def inclusion_right(self):
        """r -> 1 (x) r."""
        B, R = self.factors
        cols = [self.tensor_vec(B.unit_vector(), R.vec(j)) for j in range(R.dim)]
        return AlgebraMap(R, self, ExactMatrix.from_columns(self.field, self.dim, cols))


def tensor_dg(B, R, name=""):
    return TensorAlgebra(B, R, name)


def ground_algebra(F):
    """The one-dimensional algebra k."""
    return DGAlgebra(GradedSpace(F, [0], ["1"]), [1], {(0, 0): {0: 1}}, {}, name="k")
