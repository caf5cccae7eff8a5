"""Exact linear algebra over Q and F_p.

Vectors are lists of field elements; matrices act on column vectors
(``A.rows[i][j]`` is the coefficient of input ``j`` in output ``i``).
Every echelon form uses first-nonzero pivoting, so subspace bases and
quotient coordinates are canonical: they depend on the subspace, not on
the spanning set that produced it.
"""
from .errors import SchemaError
from .kernels import rref_modp


class ExactMatrix:
    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, nrows, ncols, rows=None):
        if rows is None:
            rows = [[field.zero] * ncols for _ in range(nrows)]
        rows = tuple(tuple(field.red(x) for x in row) for row in rows)
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ValueError("matrix entries do not match the declared shape")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nrows", nrows)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, key, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, n, [[field.one if i == j else field.zero
                                  for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, field, nrows, ncols):
        return cls(field, nrows, ncols)

    @classmethod
    def from_columns(cls, field, nrows, cols):
        cols = list(cols)
        return cls(field, nrows, len(cols),
                   [[c[i] for c in cols] for i in range(nrows)])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def columns(self):
        return [[r[j] for r in self.rows] for j in range(self.ncols)]

    def apply(self, v):
        if len(v) != self.ncols:
            raise ValueError(f"vector of length {len(v)} for {self.ncols} columns")
        F = self.field
        nz = [(j, x) for j, x in enumerate(v) if x]
        return [F.red(sum(row[j] * x for j, x in nz)) if nz else F.zero
                for row in self.rows]

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch in product")
        cols = [self.apply(c) for c in other.columns()]
        return ExactMatrix.from_columns(self.field, self.nrows, cols)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("dimension mismatch in sum")
        return ExactMatrix(self.field, self.nrows, self.ncols,
                           [[a + b for a, b in zip(r, s)]
                            for r, s in zip(self.rows, other.rows)])

    def scale(self, c):
        return ExactMatrix(self.field, self.nrows, self.ncols,
                           [[c * a for a in r] for r in self.rows])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    @property
    def T(self):
        return ExactMatrix(self.field, self.ncols, self.nrows, self.columns())

    def is_zero(self):
        return not any(any(r) for r in self.rows)

    def rank(self):
        return len(rref(self.field, self.rows, self.ncols)[1])

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.field == other.field
                and self.shape == other.shape and self.rows == other.rows)

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.rows))

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols}, {self.field.name})"


def rref(F, rows, ncols):
    """Reduced echelon form of a list of rows; returns (nonzero rows, pivots)."""
    rows = [list(r) for r in rows]
    if not rows or not ncols:
        return [], []
    if F.is_finite:
        return rref_modp(rows, ncols, F.p)
    a = [[F(x) for x in r] for r in rows]
    nrows = len(a)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        row = a[r]
        inv = 1 / row[c]
        if inv != 1:
            row[c:] = [x * inv for x in row[c:]]
        for i in range(nrows):
            f = a[i][c]
            if i != r and f:
                other = a[i]
                for j in range(c, ncols):
                    if row[j]:
                        other[j] -= f * row[j]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _as_rows(A):
    if isinstance(A, ExactMatrix):
        return A.field, A.rows, A.ncols
    raise TypeError("expected an ExactMatrix")


def nullspace(A):
    """Canonical basis of {x : A x = 0}: one vector per free column."""
    F, rows, n = _as_rows(A)
    R, piv = rref(F, rows, n)
    pivset = set(piv)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [F.zero] * n
        v[f] = F.one
        for row, pc in zip(R, piv):
            if row[f]:
                v[pc] = F.red(-row[f])
        basis.append(v)
    return basis


def solve_linear(A, b):
    """Solve A x = b exactly.

    Returns ``None`` when inconsistent, else ``(x0, kernel_basis)`` with
    x0 the echelon-canonical particular solution (free variables zero).

    >>> from dgdeform.fields import F3
    >>> solve_linear(ExactMatrix.identity(F3, 2), [1, 0])
    ([1, 0], [])
    >>> solve_linear(ExactMatrix.zero(F3, 1, 1), [1]) is None
    True
    """
    F = A.field
    if len(b) != A.nrows:
        raise ValueError(f"right-hand side of length {len(b)} for {A.nrows} rows")
    n = A.ncols
    aug = [list(r) + [F(x)] for r, x in zip(A.rows, b)]
    R, piv = rref(F, aug, n + 1)
    if piv and piv[-1] == n:
        return None
    x0 = [F.zero] * n
    for row, pc in zip(R, piv):
        x0[pc] = F.red(row[n])
    return x0, nullspace(A)


class Subspace:
    """A subspace of F^n held by its reduced echelon basis."""

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field, ambient, vectors=()):
        R, piv = rref(field, [list(v) for v in vectors], ambient)
        self.field = field
        self.ambient = ambient
        self.basis = [list(r) for r in R]
        self.pivots = list(piv)

    @property
    def dim(self):
        return len(self.basis)

    def reduce(self, v):
        """Canonical coset representative of v (zero at pivot columns)."""
        F = self.field
        w = [F.red(x) for x in v]
        for row, pc in zip(self.basis, self.pivots):
            c = w[pc]
            if c:
                for j, x in enumerate(row):
                    if x:
                        w[j] = F.red(w[j] - c * x)
        return w

    def contains(self, v):
        return not any(self.reduce(v))

    def coords(self, v):
        """Coordinates of v in the echelon basis; raises if v is outside."""
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return [self.field.red(v[pc]) for pc in self.pivots]

    def combine(self, coords):
        F = self.field
        out = [F.zero] * self.ambient
        for c, row in zip(coords, self.basis):
            if c:
                for j, x in enumerate(row):
                    if x:
                        out[j] += c * x
        return [F.red(x) for x in out]

    def complement_coords(self):
        """Columns that are not pivots: coordinates of the quotient F^n/self."""
        ps = set(self.pivots)
        return [j for j in range(self.ambient) if j not in ps]

    def __contains__(self, v):
        return self.contains(v)

    def issubset(self, other):
        return all(other.contains(v) for v in self.basis)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.basis == other.basis)


def image_basis(A):
    """Canonical echelon basis of the column space of A."""
    return Subspace(A.field, A.nrows, A.columns()).basis


class SubquotientBasis:
    """ker(d_out) / im(d_in) with canonical representatives.

    ``reps`` are echelon-form lifts of a basis of the quotient, reduced
    against the relations, so the representatives depend only on the two
    subspaces.  ``classify`` maps a cocycle to its coordinates.
    """

    def __init__(self, field, ambient, cycles, boundaries):
        self.field = field
        self.ambient = ambient
        self._rel = Subspace(field, ambient, boundaries)
        self._cyc = Subspace(field, ambient, cycles)
        if not self._rel.issubset(self._cyc):
            raise ValueError("relations are not contained in the cycles")
        reduced = [self._rel.reduce(z) for z in self._cyc.basis]
        self._rep = Subspace(field, ambient, reduced)

    @property
    def dim(self):
        return self._rep.dim

    @property
    def reps(self):
        return [list(v) for v in self._rep.basis]

    @property
    def relations(self):
        return [list(v) for v in self._rel.basis]

    @property
    def cycle_dim(self):
        return self._cyc.dim

    @property
    def boundary_dim(self):
        return self._rel.dim

    def is_cycle(self, v):
        return self._cyc.contains(v)

    def is_boundary(self, v):
        return self._rel.contains(v)

    def classify(self, v):
        if not self._cyc.contains(v):
            raise ValueError("vector is not a cocycle")
        w = self._rel.reduce(v)
        return self._rep.coords(w)

    def lift(self, coords):
        return self._rep.combine(coords)


def cohomology_at(d_in, d_out):
    """ker(d_out)/im(d_in) for a composable pair with d_out d_in = 0."""
    if d_in.nrows != d_out.ncols:
        raise ValueError("d_in and d_out are not composable")
    if d_in.field != d_out.field:
        raise ValueError("field mismatch")
    if not (d_out @ d_in).is_zero():
        raise SchemaError("d_out . d_in is nonzero: the differential does not square to zero")
    F = d_in.field
    return SubquotientBasis(F, d_in.nrows, nullspace(d_out), d_in.columns())


def rank(A):
    return A.rank()


def is_injective(A):
    return A.rank() == A.ncols


def is_surjective(A):
    return A.rank() == A.nrows


def inverse(A):
    if A.nrows != A.ncols:
        raise ValueError("only square matrices are invertible")
    F = A.field
    n = A.nrows
    aug = [list(r) + [F.one if i == j else F.zero for j in range(n)]
           for i, r in enumerate(A.rows)]
    R, piv = rref(F, aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular")
    return ExactMatrix(F, n, n, [row[n:] for row in R[:n]])
