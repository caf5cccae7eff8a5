"""Graded vector spaces on a finite degree window, and dense vector helpers.

A space with an *open* end is a truncated presentation of an object that
continues past the window on that side.  Only degrees in ``valid`` are
faithful; ``inner()`` further drops one degree at each open end, since a
cohomology group needs both neighbouring degrees.
"""
from collections import namedtuple

from .errors import SchemaError


class ComplexWindow(namedtuple("ComplexWindow", "lo hi")):
    """Degree interval on which a cohomological claim has been checked."""

    __slots__ = ()

    @property
    def empty(self):
        return self.lo > self.hi

    def __contains__(self, n):
        return self.lo <= n <= self.hi

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def intersect(self, other):
        return ComplexWindow(max(self.lo, other.lo), min(self.hi, other.hi))

    def shift(self, k):
        return ComplexWindow(self.lo + k, self.hi + k)

    def to_json(self):
        return [self.lo, self.hi]


class GradedSpace:
    __slots__ = ("field", "degrees", "labels", "window", "valid", "open_lo",
                 "open_hi", "by_degree", "index")

    def __init__(self, field, degrees, labels=None, window=None, valid=None,
                 open_lo=False, open_hi=False):
        degrees = tuple(int(d) for d in degrees)
        if labels is None:
            labels = tuple(f"e{i}" for i in range(len(degrees)))
        labels = tuple(str(s) for s in labels)
        if len(labels) != len(degrees):
            raise SchemaError("labels and degrees differ in length")
        if len(set(labels)) != len(labels):
            dup = sorted({s for s in labels if labels.count(s) > 1})
            raise SchemaError(f"duplicate basis labels {dup}")
        if window is None:
            window = (min(degrees), max(degrees)) if degrees else (0, 0)
        window = ComplexWindow(int(window[0]), int(window[1]))
        for d, s in zip(degrees, labels):
            if d not in window:
                raise SchemaError(f"basis element {s} of degree {d} lies outside window {list(window)}")
        if valid is None:
            valid = window
        valid = ComplexWindow(max(valid[0], window.lo), min(valid[1], window.hi))
        by = {}
        for i, d in enumerate(degrees):
            by.setdefault(d, []).append(i)
        self.field = field
        self.degrees = degrees
        self.labels = labels
        self.window = window
        self.valid = valid
        self.open_lo = bool(open_lo)
        self.open_hi = bool(open_hi)
        self.by_degree = {d: tuple(v) for d, v in by.items()}
        self.index = {s: i for i, s in enumerate(labels)}

    @property
    def dim(self):
        return len(self.degrees)

    def indices(self, deg):
        return self.by_degree.get(deg, ())

    def dim_at(self, deg):
        return len(self.by_degree.get(deg, ()))

    def dims(self):
        return {d: self.dim_at(d) for d in self.window.degrees()}

    def support(self):
        return sorted(self.by_degree)

    def inner(self):
        lo = self.valid.lo + (1 if self.open_lo else 0)
        hi = self.valid.hi - (1 if self.open_hi else 0)
        return ComplexWindow(lo, hi)

    @property
    def is_closed(self):
        return not (self.open_lo or self.open_hi)

    def faithful(self, deg):
        """True when degree ``deg`` is presented exactly (maybe as zero)."""
        if deg < self.window.lo:
            return not self.open_lo
        if deg > self.window.hi:
            return not self.open_hi
        return deg in self.valid

    def zero(self):
        return [self.field.zero] * self.dim

    def basis_vector(self, i):
        if isinstance(i, str):
            i = self.index[i]
        v = self.zero()
        v[i] = self.field.one
        return v

    def homogeneous_degree(self, v):
        """Degree of a nonzero homogeneous vector; None for 0, error if mixed."""
        ds = {self.degrees[i] for i, x in enumerate(v) if x}
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"vector is not homogeneous (degrees {sorted(ds)})")
        return ds.pop()

    def block(self, v, deg):
        return [v[i] for i in self.indices(deg)]

    def embed(self, w, deg):
        v = self.zero()
        for i, x in zip(self.indices(deg), w):
            v[i] = x
        return v

    def describe(self, v):
        """Sparse label -> coefficient view of a vector (JSON-ready)."""
        F = self.field
        return {self.labels[i]: F.to_json(x) for i, x in enumerate(v) if x}

    def with_window(self, valid=None, open_lo=None, open_hi=None):
        return GradedSpace(self.field, self.degrees, self.labels, self.window,
                           self.valid if valid is None else valid,
                           self.open_lo if open_lo is None else open_lo,
                           self.open_hi if open_hi is None else open_hi)

    def key(self):
        return (self.field.p, self.degrees, tuple(self.window))


def vadd(F, u, v):
    return [F.red(a + b) for a, b in zip(u, v)]


def vsub(F, u, v):
    return [F.red(a - b) for a, b in zip(u, v)]


def vscale(F, c, u):
    return [F.red(c * a) for a in u]


def vzero(v):
    return not any(v)


def sparse_items(v):
    return [(i, x) for i, x in enumerate(v) if x]


def sign(k):
    return -1 if k % 2 else 1
