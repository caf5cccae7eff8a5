"""Brute-force oracles, written against the raw structure constants only.

Nothing here uses MCContext, TensorAlgebra or row reduction: elements of
B (x) R are dicts {(i, j): coef}, products are expanded term by term
with the Koszul sign, and every count comes from exhaustive enumeration.
"""
from itertools import product
from math import log


class Naive:
    """B (x) R with dict elements over F_p."""

    def __init__(self, B, R):
        self.B, self.R = B, R
        self.p = B.field.p
        assert self.p, "oracles enumerate, so the field must be finite"
        # adapted basis: m is spanned by every basis element but the unit
        self.m = list(range(1, R.dim))

    def deg(self, key):
        i, j = key
        return self.B.deg(i) + self.R.deg(j)

    def basis(self, deg, ideal=True):
        js = self.m if ideal else range(self.R.dim)
        return [(i, j) for i in range(self.B.dim) for j in js
                if self.B.deg(i) + self.R.deg(j) == deg]

    def clean(self, x):
        return {k: v % self.p for k, v in x.items() if v % self.p}

    def add(self, *xs):
        out = {}
        for x in xs:
            for k, v in x.items():
                out[k] = out.get(k, 0) + v
        return self.clean(out)

    def scale(self, c, x):
        return self.clean({k: c * v for k, v in x.items()})

    def mul(self, x, y):
        B, R = self.B, self.R
        out = {}
        for (i1, j1), a in x.items():
            for (i2, j2), b in y.items():
                bt = B.mult.get((i1, i2), {})
                rt = R.mult.get((j1, j2), {})
                if not bt or not rt:
                    continue
                s = -1 if (R.deg(j1) * B.deg(i2)) % 2 else 1
                for i3, u in bt.items():
                    for j3, v in rt.items():
                        out[(i3, j3)] = out.get((i3, j3), 0) + s * a * b * u * v
        return self.clean(out)

    def d(self, x):
        B, R = self.B, self.R
        out = {}
        for (i, j), a in x.items():
            for i2, u in B.diff.get(i, {}).items():
                out[(i2, j)] = out.get((i2, j), 0) + a * u
            s = -1 if B.deg(i) % 2 else 1
            for j2, v in R.diff.get(j, {}).items():
                out[(i, j2)] = out.get((i, j2), 0) + s * a * v
        return self.clean(out)

    def one(self):
        return {(k, 0): v for k, v in enumerate(self.B.unit) if v}

    def elements(self, deg, ideal=True):
        keys = self.basis(deg, ideal)
        for coeffs in product(range(self.p), repeat=len(keys)):
            yield self.clean(dict(zip(keys, coeffs)))

    # -- Maurer-Cartan
    def is_mc(self, a):
        return not self.add(self.d(a), self.mul(a, a))

    def mc(self):
        return [a for a in self.elements(1) if self.is_mc(a)]

    def inverse(self, g):
        """(1 + u)^-1 by the geometric series."""
        one = self.one()
        u = self.add(g, self.scale(-1, one))
        out, term = dict(one), dict(one)
        for _ in range(self.R.dim + 1):
            term = self.mul(term, self.scale(-1, u))
            if not term:
                break
            out = self.add(out, term)
        return out

    def act(self, u, a):
        g = self.add(self.one(), u)
        gi = self.inverse(g)
        return self.add(self.mul(self.mul(g, a), gi), self.mul(g, self.d(gi)))

    def gauge_maps(self, a, b):
        """All u with (1 + u) . a = b."""
        return [u for u in self.elements(0) if self.act(u, a) == b]

    def homotopies(self, a, b):
        """The set {dh + bh + ha : h in (B (x) m)^-1}."""
        out = set()
        for h in self.elements(-1):
            v = self.add(self.d(h), self.mul(b, h), self.mul(h, a))
            out.add(frozenset(v.items()))
        return out

    def hom_classes(self, a, b):
        maps = self.gauge_maps(a, b)
        V = self.homotopies(a, b)
        assert len(maps) % len(V) == 0
        return len(maps) // len(V)

    def orbits(self, objects):
        keys = [frozenset(o.items()) for o in objects]
        seen, out = set(), []
        group = list(self.elements(0))
        for o, k in zip(objects, keys):
            if k in seen:
                continue
            orb = {frozenset(self.act(u, o).items()) for u in group}
            seen |= orb
            out.append(orb)
        return out


def label(B, R, x):
    """Canonical {label: coef} view matching MCContext.describe."""
    return {f"{B.space.labels[i]}⊗{R.space.labels[j]}": v for (i, j), v in sorted(x.items())}


def mc_summary(B, R):
    N = Naive(B, R)
    objs = N.mc()
    orbs = N.orbits(objs)
    reps = [dict(next(iter(sorted(o, key=sorted)))) for o in orbs]
    auts = [N.hom_classes(r, r) for r in reps]
    return {"objects": len(objs), "orbits": len(orbs), "orbit_sizes": sorted(len(o) for o in orbs),
            "aut": sorted(auts), "mc": sorted(tuple(sorted(label(B, R, a).items())) for a in objs)}


def cohomology_dim(M, n):
    """dim H^n by counting cycles and boundaries over F_p."""
    p = M.field.p
    sp = M.space
    src, mid = sp.indices(n - 1), sp.indices(n)

    def vec(idx, coeffs):
        v = sp.zero()
        for i, c in zip(idx, coeffs):
            v[i] = c
        return v

    cycles = 0
    for c in product(range(p), repeat=len(mid)):
        if not any(M.d(vec(mid, c))):
            cycles += 1
    bounds = {tuple(M.d(vec(src, c))) for c in product(range(p), repeat=len(src))}
    return round(log(cycles // len(bounds), p)) if cycles // len(bounds) > 1 else 0
