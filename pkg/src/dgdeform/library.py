"""Small named algebras and modules used by the corpus, the CLI and the tests."""
from itertools import product

from .artinian import validate_artinian
from .dg import DGAlgebra, DGModule, TensorAlgebra, complex_module
from .graded import GradedSpace


def polynomial_window(F, hi=6, deg=1, var="x", open_hi=True):
    """k[x] with |x| = deg and d = 0, presented on degrees [0, hi*deg]."""
    if deg <= 0:
        raise ValueError("use a positive degree for the windowed polynomial algebra")
    top = hi // deg if deg else hi
    labels = ["1"] + [var if i == 1 else f"{var}^{i}" for i in range(1, top + 1)]
    sp = GradedSpace(F, [i * deg for i in range(top + 1)], labels, (0, hi), None, False, open_hi)
    mult = {(a, b): {a + b: 1} for a in range(top + 1) for b in range(top + 1) if a + b <= top}
    return DGAlgebra(sp, [1] + [0] * top, mult, {}, name=f"k[{var}]")


def truncated_polynomial(F, n, deg=0, var="e"):
    """k[e]/e^(n+1) with |e| = deg (an artinian algebra with m^(n+1) = 0)."""
    labels = ["1"] + [var if i == 1 else f"{var}^{i}" for i in range(1, n + 1)]
    sp = GradedSpace(F, [i * deg for i in range(n + 1)], labels)
    mult = {}
    for a, b in product(range(n + 1), repeat=2):
        if a + b <= n:
            s = -1 if (deg % 2 and a % 2 and b % 2) else 1
            mult[(a, b)] = {a + b: s}
    R = DGAlgebra(sp, [1] + [0] * n, mult, {}, name=f"k[{var}]/{var}^{n + 1}")
    return validate_artinian(R)


def noncommutative_square_zero(F):
    """k<a,b>/(a^2, b^2, ba), basis 1, a, b, ab; ab != ba = 0."""
    sp = GradedSpace(F, [0, 0, 0, 0], ["1", "a", "b", "ab"])
    mult = {(0, i): {i: 1} for i in range(4)}
    mult.update({(i, 0): {i: 1} for i in range(1, 4)})
    mult[(1, 2)] = {3: 1}
    R = DGAlgebra(sp, [1, 0, 0, 0], mult, {}, name="k<a,b>/(a2,b2,ba)")
    return validate_artinian(R)


def differential_artinian(F):
    """<1, u, v> with |u| = -1, |v| = 0, du = v and m^2 = 0."""
    sp = GradedSpace(F, [0, -1, 0], ["1", "u", "v"])
    mult = {(0, i): {i: 1} for i in range(3)}
    mult.update({(i, 0): {i: 1} for i in range(1, 3)})
    R = DGAlgebra(sp, [1, 0, 0], mult, {1: {2: 1}}, name="k<u,v>,du=v")
    return validate_artinian(R)


def contractible_pair(F):
    """The complex k -> k (degrees 0, 1, identity differential)."""
    return complex_module(F, [0, 1], {0: {1: 1}}, ["a", "b"], name="k->k")


def contractible_cdga(F):
    """L = <1, s, t>, |s| = 0, |t| = 1, ds = t, all products of s, t zero."""
    sp = GradedSpace(F, [0, 0, 1], ["1", "s", "t"])
    mult = {(0, i): {i: 1} for i in range(3)}
    mult.update({(i, 0): {i: 1} for i in range(1, 3)})
    return DGAlgebra(sp, [1, 0, 0], mult, {1: {2: 1}}, name="L")


def keller_base(F, hi=4):
    """k[x] (window [0, hi]) tensor L: H^0 = k and H = k[x] on the window."""
    return TensorAlgebra(polynomial_window(F, hi), contractible_cdga(F), name="k[x]⊗L")


def ground_module(F, B, label="m"):
    """k as a right B-module through the first coordinate (B augmented by it)."""
    sp = GradedSpace(F, [0], [label])
    return DGModule(sp, {}, B, {(0, 0): {0: 1}}, name="k")


def dual_numbers_zero(F, var="y"):
    """k[y]/y^2 with |y| = 0 as a plain DG algebra."""
    return truncated_polynomial(F, 1, 0, var)
