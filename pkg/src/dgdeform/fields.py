"""Ground fields: the rationals and prime fields F_p.

Elements are plain Python objects: ``Fraction`` over Q and ``int`` in
``range(p)`` over F_p.  Callers do native arithmetic and pass results
through :meth:`Field.red`, which is the identity over Q.

>>> F = Field(3)
>>> F.red(2 * 2), F.inv(2), F.name
(1, 2, 'f3')
>>> Q = Field(0)
>>> Q("3/4") * 4
Fraction(3, 1)
"""
from fractions import Fraction
from itertools import product

from .errors import SchemaError


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class Field:
    __slots__ = ("p",)

    def __init__(self, p=0):
        p = int(p)
        if p != 0 and not _is_prime(p):
            raise ValueError(f"characteristic {p} is not 0 or a prime")
        object.__setattr__(self, "p", p)

    def __setattr__(self, key, value):
        raise AttributeError("Field is immutable")

    @classmethod
    def from_name(cls, name):
        name = str(name).lower()
        if name in ("q", "qq", "rationals"):
            return cls(0)
        if name.startswith("f") and name[1:].isdigit():
            try:
                return cls(int(name[1:]))
            except ValueError as exc:
                raise SchemaError(str(exc)) from None
        raise SchemaError(f"unknown field {name!r}; expected q or f<p>")

    @property
    def name(self):
        return "q" if self.p == 0 else f"f{self.p}"

    @property
    def kind(self):
        return "rationals" if self.p == 0 else "prime-field"

    @property
    def characteristic(self):
        return self.p

    @property
    def is_finite(self):
        return self.p != 0

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def __call__(self, x):
        """Coerce an int, Fraction or 'a/b' string into the field."""
        if isinstance(x, str):
            try:
                x = Fraction(x.strip())
            except (ValueError, ZeroDivisionError):
                raise SchemaError(f"bad scalar {x!r}") from None
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise SchemaError(f"scalar {x} is undefined in {self.name}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def red(self, x):
        return x % self.p if self.p else x

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.p else 1 / a

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def elements(self):
        if not self.p:
            raise ValueError("the rationals cannot be enumerated")
        return range(self.p)

    def vectors(self, n):
        """All vectors of length n, in lexicographic order."""
        return product(self.elements(), repeat=n)

    def to_json(self, a):
        if self.p:
            return int(a)
        a = Fraction(a)
        return int(a) if a.denominator == 1 else str(a)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"Field({self.p})"


Q = Field(0)
F2 = Field(2)
F3 = Field(3)
F5 = Field(5)
