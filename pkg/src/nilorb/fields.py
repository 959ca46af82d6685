"""Exact coefficient fields: the rationals and prime fields.

Every linear-algebra routine in the package is parameterized by a
``CoeffField``.  Characteristic zero uses ``fractions.Fraction``;
characteristic p uses Python ints reduced mod p.  No floating point
arithmetic is ever involved.
"""

from __future__ import annotations

from fractions import Fraction


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class CoeffField:
    """Exact field of characteristic 0 (rationals) or p (prime field).

    Elements of the characteristic-0 field are ``Fraction`` instances;
    elements of a prime field are ints in ``range(p)``.  All methods
    accept ints (and Fractions in characteristic 0) and normalize.
    """

    def __init__(self, characteristic: int = 0):
        if characteristic != 0 and not is_prime(characteristic):
            raise ValueError(f"characteristic must be 0 or prime, got {characteristic}")
        self.p = characteristic

    def __repr__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, CoeffField) and self.p == other.p

    def __hash__(self):
        return hash(("CoeffField", self.p))

    def of(self, x):
        """Coerce an int or Fraction into the field."""
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return x % self.p

    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def add(self, a, b):
        return (a + b) if self.p == 0 else (a + b) % self.p

    def sub(self, a, b):
        return (a - b) if self.p == 0 else (a - b) % self.p

    def mul(self, a, b):
        return (a * b) if self.p == 0 else (a * b) % self.p

    def neg(self, a):
        return -a if self.p == 0 else (-a) % self.p

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if self.p == 0 else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return self.sub(a, b) == 0

    def elements(self):
        """Iterate all field elements (finite fields only)."""
        if self.p == 0:
            raise ValueError("cannot enumerate the rationals")
        return range(self.p)


QQ = CoeffField(0)
