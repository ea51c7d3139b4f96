"""Exact arithmetic over the Gaussian rationals Q(i).

A value is stored as (a + b*i)/d with integer a, b and positive integer d,
kept in lowest terms: gcd(a, b, d) == 1 after every operation.  This single
shared denominator makes the common case -- Gaussian integers, d == 1 --
allocate nothing beyond the three ints and skip all gcd work in products.

There is no floating point anywhere in this package; every equality test on
these scalars is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class GaussianRational:
    """An element a/d + (b/d)*i of Q(i), normalized and immutable."""

    __slots__ = ("a", "b", "d")

    def __init__(self, real=0, imag=0):
        if isinstance(real, GaussianRational):
            if imag != 0:
                raise TypeError("imag must be 0 when copying a GaussianRational")
            object.__setattr__(self, "a", real.a)
            object.__setattr__(self, "b", real.b)
            object.__setattr__(self, "d", real.d)
            return
        ra = Fraction(real)
        ib = Fraction(imag)
        d = ra.denominator * ib.denominator // gcd(ra.denominator, ib.denominator)
        a = ra.numerator * (d // ra.denominator)
        b = ib.numerator * (d // ib.denominator)
        g = gcd(gcd(a, b), d)
        if g > 1:
            a //= g
            b //= g
            d //= g
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _raw(a: int, b: int, d: int) -> "GaussianRational":
        """Build from an already-normalized triple (no checks)."""
        v = object.__new__(GaussianRational)
        object.__setattr__(v, "a", a)
        object.__setattr__(v, "b", b)
        object.__setattr__(v, "d", d)
        return v

    @staticmethod
    def _norm(a: int, b: int, d: int) -> "GaussianRational":
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(gcd(a, b), d)
        if g > 1:
            a //= g
            b //= g
            d //= g
        return GaussianRational._raw(a, b, d)

    @property
    def real(self) -> Fraction:
        return Fraction(self.a, self.d)

    @property
    def imag(self) -> Fraction:
        return Fraction(self.b, self.d)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.d == other.d:
            if self.d == 1:
                return GaussianRational._raw(self.a + other.a, self.b + other.b, 1)
            return GaussianRational._norm(self.a + other.a, self.b + other.b, self.d)
        return GaussianRational._norm(
            self.a * other.d + other.a * self.d,
            self.b * other.d + other.b * self.d,
            self.d * other.d,
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.d == other.d:
            if self.d == 1:
                return GaussianRational._raw(self.a - other.a, self.b - other.b, 1)
            return GaussianRational._norm(self.a - other.a, self.b - other.b, self.d)
        return GaussianRational._norm(
            self.a * other.d - other.a * self.d,
            self.b * other.d - other.b * self.d,
            self.d * other.d,
        )

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, e = self.a, self.b, other.a, other.b
        if self.d == 1 and other.d == 1:
            return GaussianRational._raw(a * c - b * e, a * e + b * c, 1)
        return GaussianRational._norm(a * c - b * e, a * e + b * c, self.d * other.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero in Q(i)")
        # (a+bi)/(c+ei) = (a+bi)(c-ei) / (c^2+e^2); denominators fold in.
        c, e = other.a, other.b
        n = c * c + e * e
        return GaussianRational._norm(
            (self.a * c + self.b * e) * other.d,
            (self.b * c - self.a * e) * other.d,
            self.d * n,
        )

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return GaussianRational._raw(-self.a, -self.b, self.d)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.a, -self.b, self.d)

    def norm_squared(self) -> Fraction:
        """|z|^2 as an exact rational."""
        return Fraction(self.a * self.a + self.b * self.b, self.d * self.d)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return "GR(%s, %s)" % (self.real, self.imag)

    def __str__(self):
        if self.b == 0:
            return str(self.real)
        if self.a == 0:
            return "%s*i" % self.imag
        return "%s %s %s*i" % (self.real, "+" if self.b > 0 else "-", abs(self.imag))


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, int):
        return GaussianRational._raw(x, 0, 1)
    if isinstance(x, Fraction):
        return GaussianRational._raw(x.numerator, 0, x.denominator)
    return NotImplemented


ZERO = GaussianRational._raw(0, 0, 1)
ONE = GaussianRational._raw(1, 0, 1)
MINUS_ONE = GaussianRational._raw(-1, 0, 1)
I = GaussianRational._raw(0, 1, 1)
MINUS_I = GaussianRational._raw(0, -1, 1)


def gr(real=0, imag=0) -> GaussianRational:
    """Shorthand constructor used throughout the package and the tests."""
    return GaussianRational(real, imag)


def fraction_to_str(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return "%d/%d" % (f.numerator, f.denominator)


def fraction_from_str(s: str) -> Fraction:
    return Fraction(s)


def gr_to_pair(z: GaussianRational) -> list:
    """JSON form: [real, imag] as lowest-terms fraction strings."""
    return [fraction_to_str(z.real), fraction_to_str(z.imag)]


def gr_from_pair(pair) -> GaussianRational:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ValueError("scalar must be a [real, imag] pair of fraction strings")
    return GaussianRational(Fraction(str(pair[0])), Fraction(str(pair[1])))
