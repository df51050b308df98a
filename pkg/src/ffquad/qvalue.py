"""Exact numbers a + b * q^(-1/2) with rational a, b."""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath


class QuadraticValue:
    """Element of Q + Q*q^(-1/2).  Products use (q^(-1/2))^2 = 1/q.

    Ordering is exact: the sign of a + b/sqrt(q) is decided from the signs
    of a and b, squaring once when they disagree.
    """

    __slots__ = ("a", "b", "q")

    def __init__(self, a=0, b=0, q=3):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.q = q

    @classmethod
    def zero(cls, q):
        return cls(0, 0, q)

    @classmethod
    def one(cls, q):
        return cls(1, 0, q)

    @classmethod
    def inv_sqrt_q_power(cls, n, q):
        """q^(-n/2) for n >= 0."""
        if n % 2 == 0:
            return cls(Fraction(1, q ** (n // 2)), 0, q)
        return cls(0, Fraction(1, q ** ((n - 1) // 2)), q)

    def _check(self, other):
        if isinstance(other, QuadraticValue):
            if other.q != self.q:
                raise ValueError("mixed quadratic rings")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticValue(other, 0, self.q)
        return NotImplemented

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return QuadraticValue(self.a + o.a, self.b + o.b, self.q)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return QuadraticValue(self.a - o.a, self.b - o.b, self.q)

    def __rsub__(self, other):
        return -self + other

    def __neg__(self):
        return QuadraticValue(-self.a, -self.b, self.q)

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        a = self.a * o.a + self.b * o.b / self.q
        b = self.a * o.b + self.b * o.a
        return QuadraticValue(a, b, self.q)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = QuadraticValue.one(self.q)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conjugate(self):
        return QuadraticValue(self.a, -self.b, self.q)

    def __truediv__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        # multiply through by the conjugate; the norm a^2 - b^2/q is rational
        n = o.a * o.a - o.b * o.b / self.q
        if n == 0:
            raise ZeroDivisionError("division by zero in the quadratic ring")
        t = self * o.conjugate()
        return QuadraticValue(t.a / n, t.b / n, self.q)

    def sign(self):
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 / q
        d = a * a * self.q - b * b
        return sa if d > 0 else (sb if d < 0 else 0)

    def __eq__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.q))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def to_mpf(self, dps=50):
        with mpmath.workdps(dps):
            return mpmath.mpf(self.a.numerator) / self.a.denominator + (
                mpmath.mpf(self.b.numerator) / self.b.denominator / mpmath.sqrt(self.q)
            )

    def __float__(self):
        if self.b == 0:
            return float(self.a)
        return float(self.to_mpf())

    def bounds(self):
        """Floats (lo, hi) with lo <= value <= hi."""
        with mpmath.workdps(60):
            v = self.to_mpf(60)
            lo, hi = float(v), float(v)
        return math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf)

    def __repr__(self):
        return f"QuadraticValue({self.a}, {self.b}, q={self.q})"

    def __reduce__(self):
        return (QuadraticValue, (self.a, self.b, self.q))
