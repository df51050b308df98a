"""Polynomials over a prime field F_q, q odd.

A polynomial is stored as a tuple of coefficients in [0, q), lowest degree
first, with no trailing zeros; the zero polynomial is the empty tuple.  The
module-level functions operating on raw tuples are the hot path used by the
enumeration kernels; :class:`Polynomial` wraps them for everything else.

Monic polynomials of degree n are indexed by their rank r in [0, q^n): the
base-q digits of r, least significant first, are the coefficients of
T^0 .. T^(n-1).
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from functools import lru_cache

from .errors import DEFAULT_BUDGET, DomainError, check_budget

_DIGITS = string.digits + string.ascii_lowercase


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=None)
def check_modulus(q):
    """Validate that q is an odd prime and return it."""
    if not isinstance(q, int) or isinstance(q, bool):
        raise DomainError(f"field size must be an integer, got {q!r}")
    if q < 3 or not _is_prime(q):
        raise DomainError(f"field size must be an odd prime, got {q}")
    return q


@dataclass(frozen=True)
class PrimeField:
    """The field F_q for an odd prime q."""

    q: int

    def __post_init__(self):
        check_modulus(self.q)

    def inv(self, a):
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return pow(a, self.q - 2, self.q)

    def legendre(self, a):
        """Quadratic character of F_q: 0, 1 or -1."""
        a %= self.q
        if a == 0:
            return 0
        return 1 if pow(a, (self.q - 1) // 2, self.q) == 1 else -1


# -- raw tuple arithmetic -------------------------------------------------

def trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def padd(a, b, q):
    if len(a) < len(b):
        a, b = b, a
    r = list(a)
    for i, y in enumerate(b):
        r[i] = (r[i] + y) % q
    return trim(r)


def psub(a, b, q):
    n = max(len(a), len(b))
    r = [0] * n
    for i, x in enumerate(a):
        r[i] = x
    for i, y in enumerate(b):
        r[i] = (r[i] - y) % q
    return trim(r)


def pscale(a, s, q):
    s %= q
    if s == 0:
        return ()
    return tuple(x * s % q for x in a)


def pmul(a, b, q):
    if not a or not b:
        return ()
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] += x * y
    # q prime, so the product of leading coefficients is nonzero
    return tuple(v % q for v in r)


def pdivmod(a, b, q):
    if not b:
        raise DomainError("division by the zero polynomial")
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), a
    r = list(a)
    inv = pow(b[-1], q - 2, q)
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i] * inv % q
        if c:
            quot[i - db] = c
            off = i - db
            for j in range(db + 1):
                r[off + j] = (r[off + j] - c * b[j]) % q
    return tuple(quot), trim(r[:db])


def pmod(a, b, q):
    db = len(b) - 1
    if len(a) - 1 < db:
        return a
    if db == 0:
        if not b:
            raise DomainError("division by the zero polynomial")
        return ()
    r = list(a)
    lead = b[-1]
    if lead == 1:
        for i in range(len(a) - 1, db - 1, -1):
            c = r[i]
            if c:
                off = i - db
                for j in range(db):
                    r[off + j] = (r[off + j] - c * b[j]) % q
    else:
        inv = pow(lead, q - 2, q)
        for i in range(len(a) - 1, db - 1, -1):
            c = r[i] * inv % q
            if c:
                off = i - db
                for j in range(db):
                    r[off + j] = (r[off + j] - c * b[j]) % q
    del r[db:]
    while r and r[-1] == 0:
        r.pop()
    return tuple(r)


def pmonic(a, q):
    if not a or a[-1] == 1:
        return a
    inv = pow(a[-1], q - 2, q)
    return tuple(x * inv % q for x in a)


def pgcd(a, b, q):
    while b:
        a, b = b, pmod(a, b, q)
    return pmonic(a, q)


def pderiv(a, q):
    return trim(i * a[i] % q for i in range(1, len(a)))


def ppowmod(a, e, m, q):
    result = (1,)
    base = pmod(a, m, q)
    while e:
        if e & 1:
            result = pmod(pmul(result, base, q), m, q)
        e >>= 1
        if e:
            base = pmod(pmul(base, base, q), m, q)
    return result


def monic_tuple(q, n, rank):
    digits = []
    for _ in range(n):
        rank, d = divmod(rank, q)
        digits.append(d)
    digits.append(1)
    return tuple(digits)


def rank_of_monic(c, q):
    r = 0
    for x in reversed(c[:-1]):
        r = r * q + x
    return r


# -- the public value type -----------------------------------------------

class Polynomial:
    """Immutable polynomial over F_q in canonical form."""

    __slots__ = ("q", "coeffs")

    def __init__(self, q, coeffs=()):
        check_modulus(q)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "coeffs", trim(int(c) % q for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def _raw(cls, q, coeffs):
        p = object.__new__(cls)
        object.__setattr__(p, "q", q)
        object.__setattr__(p, "coeffs", coeffs)
        return p

    @classmethod
    def one(cls, q):
        return cls._raw(check_modulus(q), (1,))

    @classmethod
    def T(cls, q):
        return cls._raw(check_modulus(q), (0, 1))

    @classmethod
    def constant(cls, q, c):
        return cls(q, (c,))

    @classmethod
    def monic_from_rank(cls, q, n, rank):
        """The monic polynomial of degree n with MonicIndex `rank`."""
        check_modulus(q)
        if n < 0 or not 0 <= rank < q**n:
            raise DomainError(f"rank {rank} out of range for degree {n} over F_{q}")
        return cls._raw(q, monic_tuple(q, n, rank))

    @classmethod
    def parse(cls, text):
        """Parse the `q<q>:<digits>` text form (highest degree first)."""
        try:
            head, body = text.strip().split(":", 1)
            if not head.startswith("q"):
                raise ValueError
            q = int(head[1:])
        except ValueError:
            raise DomainError(f"malformed polynomial text {text!r}") from None
        check_modulus(q)
        if q > len(_DIGITS):
            parts = body.split(".")
            digits = [int(p) for p in parts]
        else:
            try:
                digits = [int(ch, 36) for ch in body]
            except ValueError:
                raise DomainError(f"malformed polynomial text {text!r}") from None
        if not digits or any(d >= q or d < 0 for d in digits):
            raise DomainError(f"digit out of range in {text!r}")
        if len(digits) > 1 and digits[0] == 0:
            raise DomainError(f"leading zero digit in {text!r}")
        return cls(q, reversed(digits))

    def to_text(self):
        q = self.q
        if not self.coeffs:
            return f"q{q}:0"
        if q > len(_DIGITS):
            return f"q{q}:" + ".".join(str(c) for c in reversed(self.coeffs))
        return f"q{q}:" + "".join(_DIGITS[c] for c in reversed(self.coeffs))

    # -- basic properties

    @property
    def degree(self):
        """Degree, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_constant(self):
        return len(self.coeffs) <= 1

    @property
    def norm(self):
        """|f| = q^deg f, and |0| = 0."""
        return self.q ** (len(self.coeffs) - 1) if self.coeffs else 0

    @property
    def rank(self):
        if not self.is_monic():
            raise DomainError("rank is defined for monic polynomials only")
        return rank_of_monic(self.coeffs, self.q)

    def monic(self):
        if not self.coeffs:
            raise DomainError("the zero polynomial has no monic associate")
        return Polynomial._raw(self.q, pmonic(self.coeffs, self.q))

    def derivative(self):
        return Polynomial._raw(self.q, pderiv(self.coeffs, self.q))

    def __call__(self, x):
        r = 0
        for c in reversed(self.coeffs):
            r = (r * x + c) % self.q
        return r

    # -- arithmetic

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.q != self.q:
                raise DomainError(f"mixed fields F_{self.q} and F_{other.q}")
            return other.coeffs
        if isinstance(other, int):
            return trim((other % self.q,))
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Polynomial._raw(self.q, padd(self.coeffs, b, self.q))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Polynomial._raw(self.q, psub(self.coeffs, b, self.q))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Polynomial._raw(self.q, psub(b, self.coeffs, self.q))

    def __neg__(self):
        return Polynomial._raw(self.q, psub((), self.coeffs, self.q))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return Polynomial._raw(self.q, pmul(self.coeffs, b, self.q))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise DomainError("negative polynomial power")
        result, base = (1,), self.coeffs
        while e:
            if e & 1:
                result = pmul(result, base, self.q)
            e >>= 1
            if e:
                base = pmul(base, base, self.q)
        return Polynomial._raw(self.q, result)

    def __divmod__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        quot, rem = pdivmod(self.coeffs, b, self.q)
        return Polynomial._raw(self.q, quot), Polynomial._raw(self.q, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        if not b:
            raise DomainError("division by the zero polynomial")
        return Polynomial._raw(self.q, pmod(self.coeffs, b, self.q))

    def gcd(self, other):
        """Monic gcd; gcd(0, 0) is 0."""
        b = self._coerce(other)
        return Polynomial._raw(self.q, pgcd(self.coeffs, b, self.q))

    def divides(self, other):
        return (other % self).is_zero()

    def powmod(self, e, m):
        return Polynomial._raw(self.q, ppowmod(self.coeffs, e, m.coeffs, self.q))

    # -- comparison and display

    def sort_key(self):
        """(degree, rank-like) canonical order key."""
        return (len(self.coeffs), tuple(reversed(self.coeffs)))

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.q == other.q and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == trim((other % self.q,))
        return NotImplemented

    def __hash__(self):
        return hash((self.q, self.coeffs))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"Polynomial.parse({self.to_text()!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)

    def __reduce__(self):
        return (Polynomial._raw, (self.q, self.coeffs))


def enumerate_monic(q, n, start=0, stop=None, budget=DEFAULT_BUDGET):
    """Yield the monic polynomials of degree n in rank order.

    `start`/`stop` select a contiguous rank range, so workers can split a
    degree among themselves.
    """
    check_modulus(q)
    if n < 0:
        raise DomainError("degree must be non-negative")
    total = q**n
    stop = total if stop is None else min(stop, total)
    check_budget(stop - start, budget, f"enumerate_monic(q={q}, n={n})")
    for r in range(start, stop):
        yield Polynomial._raw(q, monic_tuple(q, n, r))


def is_squarefree_tuple(c, q):
    if len(c) <= 2:
        return True
    d = pderiv(c, q)
    if not d:
        return False
    return len(pgcd(c, d, q)) == 1


def is_squarefree(f):
    """True iff gcd(f, f') is a constant."""
    if f.is_zero():
        raise DomainError("square-freeness of the zero polynomial is undefined")
    if not f.is_monic():
        raise DomainError("is_squarefree expects a monic polynomial")
    return is_squarefree_tuple(f.coeffs, f.q)
