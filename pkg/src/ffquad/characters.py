"""Quadratic residue symbols over F_q[T] and the characters chi_D.

Two independent routes to the Jacobi symbol (f / n) are provided:
factoring n and exponentiating modulo each prime, and a Euclidean descent
driven by quadratic reciprocity for F_q[T].  The tests hold them equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .arith import Factorization, factorize
from .errors import DEFAULT_BUDGET, DomainError, check_budget
from .family import family_ranks
from .poly import (
    Polynomial,
    is_squarefree_tuple,
    monic_tuple,
    pgcd,
    pmod,
    ppowmod,
)


@lru_cache(maxsize=65536)
def _symbol_reduced(f, p, q):
    if not f:
        return 0
    e = (q ** (len(p) - 1) - 1) // 2
    r = ppowmod(f, e, p, q)
    if r == (1,):
        return 1
    if r == (q - 1,):
        return -1
    raise DomainError("modulus is not irreducible")


def symbol_mod_prime(f, P):
    """(f / P) for monic irreducible P, computed as f^((|P|-1)/2) mod P."""
    if not P.is_monic() or P.degree < 1:
        raise DomainError("symbol_mod_prime needs a monic modulus of positive degree")
    if len(factorize(P).factors) != 1 or factorize(P).factors[0][1] != 1:
        raise DomainError(f"{P.to_text()} is reducible")
    return _symbol_reduced(pmod(f.coeffs, P.coeffs, f.q), P.coeffs, f.q)


def jacobi_factored(f, n):
    """(f / n) as the product of prime symbols over the factorization of n."""
    if not n.is_monic():
        raise DomainError("jacobi modulus must be monic")
    q = f.q
    result = 1
    for p, e in factorize(n).factors:
        s = _symbol_reduced(pmod(f.coeffs, p.coeffs, q), p.coeffs, q)
        if s == 0:
            return 0
        if s == -1 and e % 2:
            result = -result
    return result


def jacobi_tuple(a, b, q):
    """Euclidean Jacobi symbol on raw coefficient tuples; b must be monic.

    Constants: (alpha / P) = legendre(alpha)^deg P.  Monic coprime a, b:
    (a / b) = (b / a) * (-1)^(((q-1)/2) deg a deg b).
    """
    half = (q - 1) // 2
    odd_half = half & 1
    sign = 1
    while True:
        db = len(b) - 1
        if db == 0:
            return sign
        a = pmod(a, b, q)
        if not a:
            return 0
        lead = a[-1]
        if lead != 1:
            if db & 1 and pow(lead, half, q) != 1:
                sign = -sign
            inv = pow(lead, q - 2, q)
            a = tuple(x * inv % q for x in a)
        if odd_half and (len(a) - 1) & db & 1:
            sign = -sign
        a, b = b, a


def jacobi_symbol(f, n, method="euclid"):
    """Jacobi symbol (f / n) for monic n.

    `method` is "euclid" (reciprocity descent) or "factor" (factor n and
    exponentiate).
    """
    if not isinstance(n, Polynomial) or not n.is_monic():
        raise DomainError("jacobi modulus must be a monic polynomial")
    if f.q != n.q:
        raise DomainError("mixed fields")
    if method == "factor":
        return jacobi_factored(f, n)
    if method != "euclid":
        raise DomainError(f"unknown jacobi method {method!r}")
    return jacobi_tuple(f.coeffs, n.coeffs, f.q)


@dataclass(frozen=True)
class QuadraticCharacter:
    """chi_D(f) = (D / f) for monic square-free D of odd degree."""

    D: Polynomial
    factorization: Factorization = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        D = self.D
        if not D.is_monic():
            raise DomainError("D must be monic")
        if D.degree % 2 == 0:
            raise DomainError("D must have odd degree")
        if not is_squarefree_tuple(D.coeffs, D.q):
            raise DomainError(f"D = {D.to_text()} is not square-free")
        object.__setattr__(self, "factorization", factorize(D))

    @classmethod
    def trusted(cls, D):
        """Build without re-validating; for enumeration kernels that have
        already checked membership.  The factorization is computed lazily."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "D", D)
        return obj

    def __getattr__(self, name):
        if name == "factorization":
            fac = factorize(self.D)
            object.__setattr__(self, "factorization", fac)
            return fac
        raise AttributeError(name)

    @property
    def q(self):
        return self.D.q

    @property
    def genus(self):
        return (self.D.degree - 1) // 2

    def __call__(self, f):
        return chi_D(self, f)

    def at_tuple(self, c):
        return jacobi_tuple(self.D.coeffs, c, self.D.q)


def chi_D(chr, f):
    """chi_D(f) = jacobi_symbol(D, f) for monic f."""
    if not f.is_monic():
        raise DomainError("chi_D is evaluated at monic polynomials")
    return jacobi_tuple(chr.D.coeffs, f.coeffs, f.q)


@dataclass(frozen=True)
class CharSumRecord:
    """Exact character sum with its bound ratio."""

    q: int
    modulus: str
    x_or_n: str
    exact_sum: int
    ratio: float

    def row(self):
        return {
            "q": self.q,
            "D": self.modulus,
            "x_or_n": self.x_or_n,
            "exact_sum": str(self.exact_sum),
            "ratio": f"{self.ratio:.17g}",
        }


def char_sum_fixed_degree(chr, x, budget=DEFAULT_BUDGET):
    """Exact sum of chi_D(f) over monic f of degree x, plus |sum| / |D|^(1/2)."""
    q = chr.q
    if x < 0:
        raise DomainError("x must be non-negative")
    check_budget(q**x, budget, f"char_sum_fixed_degree(x={x})")
    D = chr.D.coeffs
    total = 0
    for r in range(q**x):
        total += jacobi_tuple(D, monic_tuple(q, x, r), q)
    ratio = abs(total) / math.sqrt(chr.D.norm)
    return CharSumRecord(q, chr.D.to_text(), str(x), total, ratio)


def is_perfect_square(n):
    """True for monic n whose factorization has only even exponents."""
    return all(e % 2 == 0 for _, e in factorize(n).factors)


@dataclass(frozen=True)
class OrthogonalityRecord:
    q: int
    g: int
    n: str
    is_square: bool
    exact_sum: int
    coprime_count: int | None
    ratio: float

    def row(self):
        return {
            "q": self.q,
            "g": self.g,
            "n": self.n,
            "square": int(self.is_square),
            "exact_sum": str(self.exact_sum),
            "ratio": f"{self.ratio:.17g}",
        }


def orthogonality_sum(n, fam, budget=DEFAULT_BUDGET):
    """Exact sum over D in H_{2g+1,q} of (D / n).

    For a perfect square n the sum is compared against the number of family
    members coprime to n; otherwise the record carries
    |sum| / (|D|^(1/2) |n|^(1/4)).
    """
    if not n.is_monic():
        raise DomainError("orthogonality modulus must be monic")
    q, deg = fam.q, fam.degree
    if n.q != q:
        raise DomainError("mixed fields")
    nc = n.coeffs
    total = 0
    coprime = 0
    square = is_perfect_square(n)
    for r in family_ranks(fam, budget=budget):
        D = monic_tuple(q, deg, r)
        total += jacobi_tuple(D, nc, q)
        if square and len(pgcd(D, nc, q)) == 1:
            coprime += 1
    if square:
        return OrthogonalityRecord(q, fam.g, n.to_text(), True, total, coprime, 0.0)
    ratio = abs(total) / (math.sqrt(q ** deg) * n.norm ** 0.25)
    return OrthogonalityRecord(q, fam.g, n.to_text(), False, total, None, ratio)


__all__ = [
    "CharSumRecord",
    "OrthogonalityRecord",
    "QuadraticCharacter",
    "char_sum_fixed_degree",
    "chi_D",
    "is_perfect_square",
    "jacobi_factored",
    "jacobi_symbol",
    "jacobi_tuple",
    "orthogonality_sum",
    "symbol_mod_prime",
]
