"""Irreducibles, factorization and multiplicative functions on F_q[T].

The irreducible sieve strikes out every product P*h of a smaller irreducible P
with a monic cofactor h, degree by degree.  Each composite remembers the
irreducible that struck it and the rank of its cofactor, so the same table
also factors every monic polynomial up to the sieve degree in bulk.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .errors import DEFAULT_BUDGET, DomainError, check_budget
from .poly import Polynomial, check_modulus, monic_tuple, pdivmod, pmonic


def monic_digit_matrix(q, n):
    """Row r holds the coefficients of the rank-r monic polynomial of degree n,
    lowest first, including the leading 1."""
    ranks = np.arange(q**n, dtype=np.int64)
    out = np.empty((q**n, n + 1), dtype=np.int64)
    for j in range(n):
        out[:, j] = (ranks // q**j) % q
    out[:, n] = 1
    return out


class FactorTable:
    """Sieve of monic irreducibles of degree <= n_max plus bulk factorizations.

    ``strike[n][r]`` is the index (into ``primes``) of the irreducible that
    struck the rank-r monic polynomial of degree n, or -1 when it is itself
    irreducible; ``cofactor[n][r]`` is the rank of the quotient.
    """

    def __init__(self, q, n_max, budget=DEFAULT_BUDGET):
        check_modulus(q)
        if n_max < 0:
            raise DomainError("sieve degree must be non-negative")
        check_budget(sum(q**n for n in range(n_max + 1)), budget,
                     f"irreducible sieve (q={q}, d_max={n_max})")
        self.q = q
        self.n_max = n_max
        self.primes = []        # Polynomials, sorted by (degree, rank)
        self.prime_degree = []
        self.prime_rank = []
        self.strike = [np.full(1, -1, dtype=np.int64)]
        self.cofactor = [np.zeros(1, dtype=np.int64)]
        self._digits = {0: monic_digit_matrix(q, 0)}
        for n in range(1, n_max + 1):
            self._sieve_degree(n)
        self._factor_lists = None

    def _digit_rows(self, e):
        if e not in self._digits:
            self._digits[e] = monic_digit_matrix(self.q, e)
        return self._digits[e]

    def _sieve_degree(self, n):
        q = self.q
        size = q**n
        strike = np.full(size, -1, dtype=np.int64)
        cof = np.zeros(size, dtype=np.int64)
        powers = q ** np.arange(n, dtype=np.int64)
        for idx, d in enumerate(self.prime_degree):
            if 2 * d > n:
                break
            e = n - d
            h = self._digit_rows(e)
            p = self.primes[idx].coeffs
            prod = np.zeros((h.shape[0], n + 1), dtype=np.int64)
            for i, c in enumerate(p):
                if c:
                    prod[:, i:i + e + 1] += c * h
            ranks = (prod[:, :n] % q) @ powers
            fresh = strike[ranks] == -1
            strike[ranks[fresh]] = idx
            cof[ranks[fresh]] = np.nonzero(fresh)[0]
        for r in np.nonzero(strike == -1)[0]:
            self.primes.append(Polynomial._raw(q, monic_tuple(q, n, int(r))))
            self.prime_degree.append(n)
            self.prime_rank.append(int(r))
        self.strike.append(strike)
        self.cofactor.append(cof)

    def irreducibles(self, degree=None):
        if degree is None:
            return list(self.primes)
        return [p for p, d in zip(self.primes, self.prime_degree) if d == degree]

    def prime_index(self, n, r):
        """Index of the rank-r degree-n monic irreducible."""
        if self.strike[n][r] != -1:
            raise DomainError("not irreducible")
        lo = self._first_index_of_degree(n)
        # primes of one degree are appended in rank order
        pos = np.searchsorted(np.asarray(self.prime_rank[lo:lo + self.count(n)]), r)
        return lo + int(pos)

    @lru_cache(maxsize=None)
    def _first_index_of_degree(self, n):
        for i, d in enumerate(self.prime_degree):
            if d >= n:
                return i
        return len(self.prime_degree)

    def count(self, n):
        return int(np.count_nonzero(self.strike[n] == -1)) if n >= 1 else 0

    def factor_lists(self):
        """For each degree n, a list over ranks of sorted prime-index tuples
        (with multiplicity)."""
        if self._factor_lists is None:
            lists = [[()]]
            for n in range(1, self.n_max + 1):
                strike = self.strike[n].tolist()
                cof = self.cofactor[n].tolist()
                row = []
                base = self._first_index_of_degree(n)
                k = base
                for r in range(len(strike)):
                    s = strike[r]
                    if s == -1:
                        row.append((k,))
                        k += 1
                    else:
                        e = n - self.prime_degree[s]
                        row.append(tuple(sorted((s,) + lists[e][cof[r]])))
                lists.append(row)
            self._factor_lists = lists
        return self._factor_lists

    def factor_ranked(self, n, r):
        """Factorization of the rank-r monic of degree n as ((index, mult), ...)."""
        out = {}
        for i in self.factor_lists()[n][r]:
            out[i] = out.get(i, 0) + 1
        return tuple(sorted(out.items()))

    def index_matrix(self, n):
        """(q^n, n) prime-index matrix padded with the sentinel len(primes)."""
        rows = self.factor_lists()[n]
        pad = len(self.primes)
        mat = np.full((len(rows), max(n, 1)), pad, dtype=np.int64)
        for r, t in enumerate(rows):
            mat[r, :len(t)] = t
        return mat


@lru_cache(maxsize=32)
def factor_table(q, n_max, budget=DEFAULT_BUDGET):
    """Shared read-only FactorTable; built once per (q, n_max)."""
    return FactorTable(q, n_max, budget)


def irreducible_sieve(q, d_max, budget=DEFAULT_BUDGET):
    """Monic irreducibles of degree <= d_max, sorted by (degree, rank)."""
    if d_max < 1:
        raise DomainError("d_max must be at least 1")
    return factor_table(q, d_max, budget).irreducibles()


def _int_mobius(n):
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def count_irreducibles(q, n):
    """Number of monic irreducibles of degree n: (1/n) sum_{d|n} mu(d) q^(n/d)."""
    check_modulus(q)
    if n < 1:
        raise DomainError("degree must be at least 1")
    total = sum(_int_mobius(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0)
    assert total % n == 0
    return total // n


@dataclass(frozen=True)
class Factorization:
    """f = unit * prod P**e, irreducible monic P sorted by (degree, rank)."""

    factors: tuple
    unit: int
    q: int

    def reconstruct(self):
        f = Polynomial.constant(self.q, self.unit)
        for p, e in self.factors:
            f = f * p**e
        return f

    @property
    def primes(self):
        return [p for p, _ in self.factors]

    def is_squarefree(self):
        return all(e == 1 for _, e in self.factors)


def factorize(f, budget=DEFAULT_BUDGET):
    """Factor f by trial division against the irreducible sieve."""
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    q = f.q
    unit = f.lc
    rest = pmonic(f.coeffs, q)
    factors = []
    n = len(rest) - 1
    if n >= 2:
        table = factor_table(q, max(1, n // 2), budget)
        for p in table.primes:
            d = len(p.coeffs) - 1
            if 2 * d > len(rest) - 1:
                break
            e = 0
            while True:
                quot, rem = pdivmod(rest, p.coeffs, q)
                if rem:
                    break
                rest, e = quot, e + 1
            if e:
                factors.append((p, e))
    if len(rest) > 1:
        factors.append((Polynomial._raw(q, rest), 1))
        factors.sort(key=lambda pe: pe[0].sort_key())
    return Factorization(tuple(factors), unit, q)


def mobius(f):
    if not f.is_monic():
        raise DomainError("mobius expects a monic polynomial")
    fac = factorize(f)
    if not fac.is_squarefree():
        return 0
    return -1 if len(fac.factors) % 2 else 1


def divisor_count_k(f, k):
    """d_k(f): ordered factorizations of monic f into k monic factors."""
    if not f.is_monic():
        raise DomainError("divisor_count_k expects a monic polynomial")
    if k < 1:
        raise DomainError("k must be at least 1")
    result = 1
    for _, e in factorize(f).factors:
        result *= comb(e + k - 1, k - 1)
    return result


def norm_weight(f):
    """a_f = prod_{P | f} |P| / (|P| + 1), exact."""
    if not f.is_monic():
        raise DomainError("norm_weight expects a monic polynomial")
    w = Fraction(1)
    for p, _ in factorize(f).factors:
        w *= Fraction(p.norm, p.norm + 1)
    return w
