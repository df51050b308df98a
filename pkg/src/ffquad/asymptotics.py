"""The weighted divisor series Z(u) = sum_m d_k(m^2) a_m u^(deg m) and friends.

Here a_m = prod_{P | m} |P| / (|P| + 1).  Coefficients come from two
independent routes: the Euler product over irreducible degrees, and direct
summation over every monic m using its factorization.

Degree counting is the normalization used throughout: z is the degree
cutoff (log_q of the norm), not log of the norm.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import mpmath

from .arith import count_irreducibles, factor_table, factorize
from .errors import DEFAULT_BUDGET, DomainError, check_budget
from .poly import check_modulus


def pair_count(k):
    """k(k+1)/2, the pole order."""
    return k * (k + 1) // 2


@dataclass(frozen=True)
class SeriesPoly:
    """Truncated power series in u with exact rational coefficients."""

    coeffs: tuple

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def __mul__(self, other):
        N = min(self.order, other.order)
        out = [Fraction(0)] * (N + 1)
        for i, a in enumerate(self.coeffs[:N + 1]):
            if a:
                for j, b in enumerate(other.coeffs[:N + 1 - i]):
                    out[i + j] += a * b
        return SeriesPoly(tuple(out))

    def rows(self):
        return [{"n": n, "coeff": f"{c.numerator}/{c.denominator}"}
                for n, c in enumerate(self.coeffs)]


def _local_terms(k, d, N):
    """Integer coefficients of sum_{j>=1} C(2j+k-1, k-1) u^(dj), truncated at N."""
    y = [0] * (N + 1)
    for j in range(1, N // d + 1):
        y[d * j] = comb(2 * j + k - 1, k - 1)
    return y


def _int_mul(a, b, N):
    out = [0] * (N + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(min(len(b), N + 1 - i)):
                out[i + j] += x * b[j]
    return out


def zf_euler_coeffs(q, k, N):
    """Coefficients z_0..z_N of Z(u) from the Euler product.

    The degree-d local factor is 1 + (q^d/(q^d+1)) sum_{j>=1} C(2j+k-1,k-1) u^(dj),
    raised to the number of monic irreducibles of degree d.  Powers are
    expanded binomially over a common denominator so the work stays in
    integers until the final division.
    """
    check_modulus(q)
    if k < 1 or N < 0:
        raise DomainError("need k >= 1 and N >= 0")
    total = [1] + [0] * N
    denom = 1
    for d in range(1, N + 1):
        pi_d = count_irreducibles(q, d)
        m = N // d
        y = _local_terms(k, d, N)
        qd, qd1 = q**d, q**d + 1
        # (1 + w Y)^pi = sum_i C(pi, i) w^i Y^i, w = qd / qd1; scale by qd1^m
        factor = [0] * (N + 1)
        ypow = [1] + [0] * N
        for i in range(m + 1):
            scale = comb(pi_d, i) * qd**i * qd1 ** (m - i)
            for n, c in enumerate(ypow):
                if c:
                    factor[n] += scale * c
            ypow = _int_mul(ypow, y, N)
        total = _int_mul(total, factor, N)
        denom *= qd1**m
    return SeriesPoly(tuple(Fraction(c, denom) for c in total))


def _signature_weight(sig, q, k):
    """d_k(m^2) a_m for an m whose factorization has (degree, exponent) list sig."""
    w = Fraction(1)
    for d, e in sig:
        w *= comb(2 * e + k - 1, k - 1) * Fraction(q**d, q**d + 1)
    return w


def zf_direct_coeffs(q, k, N, budget=DEFAULT_BUDGET):
    """Coefficients z_n = sum over monic m of degree n of d_k(m^2) a_m, by
    factorizing every m."""
    check_modulus(q)
    if k < 1 or N < 0:
        raise DomainError("need k >= 1 and N >= 0")
    check_budget(sum(q**n for n in range(N + 1)), budget, f"zf_direct_coeffs(N={N})")
    out = [Fraction(1)]
    if N == 0:
        return SeriesPoly(tuple(out))
    table = factor_table(q, N, budget)
    lists = table.factor_lists()
    deg = table.prime_degree
    for n in range(1, N + 1):
        shapes = Counter()
        for idx in lists[n]:
            shapes[tuple(sorted((deg[i], e) for i, e in Counter(idx).items()))] += 1
        out.append(sum((mult * _signature_weight(sig, q, k) for sig, mult in shapes.items()),
                       Fraction(0)))
    return SeriesPoly(tuple(out))


def partial_weighted_sum(q, k, z, path="euler", series=None):
    """sum over monic m with deg m <= z of d_k(m^2) a_m / |m| = sum_{n<=z} z_n q^(-n)."""
    if z < 0:
        raise DomainError("z must be non-negative")
    if series is None:
        series = zf_euler_coeffs(q, k, z) if path == "euler" else zf_direct_coeffs(q, k, z)
    return sum((series[n] / q**n for n in range(z + 1)), Fraction(0))


def partial_sum_table(q, k, z_max):
    """Rows (z, exact partial sum, ratio to z^(k(k+1)/2)) for z = 0..z_max."""
    series = zf_euler_coeffs(q, k, z_max)
    K = pair_count(k)
    rows, acc = [], Fraction(0)
    for z in range(z_max + 1):
        acc += series[z] / q**z
        ratio = float(acc) / z**K if z else math.nan
        rows.append((z, acc, ratio))
    return rows


def local_factor_at_one(q, k, d):
    """Degree-d factor of the convergent product at s = 1, exact:
    (1 + (|P|/(|P|+1)) sum_{j>=1} d_k(P^(2j)) |P|^(-j)) (1 - 1/|P|)^(k(k+1)/2)."""
    x = Fraction(1, q**d)
    K = pair_count(k)
    # sum_{j>=0} C(2j+k-1, k-1) x^j = sum_{i even} C(k, i) x^(i/2) / (1 - x)^k
    even = sum(comb(k, i) * x ** (i // 2) for i in range(0, k + 1, 2)) / (1 - x) ** k
    local = 1 + Fraction(q**d, q**d + 1) * (even - 1)
    return local * (1 - x) ** K


@dataclass(frozen=True)
class LeadingConstant:
    """Truncated product of local factors and the constants built from it.

    alpha: the product over irreducible degrees <= d_max (the second
    factor of the Euler product at s = 1).
    C_k: log(q)^(k(k+1)/2) / (k(k+1)/2 - 1)! * alpha.
    C_k_degree: alpha / (k(k+1)/2 - 1)!, the constant the shell ratio
    z_x / (q^x x^(k(k+1)/2 - 1)) tends to in degree counting.
    alpha_s: alpha / log(q)^(k(k+1)/2), the residue (s-1)^(k(k+1)/2) zeta_f(s)
    at s = 1.
    increments: relative change of the product at each degree.
    """

    q: int
    k: int
    d_max: int
    local_factors: tuple
    alpha: float
    C_k: float
    C_k_degree: float
    alpha_s: float
    increments: tuple


def leading_constant(q, k, d_max, dps=50):
    check_modulus(q)
    if d_max < 1 or k < 1:
        raise DomainError("need d_max >= 1 and k >= 1")
    K = pair_count(k)
    factors = tuple(local_factor_at_one(q, k, d) for d in range(1, d_max + 1))
    incs = []
    with mpmath.workdps(dps):
        log_alpha = mpmath.mpf(0)
        for d, f in enumerate(factors, 1):
            step = count_irreducibles(q, d) * mpmath.log(mpmath.mpf(f.numerator) / f.denominator)
            log_alpha += step
            incs.append(float(abs(mpmath.expm1(step))))
        alpha = mpmath.exp(log_alpha)
        logq = mpmath.log(q)
        C_k = logq**K / factorial(K - 1) * alpha
        C_deg = alpha / factorial(K - 1)
        alpha_s = alpha / logq**K
        return LeadingConstant(q, k, d_max, factors, float(alpha), float(C_k), float(C_deg),
                               float(alpha_s), tuple(incs))


def shell_sum_diagnostic(q, k, x_max, d_max=None):
    """Rows (x, z_x exact, z_x / (q^x x^(K-1)), that ratio / C_k_degree).

    K = k(k+1)/2.  The last column tends to 1 when the degree-counting
    normalization is the right one.
    """
    series = zf_euler_coeffs(q, k, x_max)
    K = pair_count(k)
    const = leading_constant(q, k, d_max or max(x_max, 12)).C_k_degree
    rows = []
    for x in range(x_max + 1):
        z = series[x]
        ratio = float(z / (q**x * x ** (K - 1))) if x else float(z)
        rows.append((x, z, ratio, ratio / const))
    return rows


def norm_weight_from_primes(primes):
    w = Fraction(1)
    for P in primes:
        w *= Fraction(P.norm, P.norm + 1)
    return w


def restricted_harmonic_sum(r, h, L, budget=DEFAULT_BUDGET):
    """sum over monic l with deg l <= L of a_(r h l) / |l|, exact."""
    q = r.q
    if not r.is_monic() or not h.is_monic():
        raise DomainError("r and h must be monic")
    fr = factorize(r)
    if not fr.is_squarefree():
        raise DomainError("r must be square-free")
    if L < 0:
        raise DomainError("L must be non-negative")
    check_budget(sum(q**n for n in range(L + 1)), budget, f"restricted_harmonic_sum(L={L})")
    base_primes = set(fr.primes) | set(factorize(h).primes)
    base = norm_weight_from_primes(base_primes)
    total = base
    if L == 0:
        return total
    table = factor_table(q, L, budget)
    lists = table.factor_lists()
    known = {i for i, P in enumerate(table.primes) if P in base_primes}
    extra = [Fraction(P.norm, P.norm + 1) for P in table.primes]
    for n in range(1, L + 1):
        shell = Counter()
        for idx in lists[n]:
            shell[tuple(sorted(set(idx) - known))] += 1
        s = Fraction(0)
        for key, mult in shell.items():
            w = Fraction(mult)
            for i in key:
                w *= extra[i]
            s += w
        total += base * s / q**n
    return total


def harmonic_table(r, h, L_max, budget=DEFAULT_BUDGET):
    """Rows (L, exact sum, first difference as float)."""
    rows, prev = [], None
    for L in range(L_max + 1):
        v = restricted_harmonic_sum(r, h, L, budget)
        rows.append((L, v, float(v - prev) if prev is not None else math.nan))
        prev = v
    return rows


__all__ = [
    "LeadingConstant",
    "SeriesPoly",
    "harmonic_table",
    "leading_constant",
    "local_factor_at_one",
    "pair_count",
    "partial_sum_table",
    "partial_weighted_sum",
    "restricted_harmonic_sum",
    "shell_sum_diagnostic",
    "zf_direct_coeffs",
    "zf_euler_coeffs",
]
