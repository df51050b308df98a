"""Family sweeps: moments of L(1/2, chi_D), the Hoelder chain, counting.

Central values and truncated Dirichlet polynomials are carried as integer
pairs (X, Y) standing for (X + Y*sqrt(q)) / q^(g+1); every c_n q^(-n/2) with
n <= 2g is integral in that scale, so powers and family sums stay in exact
integer arithmetic and the reduction order cannot change the result.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
import multiprocessing

import numpy as np

from .arith import factor_table, factorize
from .characters import QuadraticCharacter, jacobi_tuple
from .errors import DEFAULT_BUDGET, DomainError, check_budget
from .family import FamilySpec, family_members, family_ranks, partition
from .lfunction import (
    LPolynomial,
    coefficient_kernel,
    complete_by_functional_equation,
)
from .poly import Polynomial, monic_tuple, pgcd
from .qvalue import QuadraticValue

__all__ = [
    "FamilySpec",
    "FamilySums",
    "HolderViolation",
    "MomentReport",
    "enumerate_family",
    "family_character_sum",
    "family_moment",
    "family_sums",
    "fit_growth_exponent",
    "holder_chain",
    "paper_cutoff",
    "prime_moment",
    "squarefree_coprime_count",
    "truncated_dirichlet",
]

_BATCH = 512


class HolderViolation(ArithmeticError):
    """S1^k / S2^(k-1) exceeded the k-th moment: an arithmetic bug."""


def enumerate_family(fam, start=0, stop=None, budget=DEFAULT_BUDGET):
    """Characters chi_D for D in H_{2g+1,q} with rank in [start, stop)."""
    for D in family_members(fam, start, stop, budget):
        yield QuadraticCharacter.trusted(D)


def paper_cutoff(g, k):
    """floor(2(2g) / (15k)), the default Dirichlet-polynomial length."""
    if g < 1 or k < 1:
        raise DomainError("paper_cutoff needs g, k >= 1")
    return (4 * g) // (15 * k)


def truncated_dirichlet(chr, x, budget=DEFAULT_BUDGET):
    """A(D) = sum over monic n with deg n <= x of chi_D(n) / sqrt(|n|)."""
    if x < 0:
        raise DomainError("x must be non-negative")
    q = chr.q
    check_budget(sum(q**n for n in range(x + 1)), budget, f"truncated_dirichlet(x={x})")
    D = chr.D.coeffs
    a, b = Fraction(0), Fraction(0)
    for n in range(x + 1):
        shell = sum(jacobi_tuple(D, monic_tuple(q, n, r), q) for r in range(q**n))
        if n % 2 == 0:
            a += Fraction(shell, q ** (n // 2))
        else:
            b += Fraction(shell, q ** ((n - 1) // 2))
    return QuadraticValue(a, b, q)


# -- scaled integer values -------------------------------------------------

def _scaled(coeffs, q, g, x):
    """(X, Y) with sum_{n<=x} c_n q^(-n/2) = (X + Y sqrt(q)) / q^(g+1)."""
    X = Y = 0
    for n, c in enumerate(coeffs[:x + 1]):
        if c:
            if n % 2 == 0:
                X += c * q ** (g + 1 - n // 2)
            else:
                Y += c * q ** (g - (n - 1) // 2)
    return X, Y


def _mul(u, v, q):
    return (u[0] * v[0] + q * u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _pow(u, k, q):
    r = (1, 0)
    while k:
        if k & 1:
            r = _mul(r, u, q)
        k >>= 1
        if k:
            u = _mul(u, u, q)
    return r


def _unscale(pair, q, exponent):
    """QuadraticValue of (X + Y sqrt(q)) / q^exponent."""
    X, Y = pair
    den = q**exponent
    return QuadraticValue(Fraction(X, den), Fraction(Y * q, den), q)


@dataclass
class FamilySums:
    """Exact family totals for a set of (k, x) pairs."""

    q: int
    g: int
    count: int = 0
    moments: dict = field(default_factory=dict)     # k -> (X, Y)
    s1: dict = field(default_factory=dict)          # (k, x) -> (X, Y)
    s2: dict = field(default_factory=dict)

    def merge(self, other):
        self.count += other.count
        for name in ("moments", "s1", "s2"):
            mine, theirs = getattr(self, name), getattr(other, name)
            for key, (X, Y) in theirs.items():
                a, b = mine.get(key, (0, 0))
                mine[key] = (a + X, b + Y)
        return self

    def moment(self, k):
        return _unscale(self.moments.get(k, (0, 0)), self.q, k * (self.g + 1))

    def S1(self, k, x):
        return _unscale(self.s1.get((k, x), (0, 0)), self.q, k * (self.g + 1))

    def S2(self, k, x):
        return _unscale(self.s2.get((k, x), (0, 0)), self.q, k * (self.g + 1))


def _accumulate(rows, q, g, ks, xs):
    sums = FamilySums(q, g)
    for coeffs in rows:
        sums.count += 1
        L = _scaled(coeffs, q, g, 2 * g)
        for k in ks:
            X, Y = sums.moments.get(k, (0, 0))
            p = _pow(L, k, q)
            sums.moments[k] = (X + p[0], Y + p[1])
        for x in xs:
            A = _scaled(coeffs, q, g, x)
            for k in ks:
                if k < 1:
                    continue
                Ak1 = _pow(A, k - 1, q)
                t1 = _mul(L, Ak1, q)
                t2 = _mul(A, Ak1, q)
                a, b = sums.s1.get((k, x), (0, 0))
                sums.s1[(k, x)] = (a + t1[0], b + t1[1])
                a, b = sums.s2.get((k, x), (0, 0))
                sums.s2[(k, x)] = (a + t2[0], b + t2[1])
    return sums


def coefficient_rows(Ds, q, g, method="half", budget=DEFAULT_BUDGET):
    """L-coefficient tuples for a list of discriminant tuples (all degree 2g+1)."""
    if not Ds:
        return []
    N = g if method == "half" else 2 * g
    if method not in ("half", "full"):
        raise DomainError(f"unknown L-coefficient method {method!r}")
    kernel = coefficient_kernel(q, N, budget)
    rows = []
    for i in range(0, len(Ds), _BATCH):
        block = kernel.shell_sums_batch(np.array(Ds[i:i + _BATCH], dtype=np.int64))
        for r in block.tolist():
            rows.append(complete_by_functional_equation(q, g, r) if method == "half" else tuple(r))
    return rows


def _range_worker(args):
    q, g, lo, hi, ks, xs, method, budget, keep = args
    fam = FamilySpec(q, g)
    Ds = [monic_tuple(q, fam.degree, r) for r in family_ranks(fam, lo, hi, budget)]
    rows = coefficient_rows(Ds, q, g, method, budget)
    sums = _accumulate(rows, q, g, ks, xs)
    return sums, (list(zip(Ds, rows)) if keep else None)


def _run_parallel(tasks, threads):
    if threads <= 1 or len(tasks) <= 1:
        return [_range_worker(t) for t in tasks]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=threads, mp_context=ctx) as pool:
        return list(pool.map(_range_worker, tasks))


def family_sums(fam, ks, xs=(), threads=1, method="half", cache=None, budget=DEFAULT_BUDGET):
    """Exact family sums of L^k, L*A^(k-1) and A^k.

    The rank space is split into `threads` contiguous ranges, each handled by
    one worker; partial integer sums are added in range order.  `cache` is a
    dict D -> LPolynomial: when it already covers the family the coefficients
    are read from it, otherwise it is filled in.
    """
    check_budget(fam.rank_count, budget, f"family H_(2g+1,q) with q={fam.q}, g={fam.g}")
    q, g = fam.q, fam.g
    ks, xs = tuple(ks), tuple(xs)
    if cache is not None:
        members = list(family_members(fam, budget=budget))
        if members and all(D in cache for D in members):
            return _accumulate([cache[D].coeffs for D in members], q, g, ks, xs)
    keep = cache is not None
    tasks = [(q, g, lo, hi, ks, xs, method, budget, keep)
             for lo, hi in partition(fam.rank_count, threads)]
    total = FamilySums(q, g)
    for sums, pairs in _run_parallel(tasks, threads):
        total.merge(sums)
        if keep:
            for D, coeffs in pairs:
                cache[Polynomial._raw(q, D)] = LPolynomial(q, g, coeffs)
    return total


# -- reports ---------------------------------------------------------------

def _float(v):
    return float(v) if v is not None else math.nan


@dataclass
class MomentReport:
    q: int
    g: int
    k: int
    x: int
    family_size: int
    moment: QuadraticValue
    s1: QuadraticValue | None
    s2: QuadraticValue | None
    holder_bound: float
    normalized_moment: float
    seconds: float
    holder_holds: bool | None = None
    label: str = "family"

    CSV_COLUMNS = ("q", "g", "k", "x", "family_size", "moment_exact_a", "moment_exact_b",
                   "moment_float", "s1_float", "s2_float", "holder_bound_float", "seconds")

    def row(self, timing=True):
        return {
            "q": self.q,
            "g": self.g,
            "k": self.k,
            "x": self.x,
            "family_size": self.family_size,
            "moment_exact_a": _frac(self.moment.a),
            "moment_exact_b": _frac(self.moment.b),
            "moment_float": _fmt(float(self.moment)),
            "s1_float": _fmt(_float(self.s1)),
            "s2_float": _fmt(_float(self.s2)),
            "holder_bound_float": _fmt(self.holder_bound),
            "seconds": f"{self.seconds:.3f}" if timing else "0",
        }


def _frac(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _fmt(v):
    return f"{v:.17g}"


def holder_compare(moment, s1, s2, k):
    """Exact test of S1^k / S2^(k-1) <= moment.  None if S2 = 0."""
    if s2.sign() == 0:
        return None
    if k == 1:
        return s1 <= moment
    # S2^(k-1) > 0 for even k (S2 is a sum of even powers), so clear it
    lhs = moment * s2 ** (k - 1)
    rhs = s1**k
    if s2.sign() < 0 and (k - 1) % 2:
        return lhs <= rhs
    return rhs <= lhs


def _holder_bound(s1, s2, k):
    if s2.sign() == 0:
        return math.nan
    return float((s1**k) / (s2 ** (k - 1))) if k >= 1 else math.nan


def _report(fam, sums, k, x, seconds, size=None, label="family"):
    size = sums.count if size is None else size
    moment = sums.moment(k)
    if k >= 1:
        s1, s2 = sums.S1(k, x), sums.S2(k, x)
        bound = _holder_bound(s1, s2, k)
        holds = holder_compare(moment, s1, s2, k)
    else:
        s1 = s2 = None
        bound, holds = math.nan, None
    norm = float(moment / size) if size else math.nan
    return MomentReport(fam.q, fam.g, k, x, size, moment, s1, s2, bound, norm, seconds,
                        holds, label)


def family_moment(fam, k, x=None, threads=1, method="half", cache=None,
                  budget=DEFAULT_BUDGET):
    """Exact sum over H_{2g+1,q} of L(1/2, chi_D)^k, with S1, S2 at cutoff x."""
    if k < 0:
        raise DomainError("k must be non-negative")
    if x is None:
        x = paper_cutoff(fam.g, k) if k >= 1 and fam.g >= 1 else 0
    t0 = time.perf_counter()
    sums = family_sums(fam, [k], [x], threads, method, cache, budget)
    return _report(fam, sums, k, x, time.perf_counter() - t0)


def holder_chain(fam, k, x=None, threads=1, method="half", cache=None,
                 budget=DEFAULT_BUDGET):
    """S1, S2 and the bound S1^k / S2^(k-1) <= sum L^k, checked exactly."""
    if k < 2 or k % 2:
        raise DomainError("the Hoelder chain needs an even k >= 2")
    rep = family_moment(fam, k, x, threads, method, cache, budget)
    if rep.holder_holds is False:
        raise HolderViolation(f"S1^k/S2^(k-1) > moment at q={fam.q} g={fam.g} k={k} x={rep.x}")
    return rep


def holder_grid(fam, ks, xs, threads=1, method="half", cache=None, budget=DEFAULT_BUDGET):
    """One sweep, a MomentReport for every (k, x)."""
    t0 = time.perf_counter()
    sums = family_sums(fam, ks, xs, threads, method, cache, budget)
    dt = time.perf_counter() - t0
    return [_report(fam, sums, k, x, dt) for k in ks for x in xs]


def prime_moment(q, n, k, x=0, method="half", budget=DEFAULT_BUDGET):
    """Exact sum of L(1/2, chi_P)^k over monic irreducible P of degree n (odd)."""
    if n < 1 or n % 2 == 0:
        raise DomainError("prime moments are defined here for odd n only")
    t0 = time.perf_counter()
    primes = factor_table(q, n, budget).irreducibles(n)
    g = (n - 1) // 2
    rows = coefficient_rows([p.coeffs for p in primes], q, g, method, budget)
    sums = _accumulate(rows, q, g, [k], [x] if k >= 1 else [])
    return _report(FamilySpec(q, g), sums, k, x, time.perf_counter() - t0, len(primes),
                   "primes")


def family_character_sum(fam, ns, budget=DEFAULT_BUDGET):
    """sum over D of chi_D(n_1) ... chi_D(n_k), evaluated factor by factor."""
    total = 0
    for chr in enumerate_family(fam, budget=budget):
        v = 1
        for n in ns:
            v *= jacobi_tuple(chr.D.coeffs, n.coeffs, fam.q)
            if not v:
                break
        total += v
    return total


@dataclass(frozen=True)
class CoprimeCount:
    q: int
    g: int
    f: str
    exact: int
    main_term: Fraction
    residual: float

    def row(self):
        return {
            "q": self.q,
            "g": self.g,
            "f": self.f,
            "exact": self.exact,
            "main_term": _frac(self.main_term),
            "main_float": _fmt(float(self.main_term)),
            "residual": _fmt(self.residual),
        }


def squarefree_coprime_count(f, fam, budget=DEFAULT_BUDGET):
    """#{D in H_{2g+1,q} : gcd(D, f) = 1} against |D|(1-1/q) prod |P|/(|P|+1)."""
    if not f.is_monic():
        raise DomainError("f must be monic")
    q, deg = fam.q, fam.degree
    fc = f.coeffs
    exact = sum(1 for r in family_ranks(fam, budget=budget)
                if len(pgcd(monic_tuple(q, deg, r), fc, q)) == 1)
    main = Fraction(fam.norm) * Fraction(q - 1, q)
    for P, _ in factorize(f).factors:
        main *= Fraction(P.norm, P.norm + 1)
    residual = float(exact - main) / math.sqrt(fam.norm)
    return CoprimeCount(q, fam.g, f.to_text(), exact, main, residual)


def fit_growth_exponent(reports):
    """Least-squares slope of log(normalized moment) against log(log_q |D|)."""
    pts = [(math.log(2 * r.g + 1), math.log(r.normalized_moment))
           for r in reports if r.normalized_moment > 0]
    if len(pts) < 2:
        return math.nan
    xs, ys = zip(*pts)
    return float(np.polyfit(xs, ys, 1)[0])
