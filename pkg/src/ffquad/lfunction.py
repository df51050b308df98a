"""L-polynomials of quadratic characters and checks on them.

For D in H_{2g+1,q}, L(u, chi_D) = sum_{n<=2g} c_n u^n with
c_n = sum over monic f of degree n of chi_D(f), u = q^(-s).

The coefficient kernel evaluates chi_D on every monic irreducible of degree
<= N once, then obtains chi_D(f) for every monic f of degree <= N as a
product over its (precomputed) factorization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import factor_table
from .characters import QuadraticCharacter, jacobi_tuple
from .errors import DEFAULT_BUDGET, DomainError, NumericError, check_budget
from .family import FamilySpec
from .poly import Polynomial, is_squarefree_tuple
from .qvalue import QuadraticValue


@dataclass(frozen=True)
class LPolynomial:
    q: int
    g: int
    coeffs: tuple

    @property
    def fam(self):
        return FamilySpec(self.q, self.g)

    def invariant_errors(self):
        """Human-readable list of violated invariants (empty when valid)."""
        errs = []
        c, q, g = self.coeffs, self.q, self.g
        if len(c) != 2 * g + 1:
            return [f"expected {2 * g + 1} coefficients, got {len(c)}"]
        if c[0] != 1:
            errs.append(f"c_0 = {c[0]} != 1")
        for n, cn in enumerate(c):
            if abs(cn) > q**n:
                errs.append(f"|c_{n}| = {abs(cn)} exceeds q^{n}")
        if not functional_equation_check(self):
            errs.append("functional equation c_(2g-n) = q^(g-n) c_n fails")
        return errs


class _CoefficientKernel:
    """chi_D(f) for all monic f of degree <= N, for a batch of D at once.

    chi_D(P) is read from a quadratic-residue table of P indexed by the
    residue D mod P; D mod P for every P of one degree is a single
    contraction against the precomputed powers T^j mod P.
    """

    def __init__(self, q, N, budget):
        table = factor_table(q, max(N, 1), budget)
        self.q = q
        self.N = N
        self.by_degree = []     # (degree, first prime index, prime coefficient matrix)
        self.qr = {}
        count = 0
        for d in range(1, N + 1):
            ps = [p.coeffs for p, dd in zip(table.primes, table.prime_degree) if dd == d]
            mat = np.array(ps, dtype=np.int64).reshape(len(ps), d + 1)
            self.by_degree.append((d, count, mat))
            self.qr[d] = _residue_tables(q, d, mat)
            count += len(ps)
        self.nprimes = count
        self._powers = {}
        mats = [table.index_matrix(n) for n in range(1, N + 1)]
        width = max(N, 1)
        self.index = np.full((sum(m.shape[0] for m in mats), width), count, dtype=np.int64)
        self.starts = []
        row = 0
        for m in mats:
            self.starts.append(row)
            self.index[row:row + m.shape[0], :m.shape[1]] = m
            row += m.shape[0]

    def _power_table(self, d, mat, m):
        """(m+1, pi_d, d) array of T^j mod P for j <= m, every P of degree d."""
        key = (d, m)
        if key not in self._powers:
            q = self.q
            out = np.zeros((m + 1, mat.shape[0], d), dtype=np.int64)
            cur = np.zeros((mat.shape[0], d), dtype=np.int64)
            cur[:, 0] = 1
            for j in range(m + 1):
                out[j] = cur
                top = cur[:, d - 1].copy()
                cur = np.roll(cur, 1, axis=1)
                cur[:, 0] = 0
                cur = (cur - top[:, None] * mat[:, :d]) % q
            self._powers[key] = out
        return self._powers[key]

    def prime_values(self, Dmat):
        """(B, nprimes + 1) int8 array of chi_D(P); the last column is 1."""
        q = self.q
        B, m = Dmat.shape[0], Dmat.shape[1] - 1
        chi = np.ones((B, self.nprimes + 1), dtype=np.int8)
        for d, lo, mat in self.by_degree:
            if mat.shape[0] == 0:
                continue
            powers = self._power_table(d, mat, m)
            res = np.einsum("bj,jpd->bpd", Dmat, powers) % q
            codes = res @ (q ** np.arange(d, dtype=np.int64))
            chi[:, lo:lo + mat.shape[0]] = self.qr[d][np.arange(mat.shape[0])[None, :], codes]
        return chi

    def shell_sums_batch(self, Dmat):
        """(B, N+1) array of c_0..c_N for each row of Dmat (coefficients low-first)."""
        Dmat = np.asarray(Dmat, dtype=np.int64)
        B = Dmat.shape[0]
        out = np.ones((B, self.N + 1), dtype=np.int64)
        if self.N == 0 or B == 0:
            return out
        chi = self.prime_values(Dmat)
        vals = chi[:, self.index].prod(axis=2, dtype=np.int64)
        out[:, 1:] = np.add.reduceat(vals, self.starts, axis=1)
        return out

    def shell_sums(self, D):
        return [int(v) for v in self.shell_sums_batch(np.array([D], dtype=np.int64))[0]]


def _residue_tables(q, d, mat):
    """(pi_d, q^d) int8 tables: symbol of each residue class mod each P."""
    size = q**d
    ranks = np.arange(size, dtype=np.int64)
    digits = np.stack([(ranks // q**i) % q for i in range(d)], axis=1)
    sq = np.zeros((size, 2 * d - 1), dtype=np.int64)
    for i in range(d):
        sq[:, i:i + d] += digits[:, i:i + 1] * digits
    sq %= q
    weights = q ** np.arange(d, dtype=np.int64)
    tables = np.full((mat.shape[0], size), -1, dtype=np.int8)
    for k in range(mat.shape[0]):
        red = sq.copy()
        p = mat[k]
        for j in range(2 * d - 2, d - 1, -1):
            top = red[:, j]
            red[:, j - d:j] = (red[:, j - d:j] - top[:, None] * p[:d]) % q
        tables[k, red[:, :d] @ weights] = 1
        tables[k, 0] = 0
    return tables


@lru_cache(maxsize=16)
def _kernel(q, N, budget=DEFAULT_BUDGET):
    return _CoefficientKernel(q, N, budget)


def _check_member(chr):
    D = chr.D
    if not D.is_monic() or D.degree % 2 == 0 or not is_squarefree_tuple(D.coeffs, D.q):
        raise DomainError(f"{D.to_text()} is not in H_(2g+1,q)")


def coefficient_kernel(q, N, budget=DEFAULT_BUDGET):
    check_budget(sum(q**n for n in range(N + 1)), budget, f"coefficient sums to degree {N}")
    return _kernel(q, N, budget)


def shell_sums(chr, N, budget=DEFAULT_BUDGET):
    """[sum over monic f of degree n of chi_D(f) for n = 0..N]."""
    return coefficient_kernel(chr.q, N, budget).shell_sums(chr.D.coeffs)


def complete_by_functional_equation(q, g, low):
    """Given c_0..c_g, return c_0..c_2g using c_(2g-n) = q^(g-n) c_n."""
    c = list(low[:g + 1]) + [0] * g
    for n in range(g):
        c[2 * g - n] = q ** (g - n) * c[n]
    return tuple(c)


def l_coefficients(chr, method="full", budget=DEFAULT_BUDGET):
    """LPolynomial of chi_D.

    method="full" sums every shell 0..2g directly.  method="half" sums
    shells 0..g and fills the rest from the functional equation; it is the
    fast path for family sweeps and is validated against "full" in tests.
    """
    _check_member(chr)
    q, g = chr.q, chr.genus
    if method == "full":
        coeffs = tuple(shell_sums(chr, 2 * g, budget))
    elif method == "half":
        coeffs = complete_by_functional_equation(q, g, shell_sums(chr, g, budget))
    else:
        raise DomainError(f"unknown L-coefficient method {method!r}")
    return LPolynomial(q, g, coeffs)


def functional_equation_check(L):
    c, q, g = L.coeffs, L.q, L.g
    if len(c) != 2 * g + 1:
        return False
    for n in range(g + 1):
        # c_(2g-n) = q^(g-n) c_n; for n > g the relation is the same pair
        if c[2 * g - n] != q ** (g - n) * c[n]:
            return False
    return True


def central_value(L):
    """L(1/2) = sum c_n q^(-n/2) split into rational and q^(-1/2) parts."""
    q = L.q
    a = sum(Fraction(cn, q ** (n // 2)) for n, cn in enumerate(L.coeffs) if n % 2 == 0)
    b = sum(Fraction(cn, q ** ((n - 1) // 2)) for n, cn in enumerate(L.coeffs) if n % 2 == 1)
    return QuadraticValue(a, b, q)


def evaluate(L, u):
    """Horner evaluation of the L-polynomial at a QuadraticValue u."""
    acc = QuadraticValue.zero(L.q)
    for cn in reversed(L.coeffs):
        acc = acc * u + cn
    return acc


def partial_value(L, x):
    """sum_{n <= x} c_n q^(-n/2); coefficients past 2g vanish."""
    q = L.q
    a = Fraction(0)
    b = Fraction(0)
    for n, cn in enumerate(L.coeffs[:x + 1]):
        if n % 2 == 0:
            a += Fraction(cn, q ** (n // 2))
        else:
            b += Fraction(cn, q ** ((n - 1) // 2))
    return QuadraticValue(a, b, q)


def afe_parts(chr, budget=DEFAULT_BUDGET):
    """Coefficient vectors (in u) of the principal and dual sums.

    principal: sum over deg f1 <= g of chi_D(f1) u^(deg f1)
    dual: (q u^2)^g * sum over deg f2 <= g-1 of chi_D(f2) (q u)^(-deg f2)
    """
    q, g = chr.q, chr.genus
    low = shell_sums(chr, g, budget)
    principal = [0] * (2 * g + 1)
    dual = [0] * (2 * g + 1)
    for n in range(g + 1):
        principal[n] = low[n]
    for m in range(g):
        dual[2 * g - m] += q ** (g - m) * low[m]
    return principal, dual


def afe_identity_check(chr, drop_dual=False, budget=DEFAULT_BUDGET):
    """True iff principal + dual sums reproduce the directly summed L exactly."""
    _check_member(chr)
    principal, dual = afe_parts(chr, budget)
    if drop_dual:
        dual = [0] * len(dual)
    assembled = tuple(p + d for p, d in zip(principal, dual))
    return assembled == l_coefficients(chr, "full", budget).coeffs


# -- roots ---------------------------------------------------------------

def _qp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _qp_divmod(a, b):
    a = list(a)
    out = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        off = len(a) - len(b)
        out[off] = c
        for i, y in enumerate(b):
            a[off + i] -= c * y
        a.pop()
        _qp_trim(a)
    return _qp_trim(out), a


def _qp_gcd(a, b):
    while b:
        a, b = b, _qp_divmod(a, b)[1]
    return [x / a[-1] for x in a]


def _qp_deriv(a):
    return _qp_trim([i * a[i] for i in range(1, len(a))])


def squarefree_decomposition(coeffs):
    """Yun's algorithm over Q: list of (squarefree factor, multiplicity)."""
    f = _qp_trim([Fraction(c) for c in coeffs])
    out = []
    if len(f) <= 1:
        return out
    a = _qp_gcd(f, _qp_deriv(f))
    b = _qp_divmod(f, a)[0]
    c = _qp_divmod(_qp_deriv(f), a)[0]
    d = [x - y for x, y in _zip_pad(c, _qp_deriv(b))]
    d = _qp_trim(d)
    i = 1
    while len(b) > 1:
        a = _qp_gcd(b, d) if d else b
        if len(a) > 1:
            out.append((a, i))
        b = _qp_divmod(b, a)[0]
        c = _qp_divmod(d, a)[0] if d else []
        d = _qp_trim([x - y for x, y in _zip_pad(c, _qp_deriv(b))])
        i += 1
    return out


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


@dataclass(frozen=True)
class CircleReport:
    max_deviation: float
    root_product_rel_error: float
    passed: bool
    roots: tuple

    def __iter__(self):
        return iter((self.max_deviation, self.passed))


def polynomial_roots(coeffs):
    """Roots with multiplicity of an integer polynomial given low-first.

    Repeated roots are separated exactly first so that each numerical solve
    sees only simple roots.
    """
    roots = []
    for factor, mult in squarefree_decomposition(coeffs):
        fl = [float(x) for x in factor]
        found = np.roots(fl[::-1])
        if not np.all(np.isfinite(found)):
            raise NumericError(f"root finder failed on {list(coeffs)}")
        hi_first = np.array(fl[::-1])
        dhi = np.polyder(hi_first)
        z = found.astype(complex)
        for _ in range(3):
            dz = np.polyval(dhi, z)
            ok = dz != 0
            z = np.where(ok, z - np.polyval(hi_first, z) / np.where(ok, dz, 1), z)
        roots.extend(list(z) * mult)
    if len(roots) != len(_qp_trim([Fraction(c) for c in coeffs])) - 1:
        raise NumericError(f"root count mismatch for {list(coeffs)}")
    return roots


def critical_circle_check(L, tol=1e-9):
    """Do all roots of L(u) lie on |u| = q^(-1/2)?"""
    q, g = L.q, L.g
    radius = 1 / math.sqrt(q)
    if g == 0:
        return CircleReport(0.0, 0.0, True, ())
    roots = polynomial_roots(L.coeffs)
    dev = max(abs(abs(z) - radius) for z in roots)
    prod = complex(1.0)
    for z in roots:
        prod *= z
    expected = L.coeffs[0] / L.coeffs[-1]
    rel = abs(prod - expected) / abs(expected)
    return CircleReport(float(dev), float(rel), bool(dev <= tol), tuple(roots))


# -- cache file ------------------------------------------------------------

def format_cache_line(D, L):
    return f"{L.q} {L.g} {D.to_text()} " + ",".join(str(c) for c in L.coeffs)


def parse_cache_line(line):
    """Parse and validate one cache record; raises DomainError when corrupt."""
    parts = line.split()
    if len(parts) != 4:
        raise DomainError("expected 4 whitespace-separated fields")
    try:
        q, g = int(parts[0]), int(parts[1])
        coeffs = tuple(int(c) for c in parts[3].split(","))
    except ValueError:
        raise DomainError("non-integer field") from None
    D = Polynomial.parse(parts[2])
    if D.q != q:
        raise DomainError("discriminant field does not match q")
    if D.degree != 2 * g + 1 or not D.is_monic():
        raise DomainError("discriminant degree does not match g")
    L = LPolynomial(q, g, coeffs)
    errs = L.invariant_errors()
    if errs:
        raise DomainError("; ".join(errs))
    return D, L


def load_cache(path):
    """Read a cache file -> (dict D -> LPolynomial, list of (lineno, message))."""
    records, warnings = {}, []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                D, L = parse_cache_line(line)
            except DomainError as exc:
                warnings.append((lineno, str(exc)))
                continue
            records[D] = L
    return records, warnings


def store_cache(path, records):
    """Write records sorted by (q, g, rank of D) so the file is deterministic."""
    items = sorted(records.items(), key=lambda kv: (kv[1].q, kv[1].g, kv[0].rank))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for D, L in items:
            fh.write(format_cache_line(D, L) + "\n")


__all__ = [
    "CircleReport",
    "LPolynomial",
    "QuadraticCharacter",
    "afe_identity_check",
    "afe_parts",
    "central_value",
    "complete_by_functional_equation",
    "critical_circle_check",
    "evaluate",
    "functional_equation_check",
    "l_coefficients",
    "load_cache",
    "partial_value",
    "polynomial_roots",
    "shell_sums",
    "store_cache",
]
