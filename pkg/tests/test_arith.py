import itertools

import pytest

from conftest import P
from ffquad import DomainError, Polynomial, enumerate_monic
from ffquad.arith import (
    count_irreducibles,
    divisor_count_k,
    factor_table,
    factorize,
    irreducible_sieve,
    mobius,
    norm_weight,
)


def _irreducible_brute(f):
    for d in range(1, f.degree // 2 + 1):
        for p in enumerate_monic(f.q, d):
            if p.divides(f):
                return False
    return True


def test_sieve_small():
    assert [p.to_text() for p in irreducible_sieve(3, 1)] == ["q3:10", "q3:11", "q3:12"]
    quad = [p for p in irreducible_sieve(3, 2) if p.degree == 2]
    assert len(quad) == 3
    assert quad == [f for f in enumerate_monic(3, 2) if _irreducible_brute(f)]
    primes = irreducible_sieve(3, 2)
    assert primes[0] * primes[1] not in set(irreducible_sieve(3, 2))
    assert primes == sorted(primes, key=lambda p: p.sort_key())


@pytest.mark.parametrize("q,dmax", [(3, 8), (5, 5), (7, 4)])
def test_count_formula_matches_sieve(q, dmax):
    table = factor_table(q, dmax)
    for n in range(1, dmax + 1):
        assert count_irreducibles(q, n) == table.count(n)
    assert count_irreducibles(3, 1) == 3 and count_irreducibles(3, 2) == 3


@pytest.mark.parametrize("q", [3, 5])
def test_prime_polynomial_identity(q):
    for n in range(1, 9):
        assert sum(d * count_irreducibles(q, d) for d in range(1, n + 1) if n % d == 0) == q**n


def test_factorize_examples():
    fac = factorize(P("q3:102"))
    assert [p.to_text() for p in fac.primes] == ["q3:11", "q3:12"]
    p = P("q3:101")
    assert factorize(p).factors == ((p, 1),)
    assert factorize(p**3).factors == ((p, 3),)
    with pytest.raises(DomainError):
        factorize(Polynomial(3))


def test_factorize_reconstructs_with_unit():
    q = 5
    for c in itertools.product(range(q), repeat=4):
        if not c[-1]:
            continue
        f = Polynomial(q, c)
        fac = factorize(f)
        assert fac.reconstruct() == f
        assert all(_irreducible_brute(p) for p in fac.primes)
        keys = [p.sort_key() for p in fac.primes]
        assert keys == sorted(set(keys))


def test_bulk_factor_lists_agree_with_trial_division():
    q, n = 3, 6
    table = factor_table(q, n)
    lists = table.factor_lists()
    for r, idx in enumerate(lists[n]):
        f = Polynomial.monic_from_rank(q, n, r)
        expected = sorted(p.sort_key() for p, e in factorize(f).factors for _ in range(e))
        assert sorted(table.primes[i].sort_key() for i in idx) == expected


def test_mobius_and_divisors():
    T = Polynomial.T(3)
    one = Polynomial.one(3)
    assert mobius(one) == 1
    assert mobius(T) == -1
    assert mobius(T * (T + 1)) == 1
    assert mobius(T**2) == 0
    f = P("q3:1021")
    assert divisor_count_k(f, 1) == 1
    assert divisor_count_k(T, 5) == 5
    assert divisor_count_k(T**2, 3) == 6
    assert norm_weight(one) == 1
    assert norm_weight(T**3) == norm_weight(T)


def _dk_brute(f, k):
    if k == 1:
        return 1
    q = f.q
    total = 0
    for d in range(f.degree + 1):
        for a in enumerate_monic(q, d):
            if a.divides(f):
                total += _dk_brute(f // a, k - 1)
    return total


def test_divisor_count_brute_force():
    for f in list(enumerate_monic(3, 3)) + [P("q3:10") ** 2]:
        for k in (2, 3):
            assert divisor_count_k(f, k) == _dk_brute(f, k)


def test_multiplicativity_over_coprime_pairs():
    q = 3
    ms = [f for n in range(4) for f in enumerate_monic(q, n)]
    for f in ms:
        for g in ms:
            if f.gcd(g).degree != 0:
                continue
            assert mobius(f * g) == mobius(f) * mobius(g)
            for k in (2, 3):
                assert divisor_count_k(f * g, k) == divisor_count_k(f, k) * divisor_count_k(g, k)
