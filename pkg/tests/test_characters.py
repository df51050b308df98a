import itertools

import pytest

from conftest import P
from ffquad import DomainError, FamilySpec, Polynomial, QuadraticCharacter, chi_D, enumerate_monic
from ffquad.arith import irreducible_sieve
from ffquad.characters import (
    char_sum_fixed_degree,
    jacobi_symbol,
    orthogonality_sum,
    symbol_mod_prime,
)
from ffquad.moments import enumerate_family, family_character_sum


def monics(q, dmax):
    return [f for n in range(dmax + 1) for f in enumerate_monic(q, n)]


def test_symbol_mod_prime_examples():
    T = Polynomial.T(3)
    assert symbol_mod_prime(T * (T + 1), T) == 0
    assert symbol_mod_prime(T + 1, T) == 1
    assert symbol_mod_prime(T + 2, T) == -1
    with pytest.raises(DomainError):
        symbol_mod_prime(T, T * T)


@pytest.mark.parametrize("q", [3, 5])
def test_symbol_matches_brute_force_squares(q):
    for P_ in irreducible_sieve(q, 3 if q == 3 else 2):
        d = P_.degree
        residues = [Polynomial(q, c) for c in itertools.product(range(q), repeat=d)]
        squares = {(h * h % P_) for h in residues}
        for f in residues:
            if f.is_zero():
                assert symbol_mod_prime(f, P_) == 0
            else:
                assert symbol_mod_prime(f, P_) == (1 if f in squares else -1)


def test_jacobi_paths_agree_q3_deg4():
    ms = monics(3, 4)
    for n in ms:
        for f in ms:
            assert jacobi_symbol(f, n, "euclid") == jacobi_symbol(f, n, "factor")


def test_jacobi_non_monic_top_argument():
    ms = monics(5, 2)
    for n in ms:
        for f in ms:
            for c in (2, 3):
                g = f * c
                assert jacobi_symbol(g, n) == jacobi_symbol(g, n, "factor")


def test_jacobi_basic_properties():
    ms = monics(3, 3)
    for n in ms:
        for f in ms:
            j = jacobi_symbol(f, n)
            assert (j == 0) == (f.gcd(n).degree != 0)
        for f, g in itertools.product(ms[:13], repeat=2):
            assert jacobi_symbol(f * g, n) == jacobi_symbol(f, n) * jacobi_symbol(g, n)
    with pytest.raises(DomainError):
        jacobi_symbol(P("q3:1"), Polynomial(3, [1, 2]))


def test_square_modulus_collapse():
    ms = monics(3, 2)
    for D in monics(3, 3):
        for m in ms:
            expected = 1 if D.gcd(m).degree == 0 else 0
            assert jacobi_symbol(D, m * m) == expected


def test_character_validation():
    for bad in ("q3:100", "q3:1000", "q3:101"):
        with pytest.raises(DomainError):
            QuadraticCharacter(P(bad))
    with pytest.raises(DomainError):
        QuadraticCharacter(Polynomial(3, [1, 0, 0, 2]))


def test_character_examples():
    chi = QuadraticCharacter(P("q3:1010"))
    T = Polynomial.T(3)
    assert chi_D(chi, Polynomial.one(3)) == 1
    assert chi_D(chi, T) == 0
    for f in monics(3, 2):
        for h in monics(3, 2):
            if f.gcd(chi.D).degree == 0:
                assert chi(f * f * h) == chi(h)


def test_complete_multiplicativity_on_family():
    ms = monics(3, 3)
    for chi in enumerate_family(FamilySpec(3, 1)):
        vals = {f: chi(f) for f in ms}
        for f in ms[:13]:
            for g in ms:
                assert chi(f * g) == vals[f] * vals[g]
                assert vals[f] in (-1, 0, 1)


def test_char_sums():
    for chi in enumerate_family(FamilySpec(3, 1)):
        assert char_sum_fixed_degree(chi, 0).exact_sum == 1
        for x in (3, 4, 5):
            assert char_sum_fixed_degree(chi, x).exact_sum == 0
        for x in (1, 2):
            brute = sum(chi(f) for f in enumerate_monic(3, x))
            rec = char_sum_fixed_degree(chi, x)
            assert rec.exact_sum == brute and abs(brute) <= 3**x


def test_orthogonality_examples():
    fam = FamilySpec(3, 1)
    assert orthogonality_sum(Polynomial.one(3), fam).exact_sum == 18
    T = Polynomial.T(3)
    rec = orthogonality_sum(T * T, fam)
    brute = sum(1 for D in enumerate_monic(3, 3) if D.gcd(T).degree == 0
                and D.gcd(D.derivative()).degree == 0)
    assert rec.is_square and rec.exact_sum == rec.coprime_count == brute
    rec = orthogonality_sum(T, fam)
    assert not rec.is_square
    assert rec.exact_sum == sum(chi(T) for chi in enumerate_family(fam))


def test_product_character_sum_matches_orthogonality():
    fam = FamilySpec(3, 1)
    ms = monics(3, 2)
    for a, b in itertools.product(ms, repeat=2):
        assert family_character_sum(fam, [a, b]) == orthogonality_sum(a * b, fam).exact_sum
