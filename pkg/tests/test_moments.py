from fractions import Fraction

import pytest

from conftest import P
from ffquad import (
    DomainError,
    FamilySpec,
    Polynomial,
    QuadraticCharacter,
    QuadraticValue,
    central_value,
    enumerate_monic,
    is_squarefree,
    l_coefficients,
)
from ffquad.arith import count_irreducibles
from ffquad.family import family_members, partition
from ffquad.lfunction import partial_value
from ffquad.moments import (
    HolderViolation,
    enumerate_family,
    family_moment,
    family_sums,
    holder_chain,
    holder_compare,
    paper_cutoff,
    prime_moment,
    squarefree_coprime_count,
)


def brute_sums(fam, k, x):
    moment = s1 = s2 = QuadraticValue.zero(fam.q)
    for chi in enumerate_family(fam):
        L = l_coefficients(chi)
        v, A = central_value(L), partial_value(L, x)
        moment += v**k
        s1 += v * A ** (k - 1)
        s2 += A**k
    return moment, s1, s2


def test_family_sizes():
    assert FamilySpec(3, 1).size == 18
    assert FamilySpec(3, 2).size == 162
    for q, g in [(3, 1), (3, 2), (5, 1), (7, 1)]:
        fam = FamilySpec(q, g)
        members = list(family_members(fam))
        assert len(members) == fam.size
        assert members == [f for f in enumerate_monic(q, 2 * g + 1) if is_squarefree(f)]


def test_partition_covers_ranks():
    for total in (0, 1, 7, 100):
        for parts in (1, 2, 3, 7, 11):
            ranges = partition(total, parts)
            flat = [r for lo, hi in ranges for r in range(lo, hi)]
            assert flat == list(range(total))


def test_paper_cutoff():
    assert paper_cutoff(2, 2) == 0
    assert paper_cutoff(30, 2) == 4
    assert paper_cutoff(15, 4) == 1
    with pytest.raises(DomainError):
        paper_cutoff(0, 2)


@pytest.mark.parametrize("q,g,k,x", [(3, 1, 2, 1), (3, 2, 4, 2), (5, 1, 3, 1), (3, 2, 2, 0)])
def test_sums_match_direct_evaluation(q, g, k, x):
    fam = FamilySpec(q, g)
    rep = family_moment(fam, k, x)
    moment, s1, s2 = brute_sums(fam, k, x)
    assert (rep.moment, rep.s1, rep.s2) == (moment, s1, s2)


def test_small_examples():
    fam = FamilySpec(3, 1)
    assert family_moment(fam, 0).moment == QuadraticValue(18, 0, 3)
    rep = family_moment(fam, 2, 1)
    assert rep.moment == QuadraticValue(88, 0, 3)
    assert rep.holder_holds
    rep0 = family_moment(fam, 2, 0)
    first = family_moment(fam, 1, 0).moment
    assert rep0.s1 == first and rep0.s2 == QuadraticValue(18, 0, 3)


def test_holder_chain_examples():
    assert holder_chain(FamilySpec(3, 1), 2, 1).holder_holds
    rep = holder_chain(FamilySpec(3, 2), 4)
    assert rep.x == paper_cutoff(2, 4) and rep.holder_holds
    with pytest.raises(DomainError):
        holder_chain(FamilySpec(3, 1), 3)


def test_holder_compare_detects_violation():
    q = 3
    m = QuadraticValue(1, 0, q)
    s1 = QuadraticValue(2, 0, q)
    s2 = QuadraticValue(1, 0, q)
    assert holder_compare(m, s1, s2, 2) is False
    assert holder_compare(QuadraticValue(4, 0, q), s1, s2, 2) is True
    assert holder_compare(m, s1, QuadraticValue.zero(q), 2) is None
    assert issubclass(HolderViolation, ArithmeticError)


def test_even_moments_nonnegative_and_growing():
    prev = 0.0
    for g in (1, 2, 3):
        rep = family_moment(FamilySpec(3, g), 2)
        assert rep.moment.sign() >= 0
        assert rep.normalized_moment > prev
        prev = rep.normalized_moment


def test_partition_independence_and_methods():
    fam = FamilySpec(3, 3)
    base = family_sums(fam, [2, 4], [0, 1, 2], threads=1)
    for threads in (2, 7):
        other = family_sums(fam, [2, 4], [0, 1, 2], threads=threads)
        assert (other.moments, other.s1, other.s2) == (base.moments, base.s1, base.s2)
    full = family_sums(FamilySpec(3, 2), [2], [1], method="full")
    half = family_sums(FamilySpec(3, 2), [2], [1], method="half")
    assert full.moments == half.moments and full.s1 == half.s1


def test_cache_fill_and_reuse():
    fam = FamilySpec(3, 2)
    cache = {}
    cold = family_moment(fam, 2, 1, cache=cache)
    assert len(cache) == fam.size
    warm = family_moment(fam, 2, 1, cache=cache)
    assert (cold.moment, cold.s1, cold.s2) == (warm.moment, warm.s1, warm.s2)


def test_prime_moments():
    assert prime_moment(3, 3, 0).moment == QuadraticValue(count_irreducibles(3, 3), 0, 3)
    rep = prime_moment(3, 3, 2)
    assert rep.family_size == 8
    primes = [f for f in enumerate_monic(3, 3) if f.degree == 3
              and all(not p.divides(f) for p in enumerate_monic(3, 1))]
    direct = sum((central_value(l_coefficients(QuadraticCharacter(p))) ** 2 for p in primes),
                 QuadraticValue.zero(3))
    assert rep.moment == direct
    assert prime_moment(3, 5, 2).normalized_moment > rep.normalized_moment
    with pytest.raises(DomainError):
        prime_moment(3, 4, 2)


def test_coprime_counts():
    fam = FamilySpec(3, 1)
    one = squarefree_coprime_count(Polynomial.one(3), fam)
    assert one.exact == 18 == one.main_term == fam.size
    T = Polynomial.T(3)
    rec = squarefree_coprime_count(T, fam)
    brute = sum(1 for D in family_members(fam) if D.gcd(T).degree == 0)
    assert rec.exact == brute
    assert rec.main_term == Fraction(27) * Fraction(2, 3) * Fraction(3, 4)
    irr = P("q3:101")
    for g in (1, 2):
        fam = FamilySpec(3, g)
        rec = squarefree_coprime_count(irr, fam)
        assert rec.exact == sum(1 for D in family_members(fam) if D.gcd(irr).degree == 0)
