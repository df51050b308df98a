import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import P
from ffquad import (
    DomainError,
    FamilySpec,
    LPolynomial,
    QuadraticCharacter,
    QuadraticValue,
    central_value,
    enumerate_monic,
    jacobi_symbol,
    l_coefficients,
)
from ffquad.lfunction import (
    afe_identity_check,
    critical_circle_check,
    evaluate,
    format_cache_line,
    functional_equation_check,
    load_cache,
    parse_cache_line,
    partial_value,
    polynomial_roots,
    squarefree_decomposition,
    store_cache,
)
from ffquad.moments import enumerate_family, truncated_dirichlet


def brute_L(chi):
    q, g = chi.q, chi.genus
    return tuple(sum(jacobi_symbol(chi.D, f) for f in enumerate_monic(q, n))
                 for n in range(2 * g + 1))


# -- QuadraticValue ----------------------------------------------------------

fracs = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 1000)


@settings(max_examples=200, deadline=None)
@given(fracs, fracs, fracs, fracs, st.sampled_from([3, 5, 7]))
def test_qvalue_ring_and_order(a, b, c, d, q):
    x, y = QuadraticValue(a, b, q), QuadraticValue(c, d, q)
    s = math.sqrt(q)
    assert math.isclose(float(x * y), float(x) * float(y), rel_tol=1e-9, abs_tol=1e-9)
    assert math.isclose(float(x + y), float(x) + float(y), rel_tol=1e-12, abs_tol=1e-9)
    diff = (a - c) + (b - d) / s
    if abs(diff) > 1e-9:
        assert (x < y) == (diff < 0)
    if y.sign():
        assert (x / y) * y == x
    lo, hi = x.bounds()
    assert lo <= float(a) + float(b) / s <= hi or math.isclose(lo, hi)


def test_qvalue_exact_sign_near_zero():
    assert QuadraticValue(1, -3, 7).sign() == -1  # 1 - 3/sqrt(7)
    assert QuadraticValue(Fraction(3, 2), -3, 3).sign() == -1  # 1.5 - 1.732
    assert QuadraticValue(Fraction(7, 4), -3, 3).sign() == 1
    assert QuadraticValue(0, 0, 3).sign() == 0
    assert float(QuadraticValue(2, 0, 3)) == 2.0


def test_qvalue_float_is_correctly_rounded():
    for a, b, q in [(1, 1, 3), (Fraction(1, 3), -2, 5), (7, Fraction(-5, 11), 7)]:
        v = QuadraticValue(a, b, q)
        a, b = Fraction(a), Fraction(b)
        with mpmath.workdps(60):
            exact = mpmath.mpf(a.numerator) / a.denominator
            exact += mpmath.mpf(b.numerator) / b.denominator / mpmath.sqrt(q)
            assert float(v) == float(exact)


# -- L-polynomials -------------------------------------------------------------

@pytest.mark.parametrize("q,g", [(3, 1), (3, 2), (5, 1)])
def test_coefficients_match_brute_force(q, g):
    for chi in enumerate_family(FamilySpec(q, g)):
        L = l_coefficients(chi)
        assert L.coeffs == brute_L(chi)
        assert l_coefficients(chi, "half").coeffs == L.coeffs
        assert L.coeffs[0] == 1 and L.coeffs[-1] == q**g
        assert functional_equation_check(L)
        assert not L.invariant_errors()


def test_c1_is_sum_over_linears():
    chi = QuadraticCharacter(P("q3:1021"))
    L = l_coefficients(chi)
    assert L.coeffs[1] == sum(chi(f) for f in enumerate_monic(3, 1))


def test_full_and_half_agree_on_larger_family():
    fam = FamilySpec(3, 3)
    for r, chi in enumerate(enumerate_family(fam)):
        if r % 37 == 0:
            assert l_coefficients(chi, "full") == l_coefficients(chi, "half")
    with pytest.raises(DomainError):
        l_coefficients(chi, "other")


def test_functional_equation_negative_and_degenerate():
    L = l_coefficients(QuadraticCharacter(P("q3:1010")))
    for i in (0, 2):
        c = list(L.coeffs)
        c[i] += 1
        assert not functional_equation_check(LPolynomial(3, 1, tuple(c)))
    assert functional_equation_check(LPolynomial(3, 0, (1,)))
    assert central_value(LPolynomial(3, 0, (1,))) == QuadraticValue(1, 0, 3)


def test_central_value_two_paths():
    for chi in enumerate_family(FamilySpec(3, 2)):
        L = l_coefficients(chi, "half")
        v = central_value(L)
        assert v == evaluate(L, QuadraticValue(0, 1, 3))
        if chi.genus == 1:
            assert v == QuadraticValue(2, L.coeffs[1], 3)
    for chi in enumerate_family(FamilySpec(3, 1)):
        L = l_coefficients(chi)
        assert central_value(L) == QuadraticValue(2, L.coeffs[1], 3)


def test_truncated_dirichlet_matches_partial_value():
    for chi in list(enumerate_family(FamilySpec(3, 2)))[:40]:
        L = l_coefficients(chi, "half")
        assert truncated_dirichlet(chi, 0) == QuadraticValue(1, 0, 3)
        assert truncated_dirichlet(chi, 1) == QuadraticValue(1, L.coeffs[1], 3)
        for x in (2, 3, 5):
            assert truncated_dirichlet(chi, x) == partial_value(L, x)


@pytest.mark.parametrize("q,g", [(3, 1), (3, 2), (5, 1), (7, 1)])
def test_afe_identity(q, g):
    assert all(afe_identity_check(chi) for chi in enumerate_family(FamilySpec(q, g)))


def test_afe_identity_fails_without_dual_part():
    for chi in enumerate_family(FamilySpec(3, 1)):
        assert not afe_identity_check(chi, drop_dual=True)


def test_rh_on_families():
    for q, g in [(3, 1), (3, 2)]:
        for chi in enumerate_family(FamilySpec(q, g)):
            rep = critical_circle_check(l_coefficients(chi, "half"))
            assert rep.passed and rep.root_product_rel_error < 1e-9


def test_rh_rejects_manufactured_polynomial():
    # symmetric under the functional equation but with roots off the circle
    bad = LPolynomial(3, 1, (1, 5, 3))
    assert functional_equation_check(bad)
    assert not critical_circle_check(bad).passed


def test_roots_handle_repeated_factors():
    # (1 + 3u^2)^2: double roots on the circle at q = 3
    coeffs = (1, 0, 6, 0, 9)
    parts = squarefree_decomposition(coeffs)
    assert [m for _, m in parts] == [2]
    roots = polynomial_roots(coeffs)
    assert len(roots) == 4
    assert max(abs(abs(z) - 3**-0.5) for z in roots) < 1e-12


def test_cache_round_trip(tmp_path):
    path = tmp_path / "cache.txt"
    path.write_text("")
    assert load_cache(path) == ({}, [])
    records = {chi.D: l_coefficients(chi) for chi in enumerate_family(FamilySpec(3, 1))}
    store_cache(path, records)
    loaded, warnings = load_cache(path)
    assert loaded == records and warnings == []
    assert len(path.read_text().splitlines()) == 18


def test_cache_rejects_tampered_lines(tmp_path):
    chi = QuadraticCharacter(P("q3:1010"))
    good = format_cache_line(chi.D, l_coefficients(chi))
    assert parse_cache_line(good)[0] == chi.D
    tampered = good.rsplit(",", 1)[0] + ",4"
    path = tmp_path / "c.txt"
    path.write_text("\n".join([good, tampered, "garbage", "3 1 q3:1010 1,0"]) + "\n")
    loaded, warnings = load_cache(path)
    assert list(loaded) == [chi.D]
    assert [n for n, _ in warnings] == [2, 3, 4]
