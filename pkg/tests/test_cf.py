import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from diolaws.cf import (DYADIC_ONE, LEVY_RATE, Angle, ContinuedFraction, ExpansionTooShort,
                        K_N_deterministic, K_N_star, cf_expand, convergents,
                        dist_nearest_int, gauss_pmf, gauss_tail, signed_frac, u_value)


@st.composite
def rationals(draw, max_den=10**9):
    q = draw(st.integers(2, max_den))
    p = draw(st.integers(1, q - 1))
    return Angle.rational(p, q)


dyadics = st.integers(1, DYADIC_ONE - 1).map(Angle.from_bits)


@pytest.mark.parametrize("x, want", [(0.75, -0.25), (0.5, 0.5), (3.25, 0.25),
                                     (Fraction(-1, 2), Fraction(1, 2)), (Fraction(7, 3), Fraction(1, 3))])
def test_signed_frac_examples(x, want):
    assert signed_frac(x) == want


@pytest.mark.parametrize("x, want", [(0.75, 0.25), (0.5, 0.5), (-0.1, 0.1)])
def test_dist_nearest_int_examples(x, want):
    assert dist_nearest_int(x) == pytest.approx(want, abs=1e-15)


def test_half_goes_to_positive_side_for_angles():
    alpha = Angle.rational(1, 2)
    assert alpha.signed_frac(1) == Fraction(1, 2)
    assert alpha.signed_frac(3) == Fraction(1, 2)
    half = Angle.from_bits(DYADIC_ONE // 2)
    assert half.signed_frac(1) == Fraction(1, 2)


@given(st.fractions(), st.integers(-50, 50))
def test_signed_frac_range_and_period(x, k):
    s = signed_frac(x)
    assert -Fraction(1, 2) < s <= Fraction(1, 2)
    assert signed_frac(x + k) == s
    assert (x - s).denominator == 1


@pytest.mark.parametrize("p, q, want", [(2, 7, [3, 2]), (1, 2, [2]), (5, 8, [1, 1, 1, 2])])
def test_cf_expand_examples(p, q, want):
    cf = cf_expand(Angle.rational(p, q), 50)
    assert list(cf.partial_quotients) == want
    assert cf.exhausted


def test_cf_expand_rejects_zero():
    with pytest.raises(ValueError, match="zero angle has no partial quotients"):
        cf_expand(Angle.rational(0, 1), 5)


def test_cf_expand_truncates():
    cf = cf_expand(Angle.rational(5, 8), 2)
    assert cf.partial_quotients == (1, 1) and not cf.exhausted


def test_convergent_examples():
    assert convergents(ContinuedFraction.from_quotients([3, 2])) == [(0, 1), (1, 3), (2, 7)]
    assert convergents(ContinuedFraction.from_quotients([2])) == [(0, 1), (1, 2)]


@given(rationals())
@settings(max_examples=300)
def test_expansion_invariants(alpha):
    cf = cf_expand(alpha, 200)
    a, p, q = cf.partial_quotients, cf.p, cf.q
    assert Fraction(p[-1], q[-1]) == alpha.as_fraction()
    assert a[-1] >= 2 or len(a) == 1
    for k in range(1, len(a) + 1):
        assert p[k] * q[k - 1] - p[k - 1] * q[k] == (-1) ** (k - 1)
        if k >= 2:
            assert q[k] > q[k - 1]
            assert p[k] == a[k - 1] * p[k - 1] + p[k - 2]
    for k in range(len(a) - 1):
        assert abs(alpha.as_fraction() - Fraction(p[k], q[k])) < Fraction(1, q[k] * q[k + 1])
        if k + 2 <= len(a):
            assert q[k + 2] >= 2 * q[k]


def test_determinant_identity_many_rationals():
    import random
    rng = random.Random(4)
    for _ in range(10_000):
        q = rng.randint(2, 10**9)
        alpha = Angle.rational(rng.randint(1, q - 1), q)
        cf = cf_expand(alpha, 100)
        p, qq = cf.p, cf.q
        assert all(p[k] * qq[k - 1] - p[k - 1] * qq[k] == (-1) ** (k - 1)
                   for k in range(1, len(cf) + 1))


@given(dyadics)
def test_dyadic_expansion_is_exact(alpha):
    cf = cf_expand(alpha, 1000)
    assert cf.exhausted
    assert Fraction(cf.p[-1], cf.q[-1]) == alpha.as_fraction()


def test_u_value_examples():
    alpha = Angle.rational(2, 7)
    cf = cf_expand(alpha, 10)
    for method in ("denominator_form", "tail_head_form"):
        assert u_value(cf, alpha, 1, method) == Fraction(7, 2)
        assert u_value(cf, alpha, 2, method) == Fraction(7, 3)
    with pytest.raises(IndexError):
        u_value(cf, alpha, 3)


@given(rationals(10**7))
@settings(max_examples=300)
def test_u_value_two_forms_agree(alpha):
    cf = cf_expand(alpha, 100)
    for k in range(1, len(cf) + 1):
        u = u_value(cf, alpha, k)
        assert u == u_value(cf, alpha, k, "tail_head_form")
        a = cf.a(k)
        # the last u of a rational is the bare last quotient
        if k < len(cf):
            assert a < u < a + 2


def test_K_N_star_examples():
    cf = ContinuedFraction.from_quotients([2] * 12)
    assert cf.q[:7] == (1, 2, 5, 12, 29, 70, 169)
    assert K_N_star(cf, 30) == 4
    assert K_N_star(cf, 1) == 0
    assert K_N_star(cf, 12) == 3


def test_K_N_star_too_short():
    cf = cf_expand(Angle.rational(2, 7), 10)
    with pytest.raises(ExpansionTooShort) as info:
        K_N_star(cf, 7)
    assert info.value.last_index == 2


@given(dyadics, st.integers(1, 10**12), st.integers(1, 10**12))
def test_K_N_star_brackets_and_is_monotone(alpha, N1, N2):
    cf = cf_expand(alpha, 1000)
    N1, N2 = sorted((N1, N2))
    if cf.q[-1] <= N2:
        return
    k1, k2 = K_N_star(cf, N1), K_N_star(cf, N2)
    assert k1 <= k2
    assert cf.q[k1] <= N1 < cf.q[k1 + 1]


def test_K_N_deterministic_examples():
    assert K_N_deterministic(round(math.exp(10))) == 8
    assert K_N_deterministic(2) == 0


@given(st.integers(2, 10**9))
def test_K_N_deterministic_is_even_and_close(N):
    K = K_N_deterministic(N)
    assert K % 2 == 0
    assert abs(K - LEVY_RATE * math.log(N)) <= 1


def test_gauss_pmf_examples():
    assert gauss_pmf(1) == pytest.approx(0.415037, abs=1e-6)
    assert gauss_pmf(2) == pytest.approx(0.169925, abs=1e-6)
    assert math.fsum(gauss_pmf(n) for n in range(1, 10**5)) + gauss_tail(10**5) == pytest.approx(1, abs=1e-13)
    with pytest.raises(ValueError):
        gauss_pmf(0)


@given(st.integers(1, 10**6))
def test_gauss_tail_telescopes(n):
    assert gauss_tail(n) - gauss_tail(n + 1) == pytest.approx(gauss_pmf(n), rel=1e-9)


def test_angle_parsing():
    assert Angle.parse("2/7") == Angle(2, 7)
    assert Angle.parse("9/7") == Angle(2, 7)
    assert Angle.parse("0.5") == Angle.from_bits(DYADIC_ONE // 2)
    with pytest.raises(ValueError):
        Angle.parse("abc")
    with pytest.raises(ValueError):
        Angle(2, 4)
