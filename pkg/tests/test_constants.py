"""Constants against independently computed reference values.

Reference values marked "mpmath" were evaluated at 30 digits with mpmath's
zeta, digamma and nsum on smooth series.  Those marked "brute force" come
from direct summation to 10^7 with a one-term tail, or from scipy quad on
the smooth pieces left after integrating the floor parts cell by cell.
"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diolaws import constants as C

LOG2 = math.log(2)
PI = math.pi

# mpmath
GAMMA = 0.577215664901532860606512090082
ZETA_PRIME_2 = -0.937548254315843753702574094568
KAPPA = 1.33084064602936546333261852277
C_THM1 = 0.773389861459721057851841213071
C_J0 = 1.45640242883183426557165504601
# mpmath, with the log m / m^2 part taken from zeta'(2)
KAPPA_PRIME = 5.85875309259043718480556027651
KAPPA_DOUBLE_PRIME = 2.19056077553822355006637748417
# brute force
M_P = {0.5: 2.129106647159277, 0.75: 4.748845761905318, 0.9: 13.1786046770714}
D_P = {1.25: 7.963370898843064, 1.5: 6.702263581273896}
B_P = {1.25: -0.4604267818032888, 1.5: -0.42876820724406395}


def test_zeta():
    assert C.zeta(2) == pytest.approx(PI**2 / 6, abs=1e-13)
    assert C.zeta(4) == pytest.approx(PI**4 / 90, abs=1e-13)
    assert C.zeta(3) == pytest.approx(1.20205690315959428539973816151, abs=1e-13)
    with pytest.raises(ValueError):
        C.zeta(1.0)


def test_zeta_prime_2():
    assert C.zeta_prime_2() == pytest.approx(ZETA_PRIME_2, abs=1e-12)
    est = C.zeta_prime_2_estimate()
    assert est.error < 1e-12 and est.routes == 2


def test_gamma_and_digamma():
    assert C.euler_gamma() == pytest.approx(GAMMA, abs=1e-13)
    assert C.digamma(1.0) == pytest.approx(-GAMMA, abs=1e-13)
    assert C.digamma(2.0) == pytest.approx(1 - GAMMA, abs=1e-13)
    assert C.digamma(1.5) == pytest.approx(0.0364899739785765205590236670012, abs=1e-13)
    assert C.digamma(0.3) == pytest.approx(-3.50252422220013312491535114755, abs=1e-12)
    with pytest.raises(ValueError):
        C.digamma(0.0)


@given(st.floats(0.01, 50))
def test_digamma_recurrence(y):
    assert C.digamma(y + 1) - C.digamma(y) == pytest.approx(1 / y, rel=1e-12, abs=1e-12)


def test_c_thm1():
    assert C.const_c_thm1() == pytest.approx(0.77338986, abs=1e-8)
    assert C.const_c_thm1() == pytest.approx(C_THM1, abs=1e-13)
    est = C.c_thm1_estimate()
    assert est.routes == 2 and est.error < 1e-10


def test_c_j_and_c_cor():
    assert C.const_c_j(0) == pytest.approx(C_J0, abs=1e-12)
    assert C.const_c_j(1) == pytest.approx(C.const_c_j(0) - 1, abs=1e-15)
    assert C.const_c_cor(0.3) == pytest.approx(C.const_c_cor(0) - 0.3, abs=1e-15)
    # pi |cot| = 1/||x|| + g with int g = 2 log(2/pi): the unsigned centering over pi
    # carries exactly the coefficients of the |cot| centering
    c = C.const_c_cor(2 * math.log(2 / PI))
    assert c / PI == pytest.approx(C.const_c_thm1(), abs=1e-12)
    for N in (10**3, 10**6):
        L = math.log(N)
        e_cor = L * L + 2 * L * math.log(L) - c * L
        assert e_cor / PI == pytest.approx(C.centering("thm1", N), rel=1e-12)


def test_kappa_two_routes():
    assert C.kappa() == pytest.approx(KAPPA, abs=1e-12)
    assert C.kappa("W_integral") == pytest.approx(C.kappa(), abs=1e-6)
    with pytest.raises(ValueError):
        C.kappa("nope")


@pytest.mark.parametrize("y", [0.0, 0.3, 1.0])
def test_W_two_routes(y):
    assert C.W(y) == pytest.approx(C.W(y, "quadrature"), abs=1e-8)


def test_W_domain():
    with pytest.raises(ValueError):
        C.W(1.5)


def test_kappa_prime_and_double_prime():
    assert C.kappa_prime() == pytest.approx(KAPPA_PRIME, abs=1e-10)
    assert C.kappa_double_prime() == pytest.approx(KAPPA_DOUBLE_PRIME, abs=1e-10)
    relation = C.kappa_prime() / 2 + PI**2 / (12 * LOG2) * (math.log(4 * LOG2 / PI)
                                                            - math.log(PI**2 / 6))
    assert C.kappa_double_prime() == pytest.approx(relation, abs=1e-10)


def test_kappa_prime_series_truncation():
    a = C._kappa_prime_sum_direct(50_000)
    b = C._kappa_prime_sum_direct(100_000)
    assert abs(a - b) < 1e-10


def test_main_theorem_constant_identity():
    s = 12 * LOG2 / PI**2
    lhs = -(6 * LOG2 / PI**2) * C.kappa() - math.log(s) + s * C.kappa_double_prime()
    rhs = GAMMA + math.log(2 * PI / 3) - 12 / PI**2 * ZETA_PRIME_2 - 1
    assert lhs == pytest.approx(rhs, abs=1e-8)


@pytest.mark.parametrize("p", sorted(D_P))
def test_d_p(p):
    assert C.d_p(p) == pytest.approx(D_P[p], abs=1e-8)
    # cell-wise closed form: d_p log 2 is the limit behind h_limit
    assert C.d_p(p) == pytest.approx(C.h_limit(p).value / LOG2, abs=1e-10)


@pytest.mark.parametrize("p", sorted(B_P))
def test_B_p(p):
    assert C.B_p(p) == pytest.approx(B_P[p], abs=1e-9)


@pytest.mark.parametrize("p", [1.1, 1.25, 1.5, 1.9])
def test_c_p_two_routes(p):
    assert C.c_p(p) == pytest.approx(C.c_p_via_kappas(p), abs=1e-6)


@pytest.mark.parametrize("p", sorted(M_P))
def test_m_p(p):
    assert C.m_p(p) == pytest.approx(M_P[p], abs=1e-9)


@pytest.mark.parametrize("fn, bad", [(C.d_p, 2.0), (C.d_p, 1.0), (C.c_p, 2.5), (C.B_p, 0.9),
                                     (C.m_p, 1.0), (C.m_p, 0.4), (C.sigma_p, 1.0),
                                     (C.kappa_p, 2.0), (C.kappa_p_prime, 1.0)])
def test_domains_enforced(fn, bad):
    with pytest.raises(ValueError):
        fn(bad)


def test_sigma_p():
    assert C.sigma_p(2) == pytest.approx(PI / 5, abs=1e-12)
    assert 4 * C.sigma_p(2) / PI**2 == pytest.approx(4 / (5 * PI), abs=1e-10)
    assert 8 * C.sigma_p(3) / PI**3 == pytest.approx(64 / (35 * math.gamma(1 / 3) ** 3), abs=1e-10)
    assert C.sigma_cot3() == pytest.approx(64 / (35 * math.gamma(1 / 3) ** 3), abs=1e-10)


def test_centerings():
    assert C.centering("sum_ak_power", 17, 3.0) == 0.0
    assert C.centering("sum_ak_power", 4, 2.0) == pytest.approx(4 * math.log(4) / LOG2, rel=1e-14)
    N = 10**6
    L = math.log(N)
    want = L * L / PI + 2 / PI * L * math.log(L) - C_THM1 * L
    assert C.centering("thm1", N) == pytest.approx(want, rel=1e-13)
    with pytest.raises(ValueError):
        C.centering("thm1", 2)
    with pytest.raises(ValueError):
        C.centering("nope", 10)


def test_constants_table_shape():
    rows = C.constants_table()
    names = {r["name"] for r in rows}
    assert {"c_thm1", "kappa", "kappa_prime", "kappa_double_prime", "gamma_euler",
            "zeta_prime_2", "sigma_cot3"} <= names
    for r in rows:
        assert set(r) == {"name", "value", "error_estimate", "route_count"}
        assert np.isfinite(r["value"]) and r["error_estimate"] >= 0


def test_power_char_expansion_small_t():
    for p in (1.5, 2.0, 3.0):
        t = 1e-3
        resid = abs(C.power_char(t, p) - C.power_char_expansion(t, p))
        assert resid < 10 * C.power_char_error_scale(t, p)
        # the negative side is the complex conjugate
        assert C.power_char(-t, p) == pytest.approx(C.power_char(t, p).conjugate(), abs=1e-15)
        assert C.power_char_expansion(-t, p) == pytest.approx(
            C.power_char_expansion(t, p).conjugate(), abs=1e-15)


def test_w_char_expansion_small_t():
    t = 1e-3
    assert abs(C.w_char(t) - C.w_char_expansion(t)) < 20 * t**1.5
