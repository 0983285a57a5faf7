"""Explicit constants and normalizing sequences of the limit laws.

Every constant with a second representation is evaluated both ways; the
spread between routes (or between truncation levels) is reported as its
error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .sums import RTable

LOG2 = math.log(2.0)
PI = math.pi
ZETA2 = PI**2 / 6


@dataclass(frozen=True)
class Estimate:
    value: float
    error: float
    routes: int = 1

    def __float__(self):
        return self.value


@lru_cache(maxsize=None)
def bernoulli_even(count: int = 20) -> tuple:
    """B_2, B_4, ..., B_{2*count} as exact fractions."""
    n_max = 2 * count
    B = [Fraction(1)]
    for m in range(1, n_max + 1):
        B.append(-sum(math.comb(m + 1, k) * B[k] for k in range(m)) / (m + 1))
    return tuple(B[2 * k] for k in range(1, count + 1))


def power_tail(s: float, M: int, terms: int = 10):
    """(sum_{m>=M} m^-s, d/ds of it) by Euler-Maclaurin."""
    logM = math.log(M)
    value = M ** (1 - s) / (s - 1) + 0.5 * M ** (-s)
    deriv = -logM * M ** (1 - s) / (s - 1) - M ** (1 - s) / (s - 1) ** 2 - 0.5 * logM * M ** (-s)
    B = bernoulli_even(terms)
    for k in range(1, terms + 1):
        rising = 1.0
        dlog = 0.0
        for i in range(2 * k - 1):
            rising *= s + i
            dlog += 1.0 / (s + i)
        c = float(B[k - 1]) / math.factorial(2 * k) * rising
        power = M ** (-s - 2 * k + 1)
        value += c * power
        deriv += c * power * (dlog - logM)
    return value, deriv


def _zeta_em(s: float, M: int = 20):
    n = np.arange(1, M, dtype=float)
    head = math.fsum(n ** (-s))
    dhead = -math.fsum(np.log(n) * n ** (-s))
    tail, dtail = power_tail(s, M)
    return head + tail, dhead + dtail


def zeta(s: float) -> float:
    """Riemann zeta for real s > 1."""
    if not s > 1:
        raise ValueError("zeta needs s > 1")
    return _zeta_em(s)[0]


@lru_cache(maxsize=None)
def zeta_prime_2_estimate() -> Estimate:
    a = _zeta_em(2.0, 20)[1]
    b = _zeta_em(2.0, 40)[1]
    return Estimate(b, max(abs(a - b), 1e-15), 2)


def zeta_prime_2() -> float:
    """zeta'(2) = -sum log(n)/n^2."""
    return zeta_prime_2_estimate().value


def _gamma_em(M: int) -> float:
    n = np.arange(1, M + 1, dtype=float)
    value = math.fsum(1.0 / n) - math.log(M) - 0.5 / M
    for k, b in enumerate(bernoulli_even(8), start=1):
        value += float(b) / (2 * k * M ** (2 * k))
    return value


@lru_cache(maxsize=None)
def euler_gamma_estimate() -> Estimate:
    a, b = _gamma_em(50), _gamma_em(100)
    return Estimate(b, max(abs(a - b), 1e-16), 2)


def euler_gamma() -> float:
    return euler_gamma_estimate().value


def digamma(y):
    """psi(y) for y > 0 by upward recurrence past 10, then the asymptotic series."""
    arr = np.asarray(y, dtype=float)
    if np.any(arr <= 0):
        raise ValueError("digamma needs y > 0")
    z = arr.copy()
    shift = np.zeros_like(z)
    while True:
        low = z < 10
        if not np.any(low):
            break
        shift = shift + np.where(low, 1.0 / np.where(low, z, 1.0), 0.0)
        z = np.where(low, z + 1, z)
    inv2 = 1.0 / (z * z)
    series = np.zeros_like(z)
    for k, b in reversed(list(enumerate(bernoulli_even(8), start=1))):
        series = series * inv2 + float(b) / (2 * k)
    out = np.log(z) - 0.5 / z - series * inv2 - shift
    return float(out) if np.ndim(y) == 0 else out


def richardson(xs, values, exponents):
    """Extrapolate S(x) = L + sum_j c_j x^e_j to x -> infinity.

    Uses the last len(exponents) + 1 points; the error estimate compares
    with the fit that drops the last exponent and the first point.
    """
    xs = np.asarray(xs, dtype=float)
    values = np.asarray(values, dtype=float)

    def fit(es):
        k = len(es) + 1
        x, v = xs[-k:], values[-k:]
        cols = [np.ones(k)] + [(x / x[-1]) ** e for e in es]
        return float(np.linalg.solve(np.column_stack(cols), v)[0])

    best = fit(list(exponents))
    rough = fit(list(exponents)[:-1]) if len(exponents) > 1 else float(values[-1])
    return Estimate(best, abs(best - rough))


_GL_CACHE = {}


def _gauss_legendre(order):
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def unit_interval_partials(f, X_list, order: int = 16, chunk: int = 1 << 15):
    """Integrals of f over [1, X] for each integer X in X_list.

    f(x, n) receives nodes x in (n, n+1) with n = floor(x) broadcast
    alongside, so floor and fractional parts are exact per panel.
    """
    xg, wg = _gauss_legendre(order)
    theta = 0.5 * (xg + 1.0)
    X_list = [int(X) for X in X_list]
    X_max = max(X_list)
    per = np.empty(X_max - 1)
    for start in range(1, X_max, chunk):
        n = np.arange(start, min(start + chunk, X_max), dtype=float)[:, None]
        per[start - 1:start - 1 + n.shape[0]] = 0.5 * (f(n + theta, n) @ wg)
    cum = np.cumsum(per)
    return [float(cum[X - 2]) if X > 1 else 0.0 for X in X_list]


def improper_unit_integral(f, exponents, X0: int = 64, levels: int = 7,
                           order: int = 16) -> Estimate:
    """Integral of f over [1, infinity) whose tail has the given power exponents."""
    X_list = [X0 * 2**k for k in range(levels)]
    partials = unit_interval_partials(f, X_list, order)
    return richardson(X_list, partials, exponents[: levels - 1])


# -- order-one constants ---------------------------------------------------

@lru_cache(maxsize=None)
def c_thm1_estimate() -> Estimate:
    g = euler_gamma()
    z = zeta_prime_2()
    direct = (2 / PI) * (g + math.log(PI**2 / 6) - 12 * z / PI**2 - 1)
    # second route: the |cot| case of the unsigned constant, rescaled by 1/pi,
    # with gamma from -psi(1) and zeta'(2) at doubled truncation
    g2 = -digamma(1.0)
    z2 = _zeta_em(2.0, 40)[1]
    via_cor = 2 * (g2 + math.log(PI / 3) - 12 * z2 / PI**2 - 1) - 2 * math.log(2 / PI)
    other = via_cor / PI
    return Estimate(direct, max(abs(direct - other), 1e-15), 2)


def const_c_thm1() -> float:
    return c_thm1_estimate().value


def const_c_j(g_integral: float = 0.0) -> float:
    return (euler_gamma() + math.log(2 * PI / 3) - 12 * zeta_prime_2() / PI**2 - 1
            - g_integral)


def const_c_cor(g_integral: float = 0.0) -> float:
    return (2 * (euler_gamma() + math.log(PI / 3) - 12 * zeta_prime_2() / PI**2 - 1)
            - g_integral)


def _kappa_bracket_sum(M: int) -> float:
    """sum_m (log(1+1/(2m^2))/m^2 - 2 log(1+1/(2m^2+1))) with an asymptotic tail."""
    m = np.arange(1, M + 1, dtype=float)
    head = math.fsum(np.log1p(0.5 / m**2) / m**2 - 2 * np.log1p(1 / (2 * m**2 + 1)))
    # term = -1/m^2 + 5/(4 m^4) + O(m^-6)
    return head - power_tail(2.0, M + 1)[0] + 1.25 * power_tail(4.0, M + 1)[0]


@lru_cache(maxsize=None)
def kappa_series_estimate() -> Estimate:
    a = _kappa_bracket_sum(50_000)
    b = _kappa_bracket_sum(100_000)
    value = ZETA2 / LOG2 + b / LOG2
    return Estimate(value, max(abs(a - b) / LOG2, 1e-14))


def W(y: float, method: str = "closed_form") -> float:
    """W(y) = (1+y) int_1^inf (R(x+y) - R(floor x))/(x+y)^2 dx on y in [0, 1]."""
    if not 0 <= y <= 1:
        raise ValueError("W is defined on [0, 1]")
    if method == "closed_form":
        return float(_W_closed(np.array([float(y)]))[0])
    if method == "quadrature":
        return W_quadrature(y).value
    raise ValueError(f"unknown method {method!r}")


def _W_closed(y, M: int = 20_000):
    """Closed form of W with sum_{n=2}^{2m^2} 1/(n+y) = psi(2m^2+1+y) - psi(2+y).

    The psi(2+y) parts cancel against the (pi^2/6)(1 + psi(1+y) + 1/(1+y))
    term, leaving a series with terms -1/m^2 + (u - 1/4)/m^4 + ..., u = 1+y.
    """
    y = np.asarray(y, dtype=float)[:, None]
    m = np.arange(1, M + 1, dtype=float)[None, :]
    two_m2 = 2 * m * m
    terms = (digamma(two_m2 + 1 + y) - np.log(two_m2)) / (m * m) - 2 / (two_m2 + 1 + y)
    u = 1 + y[:, 0]
    head = np.array([math.fsum(row) for row in terms])
    tail = -power_tail(2.0, M + 1)[0] + (u - 0.25) * power_tail(4.0, M + 1)[0]
    return (1 + y[:, 0]) * (ZETA2 + head + tail)


def _W_partials(y: float, M_list, order: int = 12):
    """int_1^{2M^2} (R(x+y) - R(floor x))/(x+y)^2 dx for each M, panel by panel."""

    R = RTable(1.0, 4096)
    xg, wg = _gauss_legendre(order)
    X_list = [2 * M * M for M in M_list]
    X_max = max(X_list)
    per = np.empty(X_max - 1)
    chunk = 1 << 15
    for start in range(1, X_max, chunk):
        n = np.arange(start, min(start + chunk, X_max), dtype=float)
        # kink where x + y crosses 2 m^2 inside (n, n+1)
        m_next = R.count(n + 1 + y) if y > 0 else R.count(n + 1)
        kink = 2.0 * m_next**2 - y
        has = (y > 0) & (kink > n) & (kink < n + 1)
        split = np.where(has, kink, n + 1.0)
        Rn = R(n)
        total = np.zeros_like(n)
        for a, b in ((n, split), (split, n + 1.0)):
            half = 0.5 * (b - a)
            x = (a + half)[:, None] + half[:, None] * xg[None, :]
            vals = (R(x + y) - Rn[:, None]) / (x + y) ** 2
            total += half * (vals @ wg)
        per[start - 1:start - 1 + n.size] = total
    cum = np.cumsum(per)
    return [float(cum[X - 2]) for X in X_list]


@lru_cache(maxsize=None)
def W_quadrature(y: float) -> Estimate:
    M_list = [32 * 2**k for k in range(6)]
    partials = _W_partials(float(y), M_list)
    est = richardson(M_list, partials, [-2, -3, -4, -5, -6])
    return Estimate((1 + y) * est.value, (1 + y) * est.error)


@lru_cache(maxsize=None)
def kappa_via_W_estimate(nodes: int = 24) -> Estimate:
    """(1/log 2) int_0^1 W(y)/(1+y) dy with the closed-form W."""
    xg, wg = _gauss_legendre(nodes)
    y = 0.5 * (xg + 1)
    value = 0.5 * float(np.dot(wg, _W_closed(y) / (1 + y))) / LOG2
    xg2, wg2 = _gauss_legendre(nodes // 2)
    y2 = 0.5 * (xg2 + 1)
    rough = 0.5 * float(np.dot(wg2, _W_closed(y2) / (1 + y2))) / LOG2
    return Estimate(value, abs(value - rough))


def kappa(route: str = "series") -> float:
    """kappa = lim E(R(u_k) - R(a_k))."""
    if route == "series":
        return kappa_series_estimate().value
    if route == "W_integral":
        return kappa_via_W_estimate().value
    raise ValueError(f"unknown route {route!r}")


def _kappa_prime_sum_direct(M: int) -> float:
    """sum_m (log(2m^2+1)/m^2 - 2 log((2m^2+2)/(2m^2+1))) summed term by term."""
    m = np.arange(1, M + 1, dtype=float)
    head = math.fsum(np.log(2 * m**2 + 1) / m**2 - 2 * np.log1p(1 / (2 * m**2 + 1)))
    t2, dt2 = power_tail(2.0, M + 1)
    # term = (log 2 - 1 + 2 log m)/m^2 + 5/(4 m^4) + O(log m / m^6)
    return head + (LOG2 - 1) * t2 - 2 * dt2 + 1.25 * power_tail(4.0, M + 1)[0]


def _kappa_prime_sum_via_kappa() -> float:
    return LOG2 * ZETA2 - 2 * zeta_prime_2() + _kappa_bracket_sum(100_000)


@lru_cache(maxsize=None)
def kappa_prime_sum_estimate() -> Estimate:
    a = _kappa_prime_sum_direct(100_000)
    b = _kappa_prime_sum_via_kappa()
    c = _kappa_prime_sum_direct(50_000)
    return Estimate(a, max(abs(a - b), abs(a - c), 1e-14), 2)


def kappa_prime() -> float:
    s = kappa_prime_sum_estimate().value
    return ZETA2 / LOG2 * (euler_gamma() + math.log(ZETA2)) + s / LOG2


def kappa_double_prime() -> float:
    s = kappa_prime_sum_estimate().value
    return (PI**2 / (12 * LOG2) * (euler_gamma() + math.log(4 * LOG2 / PI))
            + s / (2 * LOG2))


# -- constants for p > 1 ---------------------------------------------------

def _check_domain(p: float, lo: float, hi: float, name: str, lo_closed=False):
    ok = (lo <= p if lo_closed else lo < p) and p < hi
    if not ok:
        left = "[" if lo_closed else "("
        raise ValueError(f"{name} is defined only for p in {left}{lo}, {hi})")


def _h(x, p):
    """x^p log(1 + 1/(x(x+2)))."""
    return x**p * np.log1p(1.0 / (x * (x + 2)))


def _h_prime(x, p):
    return x ** (p - 1) * (p * np.log1p(1.0 / (x * (x + 2))) - 2.0 / ((x + 1) * (x + 2)))


@lru_cache(maxsize=None)
def _I1(p: float) -> Estimate:
    """int_1^inf (x^p - floor(x)^p + x^(p-1)) / (x^2 + x) dx."""
    f = lambda x, n: (x**p - n**p + x ** (p - 1)) / (x * x + x)
    return improper_unit_integral(f, [p - 2 - j for j in range(6)])


@lru_cache(maxsize=None)
def _I2(p: float) -> Estimate:
    """int_1^inf x^(p-2) (6x + 4) / ((x+1)(x+2)) dx."""
    f = lambda x, n: x ** (p - 2) * (6 * x + 4) / ((x + 1) * (x + 2))
    return improper_unit_integral(f, [p - 2 - j for j in range(6)])


@lru_cache(maxsize=None)
def _I3(p: float) -> Estimate:
    """int_1^inf ({x} - 1/2) h'(x) dx with h(x) = x^p log(1 + 1/(x(x+2)))."""
    f = lambda x, n: (x - n - 0.5) * _h_prime(x, p)
    return improper_unit_integral(f, [p - 3 - j for j in range(6)])


def d_p(p: float) -> float:
    _check_domain(p, 1, 2, "d_p")
    return 1 / ((p - 1) * LOG2) + _I1(p).value / LOG2


def B_p(p: float) -> float:
    _check_domain(p, 1, 2, "B_p")
    return _I1(p).value - _I2(p).value / (p + 1) + _I3(p).value


def c_p(p: float) -> float:
    """Centering constant of the p-power theorem, 1 < p < 2."""
    _check_domain(p, 1, 2, "c_p")
    return 6 * zeta(2 * p) / PI**2 * (1 / (p + 1) + (p - 1) / (2 * (p + 1)) * math.log(4 / 3)
                                      + B_p(p))


@lru_cache(maxsize=None)
def h_limit(p: float) -> Estimate:
    """lim_N (N^(p-1)/(p-1) - sum_{n<=N} n^p log(1 + 1/(n(n+2)))), summed directly."""
    N_list = [512 * 2**k for k in range(7)]
    n = np.arange(1, N_list[-1] + 1, dtype=float)
    cum = np.cumsum(_h(n, p))
    D = [N ** (p - 1) / (p - 1) - cum[N - 1] for N in N_list]
    return richardson(N_list, D, [p - 2 - j for j in range(6)])


@lru_cache(maxsize=None)
def _S_p(p: float, M: int = 2000) -> Estimate:
    """sum_m m^(-2p) sum_{n<=2m^2} n^p log(1 + 1/(n(n+2)))."""
    L = h_limit(p).value
    n = np.arange(1, 2 * M * M + 1, dtype=float)
    H = np.cumsum(_h(n, p))
    m = np.arange(1, M + 1)
    N = 2.0 * m * m
    E = H[2 * m * m - 1] - N ** (p - 1) / (p - 1) + L
    rest = m.astype(float) ** (-2 * p) * E
    # E(N) ~ b N^(p-2), so rest_m ~ b 2^(p-2) m^-4
    b = float(E[-1]) * N[-1] ** (2 - p)
    tail = b * 2 ** (p - 2) * power_tail(4.0, M + 1)[0]
    value = 2 ** (p - 1) / (p - 1) * ZETA2 - L * zeta(2 * p) + math.fsum(rest) + tail
    return Estimate(value, abs(tail) + 1e-12)


def kappa_p(p: float) -> float:
    _check_domain(p, 1, 2, "kappa_p")
    return (-PI**2 / (12 * LOG2) * 2**p / (p - 1) + _S_p(p).value / LOG2
            + zeta(2 * p) / LOG2 * h_limit(p).value)


def kappa_p_prime(p: float) -> float:
    _check_domain(p, 1, 2, "kappa_p_prime")
    return zeta(2 * p) * d_p(p) + _S_p(p).value / LOG2


def c_p_via_kappas(p: float) -> float:
    """(6 log 2/pi^2)(kappa_p' - kappa_p) - 2^(p-1)/(p-1)."""
    _check_domain(p, 1, 2, "c_p")
    return 6 * LOG2 / PI**2 * (kappa_p_prime(p) - kappa_p(p)) - 2 ** (p - 1) / (p - 1)


@lru_cache(maxsize=None)
def _m_p_estimate(p: float) -> Estimate:
    N_list = [512 * 2**k for k in range(7)]
    n = np.arange(1, N_list[-1] + 1, dtype=float)
    cum = np.cumsum(_h(n, p) - n ** (p - 2))
    est = richardson(N_list, [cum[N - 1] for N in N_list], [p - 2 - j for j in range(6)])
    return Estimate((zeta(2 - p) + est.value) / LOG2, est.error / LOG2)


def m_p(p: float) -> float:
    """(1/log 2) sum_n n^p log(1 + 1/(n(n+2))), the mean of a_k^p, 1/2 <= p < 1."""
    _check_domain(p, 0.5, 1, "m_p", lo_closed=True)
    return _m_p_estimate(p).value


def sigma_p(p: float) -> float:
    """zeta(2p) ((6/pi^2) cos(pi/(2p)) Gamma(1 - 1/p))^p."""
    _check_domain(p, 1, math.inf, "sigma_p")
    return zeta(2 * p) * (6 / PI**2 * math.cos(PI / (2 * p)) * math.gamma(1 - 1 / p)) ** p


def sigma_ak_power(p: float) -> float:
    """((1/(2 log 2)) cos(pi/(2p)) Gamma(1 - 1/p))^p, the scale for sums of a_k^p."""
    _check_domain(p, 1, math.inf, "sigma_ak_power")
    return (math.cos(PI / (2 * p)) * math.gamma(1 - 1 / p) / (2 * LOG2)) ** p


def sigma_cot3() -> float:
    return 64 / (35 * math.gamma(1 / 3) ** 3)


def c_p_or_zero(p: float) -> float:
    return c_p(p) if 1 < p < 2 else 0.0


# -- centerings ------------------------------------------------------------

CENTERINGS = ("thm1", "main", "cor", "p_theorem", "p_cor", "sum_ak", "sum_R_ak",
              "sum_ak_power")


def centering(kind: str, n: int, p: float = 1.0, g_integral: float = 0.0) -> float:
    """The displayed centering E_N, E_{j,N}, c log N or A_K of each law."""
    if kind in ("thm1", "main", "cor"):
        if n < 3:
            raise ValueError("log log N needs N >= 3")
        L = math.log(n)
        LL = math.log(L)
        if kind == "thm1":
            return L * L / PI + 2 / PI * L * LL - const_c_thm1() * L
        if kind == "main":
            return 0.5 * L * L + L * LL - const_c_j(g_integral) * L
        return L * L + 2 * L * LL - const_c_cor(g_integral) * L
    if kind in ("p_theorem", "p_cor"):
        if n < 2:
            raise ValueError("N must be at least 2")
        c = c_p_or_zero(p) * math.log(n)
        return c if kind == "p_theorem" else 2 * c
    if n < 1:
        raise ValueError("K must be at least 1")
    K = float(n)
    if kind == "sum_ak":
        return (K * math.log(K) + (math.log(PI / (2 * LOG2)) - euler_gamma()) * K) / LOG2
    if kind == "sum_R_ak":
        return PI**2 / (12 * LOG2) * K * math.log(K) - kappa_double_prime() * K
    if kind == "sum_ak_power":
        if not p > 1:
            raise ValueError("power sums need p > 1")
        if p < 2:
            return d_p(p) / 2 * K
        if p == 2:
            return K * math.log(K) / LOG2
        return 0.0
    raise ValueError(f"unknown centering {kind!r}")


# -- small-t behaviour of Gauss-measure characteristic functions -----------------

def gauss_expectation(values, t: float, n_max: int = 2_000_000, chunk: int = 1 << 20) -> complex:
    """E(exp(i t V(a_1)) - 1) under the Gauss measure, by direct pmf summation.

    `values` maps a float array of partial quotients to V.  The mass beyond
    n_max enters only through the exact tail weight; its oscillating part is
    dropped, which costs far less than the error terms being measured.
    """
    re = im = 0.0
    for start in range(1, n_max + 1, chunk):
        n = np.arange(start, min(start + chunk, n_max + 1), dtype=float)
        w = np.log1p(1.0 / (n * (n + 2))) / LOG2
        phase = t * values(n)
        re += math.fsum(w * (np.cos(phase) - 1.0))
        im += math.fsum(w * np.sin(phase))
    # P(a_1 > n_max) = log2(1 + 1/(n_max + 1))
    return complex(re - math.log1p(1.0 / (n_max + 1)) / LOG2, im)


def power_char(t: float, p: float, n_max: int = 2_000_000) -> complex:
    """E(exp(i t a_1^p) - 1) under the Gauss measure."""
    return gauss_expectation(lambda n: n**p, t, n_max)


def power_char_expansion(t: float, p: float) -> complex:
    """Leading small-t terms of power_char, |t| <= 1/2 and p > 1."""
    if not p > 1:
        raise ValueError("the expansion needs p > 1")
    if t == 0:
        return 0j
    s = math.copysign(1.0, t)
    main = (-math.cos(PI / (2 * p)) * math.gamma(1 - 1 / p) * abs(t) ** (1 / p)
            * complex(1.0, -s * math.tan(PI / (2 * p))) / LOG2)
    if p < 2:
        H = 1j * d_p(p) * t
    elif p == 2:
        H = 1j * t * math.log(1 / abs(t)) / LOG2
    else:
        H = 0j
    return main - H


def power_char_error_scale(t: float, p: float) -> float:
    """Size of the remainder in power_char_expansion."""
    return abs(t) ** (2 / p) if p <= 2 else abs(t) ** (1 / (p - 1))


def w_char(t: float, n_max: int = 2_000_000) -> complex:
    """w(t) = E(exp(i t R(a_1)) - 1) under the Gauss measure."""
    return gauss_expectation(RTable(1.0), t, n_max)


def w_char_expansion(t: float) -> complex:
    """Leading small-t terms of w(t); the remainder is O(|t|^(3/2))."""
    if t == 0:
        return 0j
    return complex(-PI**3 / (12 * LOG2) * abs(t),
                   -PI**2 / (6 * LOG2) * t * math.log(abs(t)) - kappa_prime() * t)


# -- the table -------------------------------------------------------------

def constants_table() -> list:
    """Every constant with its error estimate and number of routes."""
    rows = []

    def add(name, value, error, routes):
        rows.append({"name": name, "value": float(value), "error_estimate": float(error),
                     "route_count": int(routes)})

    g = euler_gamma_estimate()
    add("gamma_euler", g.value, g.error, g.routes)
    z = zeta_prime_2_estimate()
    add("zeta_prime_2", z.value, z.error, z.routes)
    c = c_thm1_estimate()
    add("c_thm1", c.value, c.error, c.routes)
    add("c_j(0)", const_c_j(0.0), c.error, 1)
    add("c_cor(0)", const_c_cor(0.0), c.error, 1)
    ks, kw = kappa_series_estimate(), kappa_via_W_estimate()
    add("kappa", ks.value, max(ks.error, abs(ks.value - kw.value)), 2)
    sp = kappa_prime_sum_estimate()
    add("kappa_prime", kappa_prime(), sp.error / LOG2, 2)
    add("kappa_double_prime", kappa_double_prime(), sp.error / (2 * LOG2), 2)
    for p in (1.25, 1.5):
        e1, e2, e3 = _I1(p).error, _I2(p).error, _I3(p).error
        add(f"d_p({p:g})", d_p(p), e1 / LOG2, 1)
        add(f"B_p({p:g})", B_p(p), e1 + e2 + e3, 1)
        a, b = c_p(p), c_p_via_kappas(p)
        add(f"c_p({p:g})", a, max(abs(a - b), e1 + e2 + e3), 2)
        add(f"kappa_p({p:g})", kappa_p(p), _S_p(p).error + h_limit(p).error, 1)
        add(f"kappa_p_prime({p:g})", kappa_p_prime(p), _S_p(p).error + e1, 1)
    add("m_p(0.75)", m_p(0.75), _m_p_estimate(0.75).error, 1)
    for p in (2.0, 3.0):
        add(f"sigma_p({p:g})", sigma_p(p), 1e-15, 1)
    s3 = sigma_cot3()
    add("sigma_cot3", s3, abs(s3 - 8 * sigma_p(3.0) / PI**3), 2)
    return rows
