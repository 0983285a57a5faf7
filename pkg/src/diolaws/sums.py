"""Diophantine and cotangent sums, their near/far split, and R_p."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .cf import Angle, ContinuedFraction, cf_expand, u_value

KERNELS = ("signed_reciprocal", "unsigned_reciprocal", "positive_part",
           "negative_part", "cot", "abs_cot", "signed_power", "unsigned_power")
ORDER_ONE = {"signed_reciprocal", "unsigned_reciprocal", "positive_part",
             "negative_part", "cot", "abs_cot"}


class SingularTermError(ArithmeticError):
    def __init__(self, n: int):
        super().__init__(f"singular term at n={n}")
        self.n = n


@dataclass(frozen=True)
class GFunction:
    """A 1-periodic bounded part g, evaluated on the signed distance <x>."""

    name: str
    func: Callable
    integral: float
    growth: float = 0.0

    def __call__(self, d):
        return self.func(d)


def _frac_from_signed(d):
    d = np.asarray(d, dtype=float)
    return np.where(d >= 0, d, d + 1.0)


def cot_remainder(d):
    """pi cot(pi x) - 1/<x>, given d = <x>."""
    d = np.asarray(d, dtype=float)
    small = np.abs(d) < 1e-4
    safe = np.where(small | (d == 0), 0.25, d)
    out = np.pi / np.tan(np.pi * safe) - 1.0 / safe
    series = -(np.pi**2) * d / 3 - (np.pi**4) * d**3 / 45
    out = np.where(small, series, out)
    return np.where(d == 0.5, -2.0, out)


def abs_cot_remainder(d):
    """pi |cot(pi x)| - 1/||x||, given d = <x>."""
    return cot_remainder(np.abs(d))


G_FUNCTIONS = {
    "zero": GFunction("zero", lambda d: np.zeros_like(np.asarray(d, dtype=float)), 0.0),
    "frac": GFunction("frac", _frac_from_signed, 0.5),
    "cot_remainder": GFunction("cot_remainder", cot_remainder, 0.0),
    "abs_cot_remainder": GFunction("abs_cot_remainder", abs_cot_remainder,
                                   2.0 * math.log(2.0 / math.pi)),
}


@dataclass(frozen=True)
class SumKind:
    kernel: str
    p: float = 1.0
    g: Optional[GFunction] = field(default=None)

    def __post_init__(self):
        if self.kernel not in KERNELS:
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if self.kernel in ORDER_ONE and self.p != 1:
            raise ValueError(f"kernel {self.kernel} has p = 1")
        if self.kernel not in ORDER_ONE and not self.p > 1:
            raise ValueError("power kernels need p > 1")
        if self.g is not None and not self.g.growth < self.p:
            raise ValueError("growth exponent of g must be below p")

    @property
    def exact_capable(self) -> bool:
        return (self.kernel not in ("cot", "abs_cot") and self.g is None
                and float(self.p).is_integer())


def _power(x, p):
    if isinstance(x, Fraction) and float(p).is_integer():
        return x ** int(p)
    return float(x) ** p


def _kernel_value(kernel: str, d: Fraction, p):
    if kernel == "cot":
        if d == Fraction(1, 2):
            return 0.0
        return 1.0 / math.tan(math.pi * float(d))
    if kernel == "abs_cot":
        if d == Fraction(1, 2):
            return 0.0
        return abs(1.0 / math.tan(math.pi * float(d)))
    if kernel == "signed_reciprocal":
        return 1 / d
    if kernel == "unsigned_reciprocal":
        return 1 / abs(d)
    if kernel == "positive_part":
        return 1 / d if d > 0 else 0
    if kernel == "negative_part":
        return 1 / -d if d < 0 else 0
    if kernel == "signed_power":
        v = 1 / _power(abs(d), p)
        return v if d > 0 else -v
    return 1 / _power(abs(d), p)


def direct_sum(alpha: Angle, N: int, kind: SumKind):
    """Plain accumulation of sum_{n<=N} f(n alpha)/n^p.

    Exact rational when the kernel is algebraic with integer p and g is
    absent; floating kernels are summed from large n down to small n.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    exact = kind.exact_capable
    p = kind.p
    terms = []
    for n in range(1, N + 1):
        d = alpha.signed_frac(n)
        if d == 0:
            raise SingularTermError(n)
        value = _kernel_value(kind.kernel, d, p)
        if kind.g is not None:
            value = float(value) + float(kind.g(float(d)))
        terms.append(value / _power(Fraction(n), p) if exact else float(value) / n**p)
    if exact:
        return sum(terms, Fraction(0))
    return math.fsum(reversed(terms)) if len(terms) > 0 else 0.0


def split_sum(alpha: Angle, N: int, sign: str, p=1):
    """(near, far) parts of the one-sided sum; near means |<n alpha>| < 1/(2n)."""
    if sign not in ("positive", "negative"):
        raise ValueError("sign must be 'positive' or 'negative'")
    exact = float(p).is_integer()
    zero = Fraction(0) if exact else 0.0
    near, far = zero, zero
    for n in range(1, N + 1):
        d = alpha.signed_frac(n)
        if d == 0:
            raise SingularTermError(n)
        if (d > 0) != (sign == "positive"):
            continue
        dist = abs(d)
        if exact:
            term = 1 / (Fraction(n) * dist) ** int(p)
        else:
            term = 1.0 / (n * float(dist)) ** p
        if 2 * n * dist < 1:
            near += term
        else:
            far += term
    return near, far


def _count_j(x) -> int:
    """Number of integers j >= 1 with 2 j^2 < x."""
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        a, b = x.numerator, x.denominator
        if a <= 0:
            return 0
        return math.isqrt((a - 1) // (2 * b))
    m = max(int(math.isqrt(int(x / 2))) - 1, 0)
    while 2 * (m + 1) ** 2 < x:
        m += 1
    return m


def R_func(x, p=1):
    """R_p(x) = sum over 1 <= j < sqrt(x/2) of x^p / j^(2p)."""
    if not x > 0:
        raise ValueError("R is defined for x > 0")
    exact = isinstance(x, (int, Fraction)) and float(p).is_integer()
    total = Fraction(0) if exact else 0.0
    j = 1
    while 2 * j * j < x:
        if exact:
            total += Fraction(x) ** int(p) / j ** (2 * int(p))
        else:
            total += float(x) ** p / j ** (2 * p)
        j += 1
    return total


def R_piecewise(x, p=1):
    """R_p via r_{m,p} x^p on (2m^2, 2(m+1)^2]."""
    if not x > 0:
        raise ValueError("R is defined for x > 0")
    m = _count_j(x)
    if isinstance(x, (int, Fraction)) and float(p).is_integer():
        r = sum((Fraction(1, j ** (2 * int(p))) for j in range(1, m + 1)), Fraction(0))
        return r * Fraction(x) ** int(p)
    r = math.fsum(1.0 / j ** (2 * p) for j in range(1, m + 1))
    return r * float(x) ** p


class RTable:
    """Vectorized R_p on floats using cumulative sums of j^(-2p)."""

    def __init__(self, p: float = 1.0, m_max: int = 1024):
        self.p = p
        self._grow(m_max)

    def _grow(self, m_max):
        j = np.arange(1, m_max + 1, dtype=float)
        self.r = np.concatenate(([0.0], np.cumsum(j ** (-2 * self.p))))
        self.m_max = m_max

    def count(self, x):
        x = np.asarray(x, dtype=float)
        m = np.floor(np.sqrt(np.maximum(x, 0.0) / 2)).astype(np.int64)
        m = np.where(2.0 * m * m >= x, m - 1, m)
        m = np.where(2.0 * (m + 1) * (m + 1) < x, m + 1, m)
        return np.maximum(m, 0)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        m = self.count(x)
        top = int(m.max()) if m.size else 0
        if top > self.m_max:
            self._grow(max(top, 2 * self.m_max))
        return self.r[m] * x**self.p


def block_sum_via_R(cf: ContinuedFraction, alpha: Angle, k: int, sign: str, p=1):
    """Near-sum of the block q_k <= n < q_{k+1} as predicted by R_p(u_{k+1})."""
    if sign not in ("positive", "negative"):
        raise ValueError("sign must be 'positive' or 'negative'")
    if not 0 <= k < len(cf):
        raise IndexError(f"block index {k} out of range 0..{len(cf) - 1}")
    wanted = 0 if sign == "positive" else 1
    if k % 2 != wanted:
        return Fraction(0) if float(p).is_integer() else 0.0
    u = u_value(cf, alpha, k + 1)
    return R_func(u, int(p) if float(p).is_integer() else p)


def _near_indices(alpha: Angle, lo: int, hi: int):
    """Indices n in [lo, hi) with 0 < |<n alpha>| < 1/(2n), split by sign."""
    A, Q = alpha.numerator, alpha.denominator
    pos, neg = [], []
    step = 1 << 20
    for start in range(lo, hi, step):
        stop = min(hi, start + step)
        if Q * stop < (1 << 62):
            n = np.arange(start, stop, dtype=np.int64)
            r = (n * A) % Q
            near_pos = (r > 0) & (2 * n * r < Q)
            s = Q - r
            near_neg = (2 * r > Q) & (2 * n * s < Q)
            pos.extend(int(v) for v in n[near_pos])
            neg.extend(int(v) for v in n[near_neg])
        else:
            for n in range(start, stop):
                r = (n * A) % Q
                if r and 2 * n * r < Q:
                    pos.append(n)
                elif 2 * r > Q and 2 * n * (Q - r) < Q:
                    neg.append(n)
    return pos, neg


def near_block_sum(alpha: Angle, lo: int, hi: int, sign: str, p=1):
    """Exact enumeration of the near-sum over lo <= n < hi."""
    pos, neg = _near_indices(alpha, lo, hi)
    total = Fraction(0)
    for n in (pos if sign == "positive" else neg):
        total += 1 / (Fraction(n) * abs(alpha.signed_frac(n))) ** int(p)
    return total


@dataclass
class BlockReport:
    alpha: Angle
    p: float
    blocks_checked: int
    mismatches: list

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        if self.ok:
            return f"all blocks exact ({self.blocks_checked} blocks, p={self.p:g})"
        return f"{len(self.mismatches)} of {self.blocks_checked} blocks differ"


def verify_block_identity(alpha: Angle, p=1) -> BlockReport:
    """Compare exact near-sums per complete block with the R_p prediction."""
    if alpha.dyadic:
        raise ValueError("block identity check needs a rational angle")
    if not float(p).is_integer():
        raise ValueError("exact block check needs an integer p")
    cf = cf_expand(alpha, 10**6)
    mismatches = []
    checked = 0
    for k in range(len(cf)):
        lo, hi = cf.q[k], cf.q[k + 1]
        if hi > alpha.denominator:
            break
        for sign in ("positive", "negative"):
            exact = near_block_sum(alpha, lo, hi, sign, p)
            predicted = block_sum_via_R(cf, alpha, k, sign, p)
            if exact != predicted:
                mismatches.append((k, sign, exact, predicted))
        checked += 1
    return BlockReport(alpha, p, checked, mismatches)


def legendre_violations(alpha: Angle) -> list:
    """n below the denominator with ||n alpha|| < 1/(2n) that are not
    multiples of a convergent denominator (always empty by Legendre)."""
    cf = cf_expand(alpha, 10**6)
    pos, neg = _near_indices(alpha, 1, alpha.denominator)
    qs = [q for q in cf.q if q >= 1]
    return [n for n in sorted(pos + neg) if not any(n % q == 0 for q in qs)]


def zeta_ak_power_sum(cf: ContinuedFraction, K: int, p: float, parity: str):
    """(zeta(2p) * sum of a_k^p over k <= K of the given parity, sum_{k<=K} a_k^(p-1))."""
    from .constants import zeta

    if parity not in ("odd", "even"):
        raise ValueError("parity must be 'odd' or 'even'")
    if not p > 1:
        raise ValueError("p must exceed 1")
    if not 0 <= K <= len(cf):
        raise IndexError(f"K = {K} out of range 0..{len(cf)}")
    start = 1 if parity == "odd" else 2
    a = cf.partial_quotients
    main = math.fsum(a[k - 1] ** p for k in range(start, K + 1, 2))
    bound = math.fsum(a[k - 1] ** (p - 1) for k in range(1, K + 1))
    return zeta(2 * p) * main, bound


def g_integral(g: Callable, nodes: int = 200) -> float:
    """Integral of g over one period, by Gauss-Legendre panels on (-1/2, 1/2)."""
    x, w = np.polynomial.legendre.leggauss(20)
    edges = np.linspace(-0.5, 0.5, nodes // 10 + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        total += 0.5 * (b - a) * float(np.dot(w, g(0.5 * (b - a) * x + 0.5 * (a + b))))
    return total
