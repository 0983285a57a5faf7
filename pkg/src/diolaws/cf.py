"""Continued fractions and exact arithmetic on the circle.

Angles are either reduced rationals or 128-bit dyadic fractions, so the
fractional part of n*alpha is always computed without rounding.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

DYADIC_BITS = 128
DYADIC_ONE = 1 << DYADIC_BITS
_MASK = DYADIC_ONE - 1

# 12 log 2 / pi^2, the growth rate of log q_k
LEVY_RATE = 12.0 * math.log(2.0) / math.pi**2

Real = Union[int, float, Fraction]


class ExpansionTooShort(ValueError):
    """Raised when an expansion ends before the requested index."""

    def __init__(self, message: str, last_index: int):
        super().__init__(message)
        self.last_index = last_index


@dataclass(frozen=True)
class Angle:
    """A point of [0, 1): a reduced rational or a 128-bit dyadic fraction."""

    numerator: int
    denominator: int
    dyadic: bool = False

    def __post_init__(self):
        if self.dyadic:
            if self.denominator != DYADIC_ONE or not 0 <= self.numerator < DYADIC_ONE:
                raise ValueError("dyadic angle needs a 128-bit fraction")
        else:
            if self.denominator < 1:
                raise ValueError("denominator must be positive")
            if not 0 <= self.numerator < self.denominator:
                raise ValueError("rational angle must lie in [0, 1)")
            if math.gcd(self.numerator, self.denominator) != 1:
                raise ValueError("rational angle must be in lowest terms")

    @classmethod
    def rational(cls, p: int, q: int) -> "Angle":
        """Reduce p/q modulo 1."""
        if q == 0:
            raise ValueError("denominator must be nonzero")
        x = Fraction(p, q) % 1
        return cls(x.numerator, x.denominator)

    @classmethod
    def from_bits(cls, fraction: int) -> "Angle":
        return cls(fraction & _MASK, DYADIC_ONE, dyadic=True)

    @classmethod
    def from_float(cls, x: float) -> "Angle":
        """Nearest 128-bit dyadic to x mod 1 (exact for binary floats)."""
        frac = Fraction(x) % 1
        return cls.from_bits(round(frac * DYADIC_ONE))

    @classmethod
    def parse(cls, text: str) -> "Angle":
        """Parse 'p/q' as a rational and a decimal string as a dyadic."""
        text = text.strip()
        m = re.fullmatch(r"(-?\d+)\s*/\s*(\d+)", text)
        if m:
            return cls.rational(int(m.group(1)), int(m.group(2)))
        try:
            frac = Fraction(text) % 1
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse angle {text!r}") from None
        return cls.from_bits(round(frac * DYADIC_ONE))

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return self.numerator / self.denominator

    def frac_times(self, n: int) -> Fraction:
        """{n alpha} as an exact fraction."""
        return Fraction((n * self.numerator) % self.denominator, self.denominator)

    def signed_frac(self, n: int = 1) -> Fraction:
        """<n alpha> as an exact fraction."""
        r = (n * self.numerator) % self.denominator
        if 2 * r > self.denominator:
            r -= self.denominator
        return Fraction(r, self.denominator)

    def __str__(self) -> str:
        if self.dyadic:
            return f"{self.numerator}/2^128"
        return f"{self.numerator}/{self.denominator}"


def signed_frac(x: Real) -> Real:
    """Signed distance to the nearest integer, valued in (-1/2, 1/2]."""
    if isinstance(x, Angle):
        return x.signed_frac(1)
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return x - math.ceil(x - Fraction(1, 2))
    return x - math.ceil(x - 0.5)


def dist_nearest_int(x: Real) -> Real:
    return abs(signed_frac(x))


@dataclass(frozen=True)
class ContinuedFraction:
    """Partial quotients a_1..a_K with convergents p_0..p_K, q_0..q_K."""

    partial_quotients: tuple
    p: tuple
    q: tuple
    exhausted: bool

    def __len__(self):
        return len(self.partial_quotients)

    def a(self, k: int) -> int:
        """The 1-based partial quotient a_k."""
        if not 1 <= k <= len(self.partial_quotients):
            raise IndexError(f"partial quotient index {k} out of range")
        return self.partial_quotients[k - 1]

    @classmethod
    def from_quotients(cls, quotients, exhausted: bool = False) -> "ContinuedFraction":
        quotients = tuple(int(a) for a in quotients)
        if any(a < 1 for a in quotients):
            raise ValueError("partial quotients must be positive")
        p_prev, q_prev = 1, 0
        p_cur, q_cur = 0, 1
        ps, qs = [p_cur], [q_cur]
        for a in quotients:
            p_prev, p_cur = p_cur, a * p_cur + p_prev
            q_prev, q_cur = q_cur, a * q_cur + q_prev
            ps.append(p_cur)
            qs.append(q_cur)
        return cls(quotients, tuple(ps), tuple(qs), exhausted)


def cf_expand(alpha: Angle, max_terms: int) -> ContinuedFraction:
    """Canonical expansion by the Euclidean algorithm on the exact value."""
    if max_terms < 1:
        raise ValueError("max_terms must be at least 1")
    if alpha.numerator == 0:
        raise ValueError("zero angle has no partial quotients")
    h, k = alpha.numerator, alpha.denominator
    quotients = []
    while h and len(quotients) < max_terms:
        a, r = divmod(k, h)
        quotients.append(a)
        k, h = h, r
    return ContinuedFraction.from_quotients(quotients, exhausted=(h == 0))


def convergents(cf: ContinuedFraction) -> list:
    return list(zip(cf.p, cf.q))


def _full_expansion(alpha: Angle) -> ContinuedFraction:
    return cf_expand(alpha, 10 * DYADIC_BITS)


def u_value(cf: ContinuedFraction, alpha: Angle, k: int,
            method: str = "denominator_form") -> Fraction:
    """u_k by 1/(q_{k-1} |q_{k-1} alpha - p_{k-1}|) or by tail plus reversed head."""
    if not 1 <= k <= len(cf):
        raise IndexError(f"u index {k} out of range 1..{len(cf)}")
    if method == "denominator_form":
        # |q alpha - p| equals ||q alpha|| except at k = 1 with a_1 = 1, where
        # only the convergent form keeps the tail-plus-head identity
        q, p = cf.q[k - 1], cf.p[k - 1]
        return 1 / (q * abs(alpha.as_fraction() * q - p))
    if method == "tail_head_form":
        full = cf if cf.exhausted else _full_expansion(alpha)
        a = full.partial_quotients
        tail = Fraction(a[-1])
        for x in reversed(a[k - 1:-1]):
            tail = x + 1 / tail
        head = Fraction(0)
        for x in a[:k - 1]:
            head = 1 / (x + head)
        return tail + head
    raise ValueError(f"unknown method {method!r}")


def K_N_star(cf: ContinuedFraction, N: int) -> int:
    """The index K with q_K <= N < q_{K+1}."""
    if N < 1:
        raise ValueError("N must be at least 1")
    q = cf.q
    if q[-1] <= N:
        last = len(q) - 1
        why = "exhausted" if cf.exhausted else "truncated"
        raise ExpansionTooShort(
            f"expansion {why} at index {last} with q = {q[-1]} <= N = {N}", last)
    lo, hi = 0, len(q) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if q[mid] <= N:
            lo = mid
        else:
            hi = mid
    return lo


def K_N_deterministic(N: int) -> int:
    """Even integer nearest to (12 log 2 / pi^2) log N."""
    if N < 2:
        raise ValueError("N must be at least 2")
    return 2 * round(LEVY_RATE * math.log(N) / 2)


def gauss_pmf(n: int) -> float:
    """Probability that a partial quotient equals n under the Gauss measure."""
    if n < 1:
        raise ValueError("partial quotient must be at least 1")
    return math.log1p(1.0 / (n * (n + 2))) / math.log(2.0)


def gauss_tail(n: int) -> float:
    """Probability that a partial quotient is at least n."""
    if n < 1:
        raise ValueError("partial quotient must be at least 1")
    return math.log1p(1.0 / n) / math.log(2.0)
