"""Monte Carlo checks of the limit laws, tail bounds and means.

Every sample has its own random stream derived from (seed, N, index), so
results do not depend on how samples are split across workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Callable, Optional

import mpmath as mp
import numpy as np

from . import constants as C
from .cf import DYADIC_ONE, Angle, ExpansionTooShort, cf_expand, u_value
from .orbit import Accumulator, signed_distance_blocks
from .stable import CAUCHY, StableParams, cdf_table, ks_distance
from .sums import G_FUNCTIONS, RTable

PI = math.pi
LOG2 = math.log(2.0)
QUANTILES = (0.01, 0.25, 0.5, 0.75, 0.99)
SAMPLE_BLOCK = 128
CSV_HEADER = ("statistic", "N", "M", "seed", "ks", "q01", "q25", "q50", "q75", "q99",
              "mean", "elapsed_s")


class ConfigError(ValueError):
    """Invalid configuration; `field` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


# -- densities -----------------------------------------------------------------

DENSITY_KINDS = ("uniform", "linear_lipschitz", "gauss_measure", "table")


@dataclass(frozen=True)
class DensitySpec:
    """Law of alpha on [0, 1).

    linear_lipschitz has density 1 + L (x - 1/2), with A a lower bound for it.
    table is a piecewise linear density through knots (x, h) from x = 0 to 1.
    """

    kind: str = "uniform"
    L: Optional[float] = None
    A: Optional[float] = None
    table: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in DENSITY_KINDS:
            raise ConfigError("density.kind", f"unknown kind {self.kind!r}")
        if self.kind == "linear_lipschitz":
            if self.L is None or self.A is None:
                raise ConfigError("density", "linear_lipschitz needs L and A")
            if not abs(self.L) < 2:
                raise ConfigError("density.L", "slope must satisfy |L| < 2")
            if not 0 < self.A <= 1 - abs(self.L) / 2 + 1e-15:
                raise ConfigError("density.A", "need 0 < A <= min of the density")
        elif self.L is not None or self.A is not None:
            raise ConfigError("density", "L and A only apply to linear_lipschitz")
        if self.kind == "table":
            self._check_table()
        elif self.table is not None:
            raise ConfigError("density.table", "knots only apply to kind 'table'")

    def _check_table(self):
        knots = self.table
        if not knots or len(knots) < 2:
            raise ConfigError("density.table", "need at least two knots")
        xs = [float(x) for x, _ in knots]
        hs = [float(h) for _, h in knots]
        if xs[0] != 0 or xs[-1] != 1 or any(b <= a for a, b in zip(xs, xs[1:])):
            raise ConfigError("density.table", "knots must increase from 0 to 1")
        if min(hs) < 0:
            raise ConfigError("density.table", "density must be nonnegative")
        mass = sum((h0 + h1) / 2 * (x1 - x0)
                   for x0, x1, h0, h1 in zip(xs, xs[1:], hs, hs[1:]))
        if abs(mass - 1) > 1e-9:
            raise ConfigError("density.table", f"density integrates to {mass}, not 1")

    def knots(self):
        if self.kind == "uniform":
            return [(0.0, 1.0), (1.0, 1.0)]
        if self.kind == "linear_lipschitz":
            return [(0.0, 1 - self.L / 2), (1.0, 1 + self.L / 2)]
        if self.kind == "table":
            return [(float(x), float(h)) for x, h in self.table]
        raise ValueError("the Gauss measure has no linear knots")

    def pdf(self, x: float) -> float:
        if not 0 <= x <= 1:
            return 0.0
        if self.kind == "gauss_measure":
            return 1 / ((1 + x) * LOG2)
        k = self.knots()
        xs = [a for a, _ in k]
        return float(np.interp(x, xs, [h for _, h in k]))

    def mean(self) -> float:
        if self.kind == "gauss_measure":
            return 1 / LOG2 - 1
        total = 0.0
        for (x0, h0), (x1, h1) in zip(self.knots(), self.knots()[1:]):
            s = (h1 - h0) / (x1 - x0)
            # integral of x (h0 + s (x - x0)) over [x0, x1]
            total += (h0 - s * x0) * (x1**2 - x0**2) / 2 + s * (x1**3 - x0**3) / 3
        return total

    def inverse_cdf(self, u):
        """Quantile at u in the current mpmath precision."""
        u = mp.mpf(u)
        if self.kind == "uniform":
            return u
        if self.kind == "gauss_measure":
            return mp.power(2, u) - 1
        k = [(mp.mpf(x), mp.mpf(h)) for x, h in self.knots()]
        cum = [mp.mpf(0)]
        for (x0, h0), (x1, h1) in zip(k, k[1:]):
            cum.append(cum[-1] + (h0 + h1) / 2 * (x1 - x0))
        u = u * cum[-1]
        i = 0
        while i < len(k) - 2 and u >= cum[i + 1]:
            i += 1
        (x0, h0), (x1, h1) = k[i], k[i + 1]
        s = (h1 - h0) / (x1 - x0)
        v = u - cum[i]
        # root of s t^2/2 + h0 t = v in the cancellation-free form
        disc = h0 * h0 + 2 * s * v
        t = 2 * v / (h0 + mp.sqrt(max(disc, mp.mpf(0)))) if v > 0 else mp.mpf(0)
        return min(x0 + t, x1)

    @classmethod
    def from_dict(cls, d) -> "DensitySpec":
        if isinstance(d, str):
            d = {"kind": d}
        _reject_unknown(d, {"kind", "L", "A", "table"}, "density")
        table = d.get("table")
        if table is not None:
            table = tuple(tuple(float(v) for v in knot) for knot in table)
        return cls(d.get("kind", "uniform"), d.get("L"), d.get("A"), table)

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "linear_lipschitz":
            out.update(L=self.L, A=self.A)
        if self.kind == "table":
            out["table"] = [list(k) for k in self.table]
        return out


UNIFORM = DensitySpec("uniform")
GAUSS = DensitySpec("gauss_measure")


def sample_rng(seed: int, N: int, index: int) -> np.random.Generator:
    """The independent stream of sample `index` at ladder value N."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(N), int(index)))
    return np.random.Generator(np.random.PCG64(ss))


def _random_bits(rng: np.random.Generator, words: int) -> int:
    out = 0
    for w in rng.integers(0, 1 << 64, size=words, dtype=np.uint64):
        out = (out << 64) | int(w)
    return out


def sample_alpha(density: DensitySpec, rng: np.random.Generator) -> Angle:
    """A 128-bit dyadic angle distributed according to `density`."""
    bits = _random_bits(rng, 2)
    if density.kind == "uniform":
        return Angle.from_bits(bits)
    with mp.workprec(192):
        x = density.inverse_cdf((mp.mpf(bits) + mp.mpf(0.5)) / DYADIC_ONE)
        return Angle.from_bits(int(mp.floor(x * DYADIC_ONE)))


def _quantile_interval(density: DensitySpec, U: int, B: int):
    """Rational bounds (as numerator pairs over 2^P) for F^{-1}([U, U+1) / 2^B)."""
    if density.kind == "uniform":
        return U, U + 1, B
    P = B + 64
    pad = 1 << (P - B - 32)
    with mp.workprec(P):
        lo = density.inverse_cdf(mp.ldexp(U, -B))
        if density.kind == "gauss_measure":
            # 2^((U+1)/2^B) = 2^(U/2^B) 2^(2^-B) saves a second full-size power
            hi = (lo + 1) * mp.exp(mp.ldexp(mp.ln2, -B)) - 1
        else:
            hi = density.inverse_cdf(mp.ldexp(U + 1, -B))
        lo_n = int(mp.floor(lo * mp.mpf(2) ** P)) - pad
        hi_n = int(mp.ceil(hi * mp.mpf(2) ** P)) + pad
    return max(lo_n, 0), min(hi_n, 1 << P), P


_WINDOW = 192


def _cf_quotients(num: int, den: int, count: int) -> list:
    """Up to `count` leading partial quotients of num/den (0 <= num < den).

    Lehmer's method: quotients are read off the leading bits while both
    bracketing ratios agree, and one matrix product then advances the
    full-size pair.
    """
    out = []
    u, v = den, num
    while len(out) < count and v:
        shift = u.bit_length() - _WINDOW
        if shift > 0:
            x, y = u >> shift, v >> shift
            A, B, C, D = 1, 0, 0, 1
            while y + C and y + D:
                q = (x + A) // (y + C)
                if q != (x + B) // (y + D):
                    break
                A, C = C, A - q * C
                B, D = D, B - q * D
                x, y = y, x - q * y
                out.append(q)
            if B:
                u, v = A * u + B * v, C * u + D * v
                continue
        q, r = divmod(u, v)
        out.append(q)
        u, v = v, r
    return out[:count]


def _shared_quotients(n1: int, n2: int, den: int, count: int) -> list:
    """Leading partial quotients shared by n1/den and n2/den."""
    out = []
    for a, b in zip(_cf_quotients(n1, den, count), _cf_quotients(n2, den, count)):
        if a != b:
            break
        out.append(a)
    return out


def sample_partial_quotients(density: DensitySpec, rng: np.random.Generator,
                             count: int) -> list:
    """The first `count` partial quotients of alpha ~ density, exactly.

    Random bits are drawn until every real number in the dyadic cell of
    alpha shares those quotients, so the result never depends on rounding.
    """
    words = -(-(int(3.5 * count) + 128) // 64)
    U, B = _random_bits(rng, words), 64 * words
    for _ in range(64):
        lo, hi, P = _quantile_interval(density, U, B)
        digits = _shared_quotients(lo, hi, 1 << P, count)
        if len(digits) >= count:
            return digits
        more = max(2, words // 2)
        U, B = (U << (64 * more)) | _random_bits(rng, more), B + 64 * more
    raise RuntimeError("could not resolve partial quotients")


# -- statistic kinds -------------------------------------------------------------

ORBIT_FAMILIES = ("thm1_signed_cot", "thm1_abs_cot", "main_pair", "cor_signed",
                  "cor_unsigned", "p_pair", "p_cor_signed", "p_cor_unsigned",
                  "far_concentration", "bv_average")
QUOTIENT_FAMILIES = ("sum_ak", "sum_ak_power", "sum_R_ak", "tail_ak", "ru_mean")
FAMILIES = ORBIT_FAMILIES + QUOTIENT_FAMILIES

_LOGLOG = {"thm1_abs_cot", "main_pair", "cor_unsigned"}
_POWER = {"p_pair", "p_cor_signed", "p_cor_unsigned", "sum_ak_power"}
_TAKES_G = {"main_pair", "cor_signed", "cor_unsigned", "p_pair", "p_cor_signed",
            "p_cor_unsigned", "bv_average"}
_PAIRS = {"main_pair", "p_pair", "sum_ak_power", "sum_R_ak"}

FAMILY_HELP = {
    "thm1_signed_cot": "(1/log N) sum cot(pi n a)/n, limit Cauchy",
    "thm1_abs_cot": "(sum |cot(pi n a)|/n - E_N)/log N, limit Stab(1,1)",
    "main_pair": "positive and negative parts of sum f(n a)/n, limit Stab(1,1)^2",
    "cor_signed": "sum (1/<n a> + g)/n, limit Cauchy",
    "cor_unsigned": "sum (1/||n a|| + g)/n, limit Stab(1,1)",
    "p_pair": "positive and negative parts of sum f(n a)/n^p, limit Stab(1/p,1)^2",
    "p_cor_signed": "sum (sgn/|<n a>|^p + g)/n^p, limit Stab(1/p,0)",
    "p_cor_unsigned": "sum (1/||n a||^p + g)/n^p, limit Stab(1/p,1)",
    "sum_ak": "sum of the first K partial quotients, limit Stab(1,1)",
    "sum_ak_power": "odd and even power sums of partial quotients, limit Stab(1/p,1)^2",
    "sum_R_ak": "odd and even sums of R(a_k), limit Stab(1,1)^2",
    "far_concentration": "far part of sum 1/(n <n a>) over (log N)^2/2, tends to 1",
    "bv_average": "(1/log N) sum g(n a)/n, tends to the mean of g",
    "tail_ak": "sum_{k<=K} a_k^p / K^p, for tail probabilities",
    "ru_mean": "R(u_k) - R(a_k) at k = N, mean tends to kappa",
}


@dataclass(frozen=True)
class StatisticKind:
    family: str
    p: float = 1.0
    g_spec: Optional[str] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError("statistic.family", f"unknown family {self.family!r}")
        if self.family in _POWER:
            if not self.p > 1:
                raise ConfigError("statistic.p", f"{self.family} needs p > 1")
        elif self.family == "tail_ak":
            if not self.p >= 1:
                raise ConfigError("statistic.p", "tail_ak needs p >= 1")
        elif self.p != 1:
            raise ConfigError("statistic.p", f"{self.family} has p = 1")
        if self.g_spec is not None:
            if self.family not in _TAKES_G:
                raise ConfigError("statistic.g_spec", f"{self.family} takes no g")
            if self.g_spec not in G_FUNCTIONS:
                raise ConfigError("statistic.g_spec", f"unknown g {self.g_spec!r}")

    @property
    def g(self):
        name = self.g_spec or ("frac" if self.family == "bv_average" else "zero")
        return G_FUNCTIONS[name]

    @property
    def components(self) -> tuple:
        if self.family in _PAIRS:
            return ("X", "Y", "sum", "diff")
        if self.family == "far_concentration":
            return ("positive", "negative")
        return ("value",)

    def limit_law(self, component: str = "value") -> Optional[StableParams]:
        """Limit law of a component, or None where the limit is a constant."""
        f, p = self.family, self.p
        if f in ("far_concentration", "bv_average", "tail_ak", "ru_mean"):
            return None
        if f in ("thm1_signed_cot", "cor_signed"):
            return CAUCHY
        if f in ("thm1_abs_cot", "cor_unsigned", "sum_ak"):
            return StableParams(1.0, 1.0)
        if f in ("main_pair", "sum_R_ak"):
            return CAUCHY if component == "diff" else StableParams(1.0, 1.0)
        if f == "p_cor_signed":
            return StableParams(1 / p, 0.0)
        if f == "p_cor_unsigned":
            return StableParams(1 / p, 1.0)
        return StableParams(1 / p, 0.0 if component == "diff" else 1.0)

    def has_mean(self) -> bool:
        return self.family in ("far_concentration", "bv_average", "ru_mean")

    def min_n(self) -> int:
        if self.family in _LOGLOG:
            return 3
        if self.family in ORBIT_FAMILIES:
            return 2
        if self.family == "sum_R_ak":
            return 4
        if self.family == "sum_ak_power":
            return 2
        return 1

    def check_n(self, n: int, name: str = "N"):
        if int(n) != n or n < self.min_n():
            raise ConfigError(name, f"{self.family} needs integer {name} >= {self.min_n()}")
        if self.family in ("sum_R_ak", "sum_ak_power") and n % 2:
            raise ConfigError(name, f"{self.family} needs even K")

    @classmethod
    def from_dict(cls, d) -> "StatisticKind":
        if isinstance(d, str):
            d = {"family": d}
        _reject_unknown(d, {"family", "p", "g_spec"}, "statistic")
        if "family" not in d:
            raise ConfigError("statistic.family", "missing")
        return cls(d["family"], float(d.get("p", 1.0)), d.get("g_spec"))

    def to_dict(self) -> dict:
        return {"family": self.family, "p": self.p, "g_spec": self.g_spec}


# -- statistics from the orbit ----------------------------------------------------

def _orbit_terms(kind: StatisticKind, n, d):
    """Term matrices for each raw sum; n is a row of indices."""
    f, p = kind.family, kind.p
    if f == "thm1_signed_cot":
        return [1.0 / (np.tan(PI * d) * n)]
    if f == "thm1_abs_cot":
        return [np.abs(1.0 / np.tan(PI * d)) / n]
    g = kind.g(d) if f in _TAKES_G else None
    if f == "main_pair":
        inv = 1.0 / np.abs(d)
        return [(np.where(d > 0, inv, 0.0) + g) / n, (np.where(d < 0, inv, 0.0) + g) / n]
    if f == "cor_signed":
        return [(1.0 / d + g) / n]
    if f == "cor_unsigned":
        return [(1.0 / np.abs(d) + g) / n]
    if f == "bv_average":
        return [g / n]
    if f == "far_concentration":
        inv = 1.0 / (n * np.abs(d))
        edge = 1.0 / (2 * n)
        return [np.where(d >= edge, inv, 0.0), np.where(d <= -edge, inv, 0.0)]
    np_ = n**p
    powv = np.abs(d) ** (-p)
    if f == "p_pair":
        return [(np.where(d > 0, powv, 0.0) + g) / np_, (np.where(d < 0, powv, 0.0) + g) / np_]
    if f == "p_cor_signed":
        return [(np.sign(d) * powv + g) / np_]
    if f == "p_cor_unsigned":
        return [(powv + g) / np_]
    raise ValueError(f"{f} is not an orbit family")


def orbit_raw_sums(angles, N: int, kind: StatisticKind) -> np.ndarray:
    """Raw sums over 1 <= n <= N, one row per angle."""
    acc = None
    for n, d, valid in signed_distance_blocks(angles, N):
        # columns past N may hit d = 0 for rational angles; they are masked
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = _orbit_terms(kind, n, d)
        if acc is None:
            acc = Accumulator(len(angles), len(terms))
        for j, t in enumerate(terms):
            acc.add(j, np.where(valid, t, 0.0).sum(axis=1))
    return acc.total()


def _finish_orbit(kind: StatisticKind, raw: np.ndarray, N: int) -> dict:
    f, p = kind.family, kind.p
    L = math.log(N)
    gi = kind.g.integral
    S = raw[:, 0]
    if f == "thm1_signed_cot":
        return {"value": S / L}
    if f == "thm1_abs_cot":
        return {"value": (S - C.centering("thm1", N)) / L}
    if f == "cor_signed":
        return {"value": (S - L * gi) / (PI * L)}
    if f == "cor_unsigned":
        return {"value": (S - C.centering("cor", N, g_integral=gi)) / (PI * L)}
    if f == "bv_average":
        return {"value": S / L}
    if f == "far_concentration":
        return {"positive": S / (L * L / 2), "negative": raw[:, 1] / (L * L / 2)}
    if f == "main_pair":
        E = C.centering("main", N, g_integral=gi)
        X, Y = (S - E) / (PI / 2 * L), (raw[:, 1] - E) / (PI / 2 * L)
        return {"X": X, "Y": Y, "sum": (X + Y) / 2 - 2 * LOG2 / PI, "diff": (X - Y) / 2}
    sigma = C.sigma_p(p)
    if f == "p_pair":
        shift = C.centering("p_theorem", N, p)
        X = (S + shift) / (sigma * L**p)
        Y = (raw[:, 1] + shift) / (sigma * L**p)
        return {"X": X, "Y": Y, "sum": (X + Y) / 2**p, "diff": (X - Y) / 2**p}
    if f == "p_cor_signed":
        return {"value": S / (2**p * sigma * L**p)}
    if f == "p_cor_unsigned":
        return {"value": (S + C.centering("p_cor", N, p)) / (2**p * sigma * L**p)}
    raise ValueError(f"{f} is not an orbit family")


# -- statistics from partial quotients ---------------------------------------------

_R_TABLE = RTable(1.0)


def _u_from_quotients(a: list, k: int) -> float:
    """u_k = [a_k; a_{k+1}, ...] + [0; a_{k-1}, ..., a_1] from a long enough prefix."""
    tail = 0.0
    for x in reversed(a[k:]):
        tail = 1.0 / (x + tail)
    head = 0.0
    for x in a[:k - 1]:
        head = 1.0 / (x + head)
    return a[k - 1] + tail + head


def _quotient_count(kind: StatisticKind, n: int) -> int:
    return n + 40 if kind.family == "ru_mean" else n


def _finish_quotients(kind: StatisticKind, a: list, K: int, u: Optional[float] = None) -> dict:
    f, p = kind.family, kind.p
    if f == "sum_ak":
        return {"value": (sum(a[:K]) - C.centering("sum_ak", K)) / (PI / (2 * LOG2) * K)}
    if f == "tail_ak":
        return {"value": math.fsum(float(x) ** p for x in a[:K]) / float(K) ** p}
    if f == "ru_mean":
        u = _u_from_quotients(a, K) if u is None else u
        return {"value": float(_R_TABLE(u) - _R_TABLE(a[K - 1]))}
    odd, even = a[0:K:2], a[1:K:2]
    if f == "sum_ak_power":
        A = C.centering("sum_ak_power", K, p)
        scale = C.sigma_ak_power(p) * float(K) ** p
        X = (math.fsum(float(x) ** p for x in odd) + A) / scale
        Y = (math.fsum(float(x) ** p for x in even) + A) / scale
        return {"X": X, "Y": Y, "sum": (X + Y) / 2**p, "diff": (X - Y) / 2**p}
    if f == "sum_R_ak":
        A = C.centering("sum_R_ak", K)
        scale = PI**3 / (24 * LOG2) * K
        X = (math.fsum(_R_TABLE(np.array(odd, dtype=float))) - A) / scale
        Y = (math.fsum(_R_TABLE(np.array(even, dtype=float))) - A) / scale
        return {"X": X, "Y": Y, "sum": (X + Y) / 2 - 2 * LOG2 / PI, "diff": (X - Y) / 2}
    raise ValueError(f"{f} is not a partial-quotient family")


def statistic_value(alpha: Angle, n: int, kind: StatisticKind):
    """The normalized statistic of one angle at N (or K).

    Pair families return (X, Y); far_concentration returns the positive
    and negative sides; everything else a float.
    """
    kind.check_n(n)
    if kind.family in ORBIT_FAMILIES:
        out = _finish_orbit(kind, orbit_raw_sums([alpha], n, kind), n)
        out = {k: float(v[0]) for k, v in out.items()}
    else:
        count = _quotient_count(kind, n) if alpha.dyadic else n
        cf = cf_expand(alpha, count)
        if len(cf) < n:
            raise ExpansionTooShort(
                f"alpha has {len(cf)} partial quotients, {n} needed", len(cf))
        u = float(u_value(cf, alpha, n)) if kind.family == "ru_mean" else None
        out = _finish_quotients(kind, list(cf.partial_quotients), n, u)
    if kind.family in _PAIRS:
        return out["X"], out["Y"]
    if kind.family == "far_concentration":
        return out["positive"], out["negative"]
    return out["value"]


# -- experiments -------------------------------------------------------------------

def _reject_unknown(d: dict, allowed: set, where: str):
    if not isinstance(d, dict):
        raise ConfigError(where, "expected an object")
    extra = sorted(set(d) - allowed)
    if extra:
        raise ConfigError(f"{where}.{extra[0]}" if where else extra[0], "unknown field")


@dataclass(frozen=True)
class ExperimentConfig:
    statistic: StatisticKind
    N_ladder: tuple
    M: int
    density: DensitySpec = UNIFORM
    seed: int = 0
    worker_count: int = 1

    def __post_init__(self):
        if not self.N_ladder:
            raise ConfigError("N_ladder", "must not be empty")
        for n in self.N_ladder:
            self.statistic.check_n(n, "N_ladder")
        if int(self.M) != self.M or self.M < 100:
            raise ConfigError("M", "need at least 100 samples per ladder value")
        if int(self.seed) != self.seed or not 0 <= self.seed < 1 << 64:
            raise ConfigError("seed", "must be a 64-bit unsigned integer")
        if int(self.worker_count) != self.worker_count or self.worker_count < 1:
            raise ConfigError("worker_count", "must be a positive integer")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        _reject_unknown(d, {f.name for f in fields(cls)}, "")
        for name in ("statistic", "N_ladder", "M"):
            if name not in d:
                raise ConfigError(name, "missing")
        ladder = d["N_ladder"]
        if not isinstance(ladder, list) or not all(isinstance(n, int) for n in ladder):
            raise ConfigError("N_ladder", "must be a list of integers")
        return cls(
            statistic=StatisticKind.from_dict(d["statistic"]),
            N_ladder=tuple(ladder),
            M=d["M"],
            density=DensitySpec.from_dict(d.get("density", {"kind": "uniform"})),
            seed=d.get("seed", 0),
            worker_count=d.get("worker_count", 1),
        )

    def to_dict(self) -> dict:
        return {"statistic": self.statistic.to_dict(), "N_ladder": list(self.N_ladder),
                "M": self.M, "density": self.density.to_dict(), "seed": self.seed,
                "worker_count": self.worker_count}


def load_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from None
    return ExperimentConfig.from_dict(data)


def _simulate_block(kind: StatisticKind, density: DensitySpec, seed: int, n: int,
                    start: int, stop: int) -> dict:
    rngs = [sample_rng(seed, n, i) for i in range(start, stop)]
    if kind.family in ORBIT_FAMILIES:
        angles = [sample_alpha(density, r) for r in rngs]
        return _finish_orbit(kind, orbit_raw_sums(angles, n, kind), n)
    rows = [_finish_quotients(kind, sample_partial_quotients(density, r, _quotient_count(kind, n)), n)
            for r in rngs]
    return {c: np.array([r[c] for r in rows]) for c in kind.components}


def _block_job(args):
    return _simulate_block(*args)


def simulate(config: ExperimentConfig, n: int, workers: Optional[int] = None) -> dict:
    """All M samples at one ladder value: component name -> array."""
    kind = config.statistic
    kind.check_n(n)
    jobs = [(kind, config.density, config.seed, n, s, min(s + SAMPLE_BLOCK, config.M))
            for s in range(0, config.M, SAMPLE_BLOCK)]
    workers = config.worker_count if workers is None else workers
    if workers <= 1 or len(jobs) == 1:
        parts = [_block_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_block_job, jobs))
    return {c: np.concatenate([np.atleast_1d(p[c]) for p in parts]) for c in kind.components}


@dataclass
class ResultRow:
    statistic: str
    N: int
    M: int
    seed: int
    ks: float
    q01: float
    q25: float
    q50: float
    q75: float
    q99: float
    mean: float
    elapsed_s: float

    def key(self):
        return (self.statistic, self.N, self.seed)

    def same_values(self, other: "ResultRow") -> bool:
        """Equality ignoring timing (NaN equal to NaN)."""
        a, b = asdict(self), asdict(other)
        a.pop("elapsed_s"), b.pop("elapsed_s")
        return all(a[k] == b[k] or (isinstance(a[k], float) and math.isnan(a[k])
                                    and math.isnan(b[k])) for k in a)


def statistic_label(kind: StatisticKind, component: str) -> str:
    return kind.family if component == "value" else f"{kind.family}:{component}"


def summarize(kind: StatisticKind, component: str, values, n: int, seed: int,
              elapsed: float) -> ResultRow:
    values = np.asarray(values, dtype=float)
    law = kind.limit_law(component)
    ks = ks_distance(values, cdf_table(law)) if law is not None else math.nan
    qs = np.quantile(values, QUANTILES)
    mean = float(np.mean(values)) if kind.has_mean() else math.nan
    return ResultRow(statistic_label(kind, component), int(n), int(values.size), int(seed),
                     float(ks), *map(float, qs), mean, float(elapsed))


def run_experiment(config: ExperimentConfig,
                   on_row: Optional[Callable[[ResultRow], None]] = None) -> list:
    """One row per ladder value and component; rows are handed to `on_row`
    as soon as they exist, so a failure later on keeps earlier results."""
    rows = []
    for n in config.N_ladder:
        t0 = time.perf_counter()
        samples = simulate(config, n)
        elapsed = time.perf_counter() - t0
        for comp in config.statistic.components:
            row = summarize(config.statistic, comp, samples[comp], n, config.seed, elapsed)
            rows.append(row)
            if on_row is not None:
                on_row(row)
    return rows


# -- tails and means -------------------------------------------------------------------

@dataclass(frozen=True)
class TailRow:
    t: float
    probability: float
    scaled: float
    bound: float


def empirical_tail(config: ExperimentConfig, thresholds) -> list:
    """P(sum_{k<=K} a_k^p >= t K^p) at the largest K of the ladder, with the
    envelope C / t^(1/p) fitted as the largest t^(1/p) P over the thresholds."""
    kind = config.statistic
    if kind.family != "tail_ak":
        raise ConfigError("statistic.family", "empirical_tail needs tail_ak")
    K = max(config.N_ladder)
    p = kind.p
    for t in thresholds:
        if p == 1 and not t > 2 * math.log(K):
            raise ConfigError("thresholds", f"t = {t} must exceed 2 log K = {2 * math.log(K):.3f}")
        if not t > 0:
            raise ConfigError("thresholds", "t must be positive")
    values = simulate(config, K)["value"]
    probs = [float(np.mean(values >= t)) for t in thresholds]
    scaled = [t ** (1 / p) * P for t, P in zip(thresholds, probs)]
    Cfit = max(scaled)
    return [TailRow(float(t), P, s, Cfit / t ** (1 / p))
            for t, P, s in zip(thresholds, probs, scaled)]


@dataclass(frozen=True)
class MeanCheck:
    mean: float
    half_width: float
    std_error: float
    bound_violations: int


def ru_mean_check(k: int, M: int, seed: int, density: DensitySpec = GAUSS,
                  worker_count: int = 1) -> MeanCheck:
    """Mean of R(u_k) - R(a_k) over M draws; half_width is the 95% CLT half-width.

    Each draw is also checked against |R(u_k) - R(a_k)| <= R(a_k + 2) - R(a_k).
    """
    if k < 5:
        raise ConfigError("k", "need k >= 5")
    ExperimentConfig(StatisticKind("ru_mean"), (k,), M, density, seed, worker_count)
    jobs = [(density, seed, k, s, min(s + SAMPLE_BLOCK, M)) for s in range(0, M, SAMPLE_BLOCK)]
    if worker_count <= 1:
        parts = [_ru_block(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=worker_count) as pool:
            parts = list(pool.map(_ru_block, jobs))
    diffs = np.concatenate([p[0] for p in parts])
    bad = int(sum(p[1] for p in parts))
    se = float(np.std(diffs, ddof=1) / math.sqrt(M))
    return MeanCheck(float(np.mean(diffs)), 1.959963984540054 * se, se, bad)


def _ru_block(args):
    density, seed, k, start, stop = args
    out, bad = [], 0
    for i in range(start, stop):
        a = sample_partial_quotients(density, sample_rng(seed, k, i), k + 40)
        u = _u_from_quotients(a, k)
        diff = float(_R_TABLE(u) - _R_TABLE(a[k - 1]))
        if abs(diff) > float(_R_TABLE(a[k - 1] + 2) - _R_TABLE(a[k - 1])):
            bad += 1
        out.append(diff)
    return np.array(out), bad


# -- tables ------------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def rows_to_csv(rows, fh=None) -> str:
    buf = fh if fh is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt(getattr(r, name)) for name in CSV_HEADER])
    return buf.getvalue() if fh is None else ""


def rows_to_json(rows) -> str:
    return json.dumps([{name: _fmt(getattr(r, name)) for name in CSV_HEADER} for r in rows],
                      indent=1)


def rows_from_csv(text: str) -> list:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != CSV_HEADER:
        raise ValueError("not a result table: unexpected header")
    rows = []
    for rec in reader:
        if not rec:
            continue
        if len(rec) != len(CSV_HEADER):
            raise ValueError(f"malformed row {rec!r}")
        vals = dict(zip(CSV_HEADER, rec))
        rows.append(ResultRow(vals["statistic"], int(vals["N"]), int(vals["M"]),
                              int(vals["seed"]),
                              *(float(vals[h]) for h in CSV_HEADER[4:])))
    return rows
