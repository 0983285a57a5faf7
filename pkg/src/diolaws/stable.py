"""Stable laws Stab(alpha0, beta0) with characteristic function

    phi(t) = exp(-|t|^a (1 - i b sgn(t) w)),  w = tan(a pi/2) or -(2/pi) log|t| at a = 1,

together with CDF, quantiles, exact sampling and the Kolmogorov distance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize
from scipy.interpolate import PchipInterpolator

TAIL_SWITCH = 25.0
# beyond this |beta0 tan(pi alpha0 / 2)| the inversion phase oscillates too fast
SHIFT_SWITCH = 4.0


@dataclass(frozen=True)
class StableParams:
    alpha0: float
    beta0: float

    def __post_init__(self):
        if not 0 < self.alpha0 <= 2:
            raise ValueError("alpha0 must lie in (0, 2]")
        if not -1 <= self.beta0 <= 1:
            raise ValueError("beta0 must lie in [-1, 1]")

    def __str__(self):
        return f"Stab({self.alpha0:g},{self.beta0:g})"


CAUCHY = StableParams(1.0, 0.0)


def char_fn(params: StableParams, t):
    """phi(t) in the parameterization above; vectorized over t."""
    a, b = params.alpha0, params.beta0
    t = np.asarray(t, dtype=float)
    at = np.abs(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        if a == 1:
            omega = np.where(at > 0, -2 / np.pi * np.log(np.where(at > 0, at, 1.0)), 0.0)
        else:
            omega = math.tan(a * np.pi / 2)
        expo = -(at**a) * (1 - 1j * b * np.sign(t) * omega)
    out = np.exp(np.where(at > 0, expo, 0.0))
    return complex(out) if out.ndim == 0 else out


def _phase(params: StableParams, t):
    """Argument of phi(t) for t > 0."""
    a, b = params.alpha0, params.beta0
    if a == 1:
        return -2 * b / np.pi * t * np.log(t)
    return b * math.tan(a * np.pi / 2) * t**a


def _quad(f, lo, hi, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=2000, **kw)[0]


def cdf_inversion(params: StableParams, x: float) -> float:
    """F(x) = 1/2 - (1/pi) int_0^inf Im(e^{-itx} phi(t))/t dt.

    The first panel uses t = s^(1/alpha0), which removes the t -> 0
    singularity; the oscillatory remainder uses weighted quadrature.
    """
    a = params.alpha0
    t_max = 45.0 ** (1 / a)
    if x == 0:
        f = lambda s: math.exp(-s) * math.sin(_phase(params, s ** (1 / a))) / s if s > 0 else 0.0
        return 0.5 - _quad(f, 0, 45.0) / (a * math.pi)
    t_split = min(10.0 / abs(x), t_max)
    s_split = t_split**a

    def first(s):
        if s <= 0:
            return 0.0
        t = s ** (1 / a)
        return math.exp(-s) * math.sin(_phase(params, t) - t * x) / s

    total = _quad(first, 0.0, s_split) / a
    if t_split < t_max:
        amp_c = lambda t: math.exp(-(t**a)) * math.sin(_phase(params, t)) / t
        amp_s = lambda t: -math.exp(-(t**a)) * math.cos(_phase(params, t)) / t
        total += _quad(amp_c, t_split, t_max, weight="cos", wvar=x)
        total += _quad(amp_s, t_split, t_max, weight="sin", wvar=x)
    return 0.5 - total / math.pi


_LEVELS = (-8.0, -4.0, -1.0, 0.0, 1.0, 3.0)
_OFFSETS = np.geomspace(1e-15, 0.5, 80)


def _theta_integral(log_g, lo: float, hi: float) -> float:
    """int_lo^hi exp(-g(theta)) dtheta.

    The integrand drops from 1 to 0 where g crosses 1, often in a sliver
    next to an endpoint; breakpoints at level crossings of log g keep the
    quadrature from stepping over it.
    """
    span = hi - lo
    pts = np.unique(np.concatenate((lo + span * _OFFSETS, hi - span * _OFFSETS)))
    vals = np.array([log_g(t) for t in pts])
    breaks = [lo, hi]
    for level in _LEVELS:
        shifted = vals - level
        for i in np.nonzero(np.sign(shifted[:-1]) * np.sign(shifted[1:]) < 0)[0]:
            breaks.append(optimize.brentq(lambda t: log_g(t) - level, pts[i], pts[i + 1],
                                          xtol=1e-300, rtol=1e-14))
    breaks = sorted(set(breaks))

    def f(t):
        lg = log_g(t)
        return math.exp(-math.exp(lg)) if lg < 6.6 else 0.0

    return sum(_quad(f, a, b) for a, b in zip(breaks, breaks[1:]) if b > a)


def _zolotarev_positive(a: float, b: float, x: float) -> float:
    """F(x) for x > 0 from Zolotarev's integral form (alpha0 != 1)."""
    tan = math.tan(math.pi * a / 2)
    theta0 = math.atan(b * tan) / a
    # D = pi/2 - a theta0 without cancellation; cos(a theta0 + (a-1) th) = sin(D - (a-1) th)
    D = math.atan2(1.0, b * tan)
    expo = a / (a - 1)
    log_base = math.log(math.sin(D)) / (a - 1) + expo * math.log(x)
    mid = (math.pi / 2 - theta0) / 2

    def log_g(th):
        c = math.cos(th)
        s = math.sin(a * (theta0 + th))
        r = math.sin(D - (a - 1) * th)
        if c <= 0 or s <= 0 or r <= 0:
            # endpoint limits: g -> infinity where the integrand must vanish
            return math.inf if (a < 1) == (th > mid) else -math.inf
        return log_base + expo * math.log(c / s) + math.log(r / c)

    body = _theta_integral(log_g, -theta0, math.pi / 2)
    if a < 1:
        return (math.pi / 2 - theta0) / math.pi + body / math.pi
    return 1.0 - body / math.pi


def _zolotarev_one_positive_beta(b: float, x: float) -> float:
    """F(x) for alpha0 = 1 and beta0 > 0."""

    def log_g(th):
        c = math.cos(th)
        if c <= 0:
            return -math.inf if th < 0 else math.inf
        lead = math.pi / 2 + b * th
        if lead <= 0:
            return -math.inf
        return (math.log(2 / math.pi * lead / c) + lead * math.tan(th) / b
                - math.pi * x / (2 * b))

    return _theta_integral(log_g, -math.pi / 2, math.pi / 2) / math.pi


def cdf_integral_form(params: StableParams, x: float) -> float:
    """Non-oscillatory integral representation of the CDF."""
    a, b = params.alpha0, params.beta0
    if a == 1:
        if b == 0:
            return 0.5 + math.atan(x) / math.pi
        if b < 0:
            return 1.0 - cdf_integral_form(StableParams(1.0, -b), -x)
        return _zolotarev_one_positive_beta(b, x)
    if x == 0:
        return (math.pi / 2 - math.atan(b * math.tan(math.pi * a / 2)) / a) / math.pi
    if x < 0:
        return 1.0 - _zolotarev_positive(a, -b, -x)
    return _zolotarev_positive(a, b, x)


def cdf(params: StableParams, x):
    """CDF by characteristic-function inversion; far tails use the
    integral form, where the inversion integrand oscillates too fast."""
    arr = np.asarray(x, dtype=float)
    a, b = params.alpha0, params.beta0
    skewed = a != 1 and abs(b * math.tan(math.pi * a / 2)) > SHIFT_SWITCH
    flat = []
    for v in arr.ravel():
        if not math.isfinite(v):
            flat.append(1.0 if v > 0 else 0.0)
        elif skewed or abs(v) > TAIL_SWITCH or (a < 0.75 and abs(v) > 4):
            flat.append(cdf_integral_form(params, float(v)))
        else:
            flat.append(cdf_inversion(params, float(v)))
    out = np.clip(np.array(flat), 0.0, 1.0).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def quantile(params: StableParams, q: float) -> float:
    """Solve cdf(x) = q."""
    if not 0 < q < 1:
        raise ValueError("q must lie in (0, 1)")
    lo, hi = -1.0, 1.0
    while cdf(params, lo) > q:
        lo *= 4
    while cdf(params, hi) < q:
        hi *= 4
    return optimize.brentq(lambda v: cdf(params, v) - q, lo, hi, xtol=1e-14, rtol=1e-13)


def sample(params: StableParams, rng: np.random.Generator, size=None):
    """Chambers-Mallows-Stuck transform matched to phi above."""
    a, b = params.alpha0, params.beta0
    V = rng.uniform(-np.pi / 2, np.pi / 2, size)
    W = rng.standard_exponential(size)
    if a == 1:
        lead = np.pi / 2 + b * V
        return 2 / np.pi * (lead * np.tan(V) - b * np.log(np.pi / 2 * W * np.cos(V) / lead))
    tan = math.tan(np.pi * a / 2)
    B = math.atan(b * tan) / a
    S = (1 + (b * tan) ** 2) ** (1 / (2 * a))
    return (S * np.sin(a * (V + B)) / np.cos(V) ** (1 / a)
            * (np.cos(V - a * (V + B)) / W) ** ((1 - a) / a))


def ks_distance(samples, cdf_fn) -> float:
    """sup_x |F_n(x) - F(x)|, taken over both sides of every jump of F_n."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("ks_distance needs at least one sample")
    right = np.asarray(cdf_fn(x), dtype=float)
    left = np.asarray(cdf_fn(np.nextafter(x, -np.inf)), dtype=float)
    i = np.arange(1, n + 1)
    # the empirical CDF takes the value (count <= x_i)/n at x_i
    last = np.searchsorted(x, x, side="right")
    first = np.searchsorted(x, x, side="left")
    upper = np.max(np.abs(last / n - right))
    lower = np.max(np.abs(left - first / n))
    return float(max(upper, lower, 0.0))


class CdfTable:
    """Monotone interpolation of cdf in u = asinh(x), built on demand.

    The u axis is cut into fixed unit segments that are tabulated and
    refined independently, so a value never depends on which other
    points were asked for earlier.
    """

    def __init__(self, params: StableParams, step: float = 0.01, tol: float = 1e-9):
        self.params = params
        self.step = step
        self.tol = tol
        self._segments = {}

    def _build(self, j: int):
        u = np.linspace(j, j + 1, round(1 / self.step) + 1)
        F = np.maximum.accumulate(cdf(self.params, np.sinh(u)))
        interp = PchipInterpolator(u, F, extrapolate=False)
        # bisect cells whose midpoint is interpolated worse than tol; only
        # the halves of a failed cell are examined again
        steep = np.diff(F) > self.tol
        candidates = 0.5 * (u[:-1] + u[1:])[steep]
        half = 0.5 * np.diff(u)[steep]
        for _ in range(16):
            if candidates.size == 0:
                break
            exact = cdf(self.params, np.sinh(candidates))
            bad = np.abs(interp(candidates) - exact) > self.tol
            u, idx = np.unique(np.concatenate((u, candidates)), return_index=True)
            F = np.maximum.accumulate(np.concatenate((F, exact))[idx])
            interp = PchipInterpolator(u, F, extrapolate=False)
            c, h = candidates[bad], half[bad] / 2
            candidates = np.concatenate((c - h, c + h))
            half = np.concatenate((h, h))
        self._segments[j] = interp
        return interp

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x > 0, 1.0, 0.0)
        mask = np.isfinite(x)
        if mask.any():
            u = np.arcsinh(x[mask])
            seg = np.floor(u).astype(np.int64)
            vals = np.empty(u.shape)
            keys, inverse = np.unique(seg, return_inverse=True)
            for i, j in enumerate(keys):
                sel = inverse == i
                f = self._segments.get(int(j)) or self._build(int(j))
                vals[sel] = f(u[sel])
            out[mask] = vals
        return np.clip(out, 0.0, 1.0)


_TABLES = {}


def cdf_table(params: StableParams) -> CdfTable:
    """Shared interpolated CDF for bulk Kolmogorov distances."""
    if params not in _TABLES:
        _TABLES[params] = CdfTable(params)
    return _TABLES[params]
