"""Asymptotic rate/relative-Lee-distance bounds as evaluable curves."""

from __future__ import annotations

import logging
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, NamedTuple

import numpy as np

from .fields import is_prime
from .lee_metric import sphere_table, weight_sum_W

log = logging.getLogger(__name__)

__all__ = [
    "DomainError",
    "bisect",
    "BoundCurve",
    "GenusRatio",
    "AstolaSolution",
    "PiecewiseLine",
    "astola_solve",
    "astola_rate",
    "astola_max_delta",
    "lee_entropy",
    "lee_entropy_root",
    "gardy_sole_rate",
    "admissible_t",
    "concat_line",
    "concat_envelope",
    "concat_asymptote",
    "victoria_rate",
    "victoria_zero",
    "descent_delta",
    "corollary2_coefficients",
    "profile_f",
    "profile_g",
    "f_breakpoint",
    "f_inverse_segments",
    "f_inverse",
    "g_inverse",
    "g_inverse_cardano",
    "alpha_lee_lower",
    "make_curve",
    "CURVE_NAMES",
]

BISECT_MAXITER = 200
BISECT_XTOL = 1e-14


class DomainError(ValueError):
    """Argument outside the region where a bound is defined."""


def bisect(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    xtol: float = BISECT_XTOL,
    maxiter: int = BISECT_MAXITER,
) -> tuple[float, float, int]:
    """Sign-change bisection; returns the final bracket and iteration count."""
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return lo, lo, 0
    if fhi == 0:
        return hi, hi, 0
    if (flo > 0) == (fhi > 0):
        raise DomainError(f"no sign change on [{lo}, {hi}]")
    it = 0
    while it < maxiter and hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = fn(mid)
        it += 1
        if fm == 0:
            return mid, mid, it
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi, it


# ---------------------------------------------------------------- curves


@dataclass(frozen=True)
class BoundCurve:
    """A named bound evaluated on a closed interval; never extrapolated.

    ``domain`` is None when the bound is vacuous for its parameters.
    """

    name: str
    params: dict[str, Any]
    direction: str
    domain: tuple[float, float] | None
    fn: Callable[[float], float] = field(repr=False, compare=False)

    def contains(self, x: float) -> bool:
        return self.domain is not None and self.domain[0] <= x <= self.domain[1]

    def __call__(self, x: float) -> float:
        if not self.contains(x):
            raise DomainError(f"{self.label}: {x} outside domain {self.domain}")
        return self.fn(x)

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.name}({inner})"

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "params": self.params,
            "direction": self.direction,
            "domain": list(self.domain) if self.domain else None,
        }


# A(q) lower bounds quoted from the literature, keyed by q.
KNOWN_IHARA = {5: 0.727}


@dataclass(frozen=True)
class GenusRatio:
    q: int
    gamma: float
    source: str

    @classmethod
    def for_field(cls, q: int) -> GenusRatio:
        r = math.isqrt(q)
        if r * r == q:
            return cls(q, 1 / (r - 1), "square_field")
        if q in KNOWN_IHARA:
            return cls(q, 1 / KNOWN_IHARA[q], "known_lower_bound")
        raise DomainError(f"no Ihara constant known for q={q}; pass gamma explicitly")

    @classmethod
    def user(cls, q: int, gamma: float) -> GenusRatio:
        return cls(q, gamma, "user")


# ---------------------------------------------------------------- Astola


@dataclass(frozen=True)
class AstolaSolution:
    q: int
    s: int
    delta: float
    alpha: float
    beta: float
    rate: float

    def residuals(self) -> tuple[float, float]:
        i = np.arange(1, self.s + 1)
        pw = self.beta**i
        r1 = self.alpha * (1 + 2 * pw.sum()) - 1
        r2 = self.alpha * float((i * pw).sum()) - self.delta * self.s / 2
        return float(r1), float(r2)


def _check_odd_q(q: int) -> int:
    if not isinstance(q, (int, np.integer)) or q < 3 or q % 2 == 0:
        raise ValueError(f"Astola bound needs an odd alphabet size q >= 3, got {q!r}")
    return (int(q) - 1) // 2


def astola_max_delta(q: int) -> float:
    s = _check_odd_q(q)
    return (s + 1) / (2 * s + 1)


def _power_sums(beta: float, s: int) -> tuple[float, float]:
    """(sum beta^i, sum i beta^i) for i = 1..s."""
    if beta < 0.9:
        bs = beta**s
        one = 1 - beta
        plain = beta * (1 - bs) / one
        weighted = beta * (1 - (s + 1) * bs + s * bs * beta) / (one * one)
        return plain, weighted
    # geometric closed forms cancel badly near beta = 1
    i = np.arange(1, s + 1)
    pw = beta**i
    return float(pw.sum()), float((i * pw).sum())


def astola_solve(delta: float, q: int) -> AstolaSolution:
    """Solve for (alpha, beta) with beta restricted to [0, 1]."""
    s = _check_odd_q(q)
    if not 0 <= delta <= astola_max_delta(q):
        raise DomainError(f"delta={delta} outside [0, {astola_max_delta(q)}] for q={q}")
    if delta == 0:
        return AstolaSolution(q, s, 0.0, 1.0, 0.0, 1.0)
    target = delta * s / 2

    def h(beta: float) -> float:
        plain, weighted = _power_sums(beta, s)
        return weighted / (1 + 2 * plain) - target

    if h(1.0) <= 0:
        # delta at the top of the range, up to rounding
        return AstolaSolution(q, s, delta, 1 / q, 1.0, 0.0)
    lo, hi, _ = bisect(h, 0.0, 1.0)
    beta = 0.5 * (lo + hi) if hi > lo else lo
    alpha = 1 / (1 + 2 * _power_sums(beta, s)[0])
    rate = 1 + (math.log(alpha) + delta * s * math.log(beta)) / math.log(q)
    return AstolaSolution(q, s, delta, alpha, beta, rate)


def astola_rate(delta: float, q: int) -> float:
    return astola_solve(delta, q).rate


# ---------------------------------------------------------------- Gardy-Sole


def lee_entropy(x: float, q: int) -> float:
    if x < 0:
        raise ValueError(f"x={x} must be >= 0")
    if q < 2:
        raise ValueError(f"q={q} must be >= 2")
    if x == 0:
        return 0.0
    root = math.sqrt(x * x + 1)
    # sqrt(x^2+1) - 1 without cancellation
    small = x * x / (root + 1)
    return (x * math.log(x) + math.asinh(x) - x * math.log(small)) / math.log(q)


@lru_cache(maxsize=None)
def lee_entropy_root(q: int) -> float:
    """The x > 0 with L_q(x) = 1."""
    hi = 1.0
    while lee_entropy(hi, q) < 1:
        hi *= 2
    lo, hi, _ = bisect(lambda x: lee_entropy(x, q) - 1, 0.0, hi)
    return 0.5 * (lo + hi)


def gardy_sole_rate(delta: float, q: int) -> float:
    root = lee_entropy_root(q)
    if not 0 <= delta <= root:
        raise DomainError(f"delta={delta} outside [0, {root}] for q={q}")
    return max(0.0, 1 - lee_entropy(delta, q))


# ---------------------------------------------------------------- concatenation


def admissible_t(p: int) -> list[int]:
    """t in [1, (p+1)/2] with p = t+1 mod 2; for odd p these are the even t."""
    if not is_prime(p) or p < 7:
        raise ValueError(f"concatenation bound needs a prime p >= 7, got {p}")
    return [t for t in range(1, (p + 1) // 2 + 1) if (p - t - 1) % 2 == 0]


class _Line(NamedTuple):
    intercept: float
    slope: float

    @property
    def zero(self) -> float:
        return self.intercept / self.slope


def _concat_coeffs(p: int, t: int) -> _Line:
    if t not in admissible_t(p):
        raise ValueError(f"t={t} is not admissible for p={p}")
    k = p - 1 - t
    rhs = 1 - 1 / (p ** ((p - t - 1) // 2) - 1)
    return _Line(k / (p - 1) * rhs, k / (2 * t))


def concat_line(p: int, t: int) -> BoundCurve:
    line = _concat_coeffs(p, t)

    def fn(delta: float) -> float:
        return max(0.0, line.intercept - line.slope * delta)

    return BoundCurve("concat", {"p": p, "t": t}, "delta_to_R", (0.0, line.zero), fn)


def concat_envelope(delta: float, p: int) -> float:
    """Best concatenation rate over all admissible inner-code parameters."""
    if delta < 0:
        raise DomainError(f"delta={delta} < 0")
    best = 0.0
    for t in admissible_t(p):
        line = _concat_coeffs(p, t)
        best = max(best, line.intercept - line.slope * delta)
    return best


def _concat_envelope_zero(p: int) -> float:
    return max(_concat_coeffs(p, t).zero for t in admissible_t(p))


def concat_asymptote(delta: float) -> float:
    """Large-p limit 2R + delta = 1 of the concatenation lines."""
    return max(0.0, (1 - delta) / 2)


# ---------------------------------------------------------------- Victoria


def victoria_rate(delta: float, gamma: float) -> float:
    if delta < 0:
        raise DomainError(f"delta={delta} < 0")
    if not 0 <= gamma < 1:
        raise DomainError(f"gamma={gamma} outside [0, 1)")
    return max(0.0, -gamma - 2 * delta + math.sqrt(4 * delta * delta + 1))


def victoria_zero(gamma: float) -> float:
    """Where the Victoria rate reaches 0; inf for gamma = 0."""
    if gamma == 0:
        return math.inf
    return (1 - gamma * gamma) / (4 * gamma)


# ---------------------------------------------------------------- descent


def profile_f(x: float, p: int) -> float:
    if not 1 / (p * p) <= x <= 1:
        raise DomainError(f"x={x} outside [1/p^2, 1] for p={p}")
    # 1/x can overshoot p^2 by an ulp at the left edge
    return x / 2 * weight_sum_W(min(1 / x, p * p), p)


def profile_g(x: float) -> float:
    if not 0 < x <= 1:
        raise DomainError(f"x={x} outside (0, 1]")
    return (1 - x) / 6 * math.sqrt((2 - x) / x)


class DescentDelta(NamedTuple):
    value: float
    floor: float


def descent_delta(R: float, gamma: float, p: int) -> DescentDelta:
    """Relative Lee distance reached at rate R by the base-field descent."""
    x = R + gamma
    if not 0 < R < 1 - gamma:
        raise DomainError(f"R={R} outside (0, {1 - gamma})")
    if 1 / x > p * p:
        raise DomainError(f"1/(R+gamma) = {1 / x} exceeds p^2")
    value = x / 2 * weight_sum_W(1 / x, p)
    floor = (1 - x) / 6 * math.sqrt(2 / x - 1)
    return DescentDelta(value, floor)


def corollary2_coefficients(M: int) -> tuple[Fraction, Fraction]:
    """(a_M, b_M) with delta = a_M - b_M (R + gamma) on B(M) <= 1/(R+gamma) <= B(M+1)."""
    return Fraction(M + 1, 2), Fraction((M + 1) * (2 * M * M + 4 * M + 3), 6)


@dataclass(frozen=True)
class PiecewiseLine:
    """Segments (C(M), C(M+1), c_M, d_M): x = c_M - d_M * delta there."""

    segments: tuple[tuple[Fraction, Fraction, Fraction, Fraction], ...]

    @property
    def breakpoints(self) -> list[Fraction]:
        return [s[0] for s in self.segments] + [self.segments[-1][1]]

    def __call__(self, delta: float) -> float:
        lo, hi = self.segments[0][0], self.segments[-1][1]
        if not lo <= delta <= hi:
            raise DomainError(f"delta={delta} outside [{float(lo)}, {float(hi)}]")
        j = min(bisect_right(self.breakpoints, delta) - 1, len(self.segments) - 1)
        _, _, c, d = self.segments[j]
        return float(c) - float(d) * delta


def f_breakpoint(M: int, p: int) -> Fraction:
    """C(M) = f(1/B(M)) = W(B(M)) / (2 B(M))."""
    tab = sphere_table(p)
    return Fraction(tab.Wb[M], 2 * tab.B[M])


@lru_cache(maxsize=None)
def f_inverse_segments(p: int) -> PiecewiseLine:
    # f(x) = (M+1)/2 - x ((M+1)B(M) - W(B(M)))/2 while 1/x in [B(M), B(M+1)]
    tab = sphere_table(p)
    segs = []
    for M in range(p - 1):
        slope = Fraction((M + 1) * tab.B[M] - tab.Wb[M], 2)
        c = Fraction(M + 1, 2) / slope
        d = 1 / slope
        segs.append((f_breakpoint(M, p), f_breakpoint(M + 1, p), c, d))
    return PiecewiseLine(tuple(segs))


def f_inverse(delta: float, p: int) -> float:
    """x in [1/p^2, 1] with f(x) = delta; the genus shift is not applied."""
    return f_inverse_segments(p)(delta)


def _g_inverse_bracket(delta: float) -> float:
    lo = 0.5
    while profile_g(lo) <= delta:
        lo /= 2
        if lo < 1e-300:
            raise DomainError(f"delta={delta} too large")
    return lo


def g_inverse(delta: float) -> float:
    """x in (0, 1] with g(x) = delta, by bisection on the decreasing g."""
    if delta < 0:
        raise DomainError(f"delta={delta} < 0")
    if delta == 0:
        return 1.0
    lo, hi, _ = bisect(lambda x: profile_g(x) - delta, _g_inverse_bracket(delta), 1.0)
    return 0.5 * (lo + hi)


def _cubic(x: float, delta: float) -> float:
    return x**3 - 4 * x**2 + (5 + 36 * delta**2) * x - 2


def g_inverse_cardano(delta: float) -> float:
    """Closed-form g^{-1} via Cardano on x^3 - 4x^2 + (5 + 36 delta^2) x - 2 = 0.

    The cubic comes from squaring g(x) = delta, so candidates are screened
    for x in (0, 1] and g(x) = delta.  Shift x = y + 4/3 gives
    y^3 + u y + v = 0 with u = 36 delta^2 - 1/3 and v = 48 delta^2 - 2/27.
    """
    if delta < 0:
        raise DomainError(f"delta={delta} < 0")
    d2 = delta * delta
    u = 36 * d2 - 1 / 3
    v = 48 * d2 - 2 / 27
    disc = 6912 * d2**3 + 2112 * d2**2 - 16 * d2 / 3
    if disc > 0:
        sq = math.sqrt(disc)
        ys = [float(np.cbrt((-v - sq) / 2) + np.cbrt((-v + sq) / 2))]
    elif disc == 0:
        ys = [-3 * v / (2 * u), 3 * v / u] if u != 0 else [0.0]
    else:
        amp = 2 * math.sqrt(-u / 3)
        mag = math.sqrt(27 * v * v / (-4 * u**3))
        # printed form takes -mag; the true argument carries -sign(v)
        printed = math.acos(max(-1.0, -mag)) / 3
        signed = math.acos(max(-1.0, min(1.0, math.copysign(mag, -v)))) / 3
        ys = [amp * math.cos(printed + 2 * math.pi / 3)]
        ys += [amp * math.cos(signed - 2 * math.pi * k / 3) for k in (2, 0, 1)]
    tol = 1e-9 * max(1.0, delta)
    for idx, y in enumerate(ys):
        x = y + 4 / 3
        if not 0 < x <= 1 + 1e-12:
            continue
        x = min(x, 1.0)
        if abs(_cubic(x, delta)) <= 1e-8 * max(1.0, 36 * d2) and abs(profile_g(x) - delta) <= tol:
            if idx and disc < 0:
                log.debug("g_inverse_cardano: printed branch rejected at delta=%r", delta)
            return x
    raise DomainError(f"no admissible Cardano root for delta={delta}")


def alpha_lee_lower(delta: float, p: int) -> float:
    """Rate guaranteed over F_p at relative Lee distance delta, genus ratio 1/(p-1)."""
    if delta < 0:
        raise DomainError(f"delta={delta} < 0")
    gamma = 1 / (p - 1)
    cands = [g_inverse(delta) - gamma, 0.0]
    if delta <= f_inverse_segments(p).segments[-1][1]:
        cands.append(f_inverse(delta, p) - gamma)
    return max(cands)


def _descent_zero(p: int) -> float:
    """delta where f^{-1}(delta) - 1/(p-1) = 0."""
    return profile_f(1 / (p - 1), p)


def _descent_g_zero(p: int) -> float:
    return profile_g(1 / (p - 1))


# ---------------------------------------------------------------- registry


def _victoria_curve(gamma: float, q: int | None = None, source: str = "user") -> BoundCurve:
    params: dict[str, Any] = {"gamma": gamma}
    if q is not None:
        params = {"q": q, "gamma": gamma, "source": source}
    if not 0 <= gamma < 1:
        return BoundCurve("victoria", params, "delta_to_R", None, lambda d: victoria_rate(d, gamma))
    return BoundCurve("victoria", params, "delta_to_R", (0.0, victoria_zero(gamma)), lambda d: victoria_rate(d, gamma))


def make_curve(name: str, **params: Any) -> BoundCurve:
    """Build a delta -> R curve by name.

    Names: astola(q), gardy-sole(q), concat(p, t), concat-envelope(p),
    concat-asymptote(), victoria(gamma | q), descent(p), descent-g(p).
    """
    if name == "astola":
        q = int(params["q"])
        return BoundCurve("astola", {"q": q}, "delta_to_R", (0.0, astola_max_delta(q)), lambda d: astola_rate(d, q))
    if name == "gardy-sole":
        q = int(params["q"])
        return BoundCurve("gardy-sole", {"q": q}, "delta_to_R", (0.0, lee_entropy_root(q)), lambda d: gardy_sole_rate(d, q))
    if name == "concat":
        return concat_line(int(params["p"]), int(params["t"]))
    if name == "concat-envelope":
        p = int(params["p"])
        return BoundCurve("concat-envelope", {"p": p}, "delta_to_R", (0.0, _concat_envelope_zero(p)), lambda d: concat_envelope(d, p))
    if name == "concat-asymptote":
        return BoundCurve("concat-asymptote", {}, "delta_to_R", (0.0, 1.0), concat_asymptote)
    if name == "victoria":
        if "gamma" in params and params["gamma"] is not None:
            return _victoria_curve(float(params["gamma"]))
        ratio = GenusRatio.for_field(int(params["q"]))
        return _victoria_curve(ratio.gamma, ratio.q, ratio.source)
    if name == "descent":
        p = int(params["p"])
        return BoundCurve("descent", {"p": p}, "delta_to_R", (0.0, _descent_zero(p)), lambda d: alpha_lee_lower(d, p))
    if name == "descent-g":
        p = int(params["p"])
        gamma = 1 / (p - 1)
        return BoundCurve("descent-g", {"p": p}, "delta_to_R", (0.0, _descent_g_zero(p)), lambda d: max(0.0, g_inverse(d) - gamma))
    raise ValueError(f"unknown curve {name!r}; choose from {', '.join(CURVE_NAMES)}")


CURVE_NAMES = (
    "astola",
    "gardy-sole",
    "concat",
    "concat-envelope",
    "concat-asymptote",
    "victoria",
    "descent",
    "descent-g",
)
