"""Lee weights over Z_q and the sphere/ball/weight-sum combinatorics of F_{p^2}.

F_{p^2} is identified with F_p x F_p through a fixed basis {1, alpha}; the
weight of z = x + y*alpha is wt(x) + wt(y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

__all__ = [
    "LeeAlphabet",
    "SphereTable",
    "sphere_table",
    "lee_weight_symbol",
    "lee_weight_ext_symbol",
    "lee_weight_word",
    "sphere_size",
    "ball_size",
    "weight_sum_W",
    "weight_sum_W_alt",
    "weight_sum_W_approx",
    "weight_sum_sorted",
    "choose_M",
    "choose_M_floor_formula",
    "enumerate_sphere",
]


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


def _check_odd_prime(p: int) -> None:
    if not isinstance(p, int) or not _is_odd_prime(p):
        raise ValueError(f"p must be an odd prime, got {p!r}")


@dataclass(frozen=True)
class LeeAlphabet:
    q: int

    def __post_init__(self) -> None:
        if not isinstance(self.q, int) or self.q < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.q!r}")

    @property
    def max_weight(self) -> int:
        return self.q // 2

    def weight(self, x: int) -> int:
        return lee_weight_symbol(x, self.q)


def lee_weight_symbol(x: int, q: int) -> int:
    """Lee weight ``min(x, q - x)`` of a residue ``0 <= x < q``."""
    if q < 2:
        raise ValueError(f"modulus must be >= 2, got {q}")
    if not 0 <= x < q:
        raise ValueError(f"symbol {x} out of range for Z_{q}")
    return min(x, q - x)


def lee_weight_ext_symbol(z: tuple[int, int], p: int) -> int:
    x, y = z
    return lee_weight_symbol(x, p) + lee_weight_symbol(y, p)


def lee_weight_word(c: Iterable[int], q: int) -> int:
    return sum(lee_weight_symbol(int(x), q) for x in c)


def sphere_size(j: int, p: int) -> int:
    """Number of symbols of F_{p^2} with extended Lee weight exactly ``j``."""
    _check_odd_prime(p)
    if not 0 <= j <= p - 1:
        raise ValueError(f"radius {j} out of range [0, {p - 1}]")
    if j == 0:
        return 1
    if j <= (p - 1) // 2:
        return 4 * j
    return 4 * (p - j)


def ball_size(M: int, p: int) -> int:
    _check_odd_prime(p)
    if not 0 <= M <= p - 1:
        raise ValueError(f"radius {M} out of range [0, {p - 1}]")
    if M <= (p - 1) // 2:
        return 1 + 2 * M * (M + 1)
    return p * p - 2 * (p - M) * (p - 1 - M)


def _ball_weight(M: int, p: int) -> int:
    """W(B(M)) from the closed forms; exact integer."""
    if M <= (p - 1) // 2:
        num = 2 * M * (M + 1) * (2 * M + 1)
        return num // 3
    num = 3 * p * (p - 1) * (p + 1) - 4 * (p - M) * (p - 1 - M) * (p + 1 + 2 * M)
    return num // 6


@dataclass(frozen=True)
class SphereTable:
    """Exact per-prime tables: ``S[j]``, ``B[M]`` and ``Wb[M] = W(B(M))``."""

    p: int
    S: tuple[int, ...]
    B: tuple[int, ...]
    Wb: tuple[int, ...]

    def rows(self) -> list[tuple[int, int, int, int]]:
        return [(M, self.S[M], self.B[M], self.Wb[M]) for M in range(self.p)]


@lru_cache(maxsize=None)
def sphere_table(p: int) -> SphereTable:
    _check_odd_prime(p)
    S = tuple(sphere_size(j, p) for j in range(p))
    B = tuple(ball_size(M, p) for M in range(p))
    Wb = tuple(_ball_weight(M, p) for M in range(p))
    return SphereTable(p, S, B, Wb)


def _check_t(t: float, p: int) -> None:
    if not 1 <= t <= p * p:
        raise ValueError(f"t={t} outside [1, {p * p}]")


def choose_M(tau: float, p: int) -> int:
    """Largest M with B(M) <= tau; then B(M) <= tau <= B(M+1).

    Returns p-1 at tau = p^2, where B(M+1) is not defined.
    """
    _check_odd_prime(p)
    _check_t(tau, p)
    B = sphere_table(p).B
    M = 0
    while M + 1 < p and B[M + 1] <= tau:
        M += 1
    return M


def choose_M_floor_formula(tau: float, p: int) -> int:
    """The two-branch floor expression for M, kept as a cross-check."""
    _check_odd_prime(p)
    _check_t(tau, p)
    if tau <= (p * p + 4 * p - 3) / 2:
        return math.floor(0.5 * (-1 + math.sqrt(2 * tau - 1)))
    return math.floor(p - 0.5 * (1 + math.sqrt(2 * p * p + 1 - 2 * tau)))


def weight_sum_W(t: float, p: int) -> float:
    """Sum of the Lee weights of the ``t`` lightest symbols of F_{p^2}.

    Real ``t`` is allowed; W is linear between ball breakpoints.
    """
    M = choose_M(t, p)
    tab = sphere_table(p)
    return tab.Wb[M] + (M + 1) * (t - tab.B[M])


def weight_sum_W_alt(t: float, p: int) -> float:
    """W through the second ("also written") pair of closed forms."""
    M = choose_M(t, p)
    if M <= (p - 1) // 2:
        return (M + 1) * (t - 1) - Fraction(2 * M * (M + 1) * (M + 2), 3)
    return (
        (M + 1) * (t - p * p)
        + Fraction(p * (p - 1) * (p + 1), 2)
        - Fraction(2 * (p - M) * (p - 1 - M) * (p - 2 - M), 3)
    )


def weight_sum_W_approx(t: float) -> float:
    """Convex lower bound ``(t - 1) * sqrt(2t - 1) / 3`` for W."""
    if t < 1:
        raise ValueError(f"t={t} must be >= 1")
    return (t - 1) * math.sqrt(2 * t - 1) / 3


def weight_sum_sorted(t: int, p: int) -> int:
    """Independent oracle: sort all p^2 symbol weights and add the t smallest."""
    _check_odd_prime(p)
    _check_t(t, p)
    weights = sorted(
        lee_weight_symbol(x, p) + lee_weight_symbol(y, p)
        for x in range(p)
        for y in range(p)
    )
    return sum(weights[:t])


def enumerate_sphere(j: int, p: int) -> list[tuple[int, int]]:
    """All (x, y) in F_p x F_p with extended Lee weight ``j``, by direct scan."""
    _check_odd_prime(p)
    if not 0 <= j <= p - 1:
        raise ValueError(f"radius {j} out of range [0, {p - 1}]")
    return [
        (x, y)
        for x in range(p)
        for y in range(p)
        if lee_weight_symbol(x, p) + lee_weight_symbol(y, p) == j
    ]

