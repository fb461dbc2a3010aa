"""Arithmetic in F_p and in F_{p^2} = F_p + F_p*alpha with alpha^2 = d.

Matrices in :mod:`leebounds.codes` store field elements as plain ints.  For
F_p that is the residue; for F_{p^2} the element x + y*alpha is stored as
``x + p*y``.  Both field classes expose the same small integer-level API
(``add``, ``sub``, ``mul``, ``neg``, ``inv``, ``pow``) over that encoding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "PrimeField",
    "QuadExtField",
    "QuadExtElement",
    "is_prime",
    "fp_arith",
    "quad_ext_arith",
    "expand_symbol",
    "smallest_nonresidue",
    "primitive_element",
    "field_for_order",
]

MAX_FIELD_ORDER = 2**32


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for sp in small:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"{self.p!r} is not prime")

    @property
    def order(self) -> int:
        return self.p

    @property
    def char(self) -> int:
        return self.p

    def _check(self, *xs: int) -> None:
        for x in xs:
            if not 0 <= x < self.p:
                raise ValueError(f"{x} is not a residue mod {self.p}")

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return pow(a, -1, self.p)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def elements(self) -> range:
        return range(self.p)

    def coords(self, a: int) -> tuple[int]:
        return (a,)

    def __repr__(self) -> str:
        return f"GF({self.p})"


def fp_arith(op: str, *operands: int, p: int) -> int:
    """Single F_p operation by name: add, sub, mul, inv or pow (base, exponent)."""
    F = PrimeField(p)
    if op == "pow":
        a, e = operands
        F._check(a)
        return F.pow(a, e)
    F._check(*operands)
    if op == "inv":
        (a,) = operands
        return F.inv(a)
    a, b = operands
    try:
        return {"add": F.add, "sub": F.sub, "mul": F.mul}[op](a, b)
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None


def smallest_nonresidue(p: int) -> int:
    if p == 2:
        raise ValueError("F_2 has no quadratic non-residue")
    for d in range(2, p):
        if pow(d, (p - 1) // 2, p) == p - 1:
            return d
    raise AssertionError("unreachable for odd prime p")


@dataclass(frozen=True)
class QuadExtElement:
    """x + y*alpha in F_{p^2} with alpha^2 = d."""

    x: int
    y: int
    p: int
    d: int

    def __post_init__(self) -> None:
        if not (0 <= self.x < self.p and 0 <= self.y < self.p and 0 <= self.d < self.p):
            raise ValueError(f"coordinates out of range for p={self.p}")
        if pow(self.d, (self.p - 1) // 2, self.p) != self.p - 1:
            raise ValueError(f"{self.d} is not a non-residue mod {self.p}")

    def _same(self, other: QuadExtElement) -> None:
        if (self.p, self.d) != (other.p, other.d):
            raise ValueError("elements belong to different field presentations")

    def __add__(self, other: QuadExtElement) -> QuadExtElement:
        self._same(other)
        return QuadExtElement((self.x + other.x) % self.p, (self.y + other.y) % self.p, self.p, self.d)

    def __sub__(self, other: QuadExtElement) -> QuadExtElement:
        self._same(other)
        return QuadExtElement((self.x - other.x) % self.p, (self.y - other.y) % self.p, self.p, self.d)

    def __mul__(self, other: QuadExtElement) -> QuadExtElement:
        self._same(other)
        p = self.p
        x = (self.x * other.x + self.d * self.y * other.y) % p
        y = (self.x * other.y + other.x * self.y) % p
        return QuadExtElement(x, y, p, self.d)

    def __pow__(self, e: int) -> QuadExtElement:
        if e < 0:
            return self.inverse() ** (-e)
        result = QuadExtElement(1, 0, self.p, self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def inverse(self) -> QuadExtElement:
        # (x + y a)^-1 = (x - y a) / (x^2 - d y^2); the norm is nonzero off 0
        if self.is_zero():
            raise ZeroDivisionError("0 has no inverse")
        p = self.p
        norm_inv = pow((self.x * self.x - self.d * self.y * self.y) % p, -1, p)
        return QuadExtElement(self.x * norm_inv % p, -self.y * norm_inv % p, p, self.d)

    def encode(self) -> int:
        return self.x + self.p * self.y


def quad_ext_arith(op: str, a: QuadExtElement, b: QuadExtElement | None = None) -> QuadExtElement:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown operation {op!r}")


def expand_symbol(z: QuadExtElement) -> tuple[int, int]:
    """Coordinates of z in the basis {1, alpha}."""
    return (z.x, z.y)


@dataclass(frozen=True)
class QuadExtField:
    """F_{p^2} on the int encoding ``x + p*y``."""

    p: int
    d: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not is_prime(self.p) or self.p == 2:
            raise ValueError(f"need an odd prime, got {self.p!r}")
        if self.d is None:
            object.__setattr__(self, "d", smallest_nonresidue(self.p))
        elif pow(self.d, (self.p - 1) // 2, self.p) != self.p - 1:
            raise ValueError(f"{self.d} is not a non-residue mod {self.p}")

    @property
    def order(self) -> int:
        return self.p * self.p

    @property
    def char(self) -> int:
        return self.p

    @property
    def alpha(self) -> int:
        return self.p

    def element(self, a: int) -> QuadExtElement:
        if not 0 <= a < self.order:
            raise ValueError(f"{a} does not encode an element of GF({self.order})")
        return QuadExtElement(a % self.p, a // self.p, self.p, self.d)

    def coords(self, a: int) -> tuple[int, int]:
        return (a % self.p, a // self.p)

    def add(self, a: int, b: int) -> int:
        p = self.p
        return (a % p + b % p) % p + p * ((a // p + b // p) % p)

    def neg(self, a: int) -> int:
        p = self.p
        return (-(a % p)) % p + p * ((-(a // p)) % p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        p, d = self.p, self.d
        x1, y1 = a % p, a // p
        x2, y2 = b % p, b // p
        return (x1 * x2 + d * y1 * y2) % p + p * ((x1 * y2 + x2 * y1) % p)

    def inv(self, a: int) -> int:
        return self.element(a).inverse().encode()

    def pow(self, a: int, e: int) -> int:
        return (self.element(a) ** e).encode()

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self) -> str:
        return f"GF({self.p}^2, alpha^2={self.d})"


def field_for_order(q: int) -> PrimeField | QuadExtField:
    """Field of order q; q must be a prime or the square of an odd prime."""
    if is_prime(q):
        return PrimeField(q)
    r = math.isqrt(q)
    if r * r == q and is_prime(r) and r != 2:
        return QuadExtField(r)
    raise ValueError(f"unsupported field order {q}: need p or p^2 with p an odd prime")


def _mult_order_ok(F: PrimeField | QuadExtField, g: int) -> bool:
    n = F.order - 1
    return all(F.pow(g, n // f) != 1 for f in _prime_factors(n))


def primitive_element(F: PrimeField | QuadExtField) -> int:
    """Smallest (in the int encoding) generator of the multiplicative group."""
    if F.order > MAX_FIELD_ORDER:
        raise ValueError(f"field order {F.order} beyond desk scale")
    if F.order == 2:
        return 1
    for g in range(2, F.order):
        if _mult_order_ok(F, g):
            return g
    raise AssertionError("no primitive element found")
