"""Concrete linear codes and exhaustive distance oracles.

All constructive checks use the projective line (genus 0): the evaluation
code C(D, rP_inf) is spanned by the evaluations of 1, X, ..., X^r.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple, Sequence

import numpy as np

from .fields import PrimeField, QuadExtField, field_for_order, primitive_element
from .lee_metric import weight_sum_W, weight_sum_W_approx


__all__ = [
    "LinearCode",
    "EvaluationCodeSpec",
    "ConcatenationScheme",
    "CodeConstructionError",
    "EnumerationCapExceeded",
    "default_enum_cap",
    "rs_code",
    "affine_points",
    "shorten_at",
    "expand_code",
    "bch_lee_inner",
    "concatenate",
    "min_lee_distance_bruteforce",
    "min_hamming_distance_bruteforce",
    "all_codewords",
    "victorian_bound_value",
    "descent_bound_value",
    "build_code",
    "code_to_json",
    "code_from_json",
]

ENUM_CAP_ENV = "LEEBOUNDS_ENUM_CAP"
DEFAULT_ENUM_CAP = 10**8
_CHUNK = 1 << 17


class CodeConstructionError(RuntimeError):
    """A construction did not meet its certified parameters."""


class EnumerationCapExceeded(RuntimeError):
    pass


def default_enum_cap() -> int:
    raw = os.environ.get(ENUM_CAP_ENV)
    return int(float(raw)) if raw else DEFAULT_ENUM_CAP


def _rank(F, rows: Sequence[Sequence[int]]) -> int:
    m = [list(r) for r in rows]
    if not m:
        return 0
    n = len(m[0])
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = F.inv(m[rank][c])
        m[rank] = [F.mul(inv, x) for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c]
                m[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def _nullspace_prime(H: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Basis of {c : H c^T = 0} over F_p."""
    F = PrimeField(p)
    m = [list(r) for r in H]
    n = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for f in (c for c in range(n) if c not in pivots):
        v = [0] * n
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = -m[i][f] % p
        basis.append(v)
    return basis


@dataclass(frozen=True)
class LinearCode:
    """A k x n generator matrix over GF(field_order), entries int-encoded."""

    field_order: int
    n: int
    k: int
    generator: tuple[tuple[int, ...], ...]
    provenance: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        gen = tuple(tuple(int(x) for x in row) for row in self.generator)
        object.__setattr__(self, "generator", gen)
        if len(gen) != self.k or any(len(row) != self.n for row in gen):
            raise ValueError(f"generator shape does not match [{self.n}, {self.k}]")
        if self.k > self.n:
            raise ValueError("dimension exceeds length")
        if any(not 0 <= x < self.field_order for row in gen for x in row):
            raise ValueError("generator entry outside the field")
        if _rank(self.field, gen) != self.k:
            raise ValueError("generator matrix is not of full row rank")

    @property
    def field(self) -> PrimeField | QuadExtField:
        return field_for_order(self.field_order)

    @property
    def G(self) -> np.ndarray:
        return np.array(self.generator, dtype=np.int64).reshape(self.k, self.n)

    def encode(self, message: Sequence[int]) -> list[int]:
        F = self.field
        out = [0] * self.n
        for m, row in zip(message, self.generator):
            if m:
                out = [F.add(o, F.mul(m, g)) for o, g in zip(out, row)]
        return out

    def __repr__(self) -> str:
        return f"LinearCode([{self.n}, {self.k}] over GF({self.field_order}))"


@dataclass(frozen=True)
class EvaluationCodeSpec:
    field_order: int
    eval_points: tuple[int, ...]
    r: int

    def __post_init__(self) -> None:
        pts = tuple(int(x) for x in self.eval_points)
        object.__setattr__(self, "eval_points", pts)
        if len(set(pts)) != len(pts):
            raise ValueError("evaluation points must be distinct")
        if any(not 0 <= x < self.field_order for x in pts):
            raise ValueError("evaluation point outside the field")
        if self.r < 1:
            raise ValueError("degree bound r must be >= 1")
        if self.r >= len(pts):
            raise ValueError(f"r={self.r} must be < n={len(pts)}")


@dataclass(frozen=True)
class ConcatenationScheme:
    outer: LinearCode
    inner: LinearCode

    def __post_init__(self) -> None:
        q = self.inner.field_order
        if self.outer.field_order != q**self.inner.k:
            raise ValueError(
                f"outer field order {self.outer.field_order} != {q}^{self.inner.k}"
            )
        if self.inner.k not in (1, 2):
            raise ValueError("only inner dimensions 1 and 2 are supported")


def affine_points(q: int) -> tuple[int, ...]:
    """All elements of GF(q), i.e. the affine points of the projective line."""
    return tuple(field_for_order(q).elements())


def rs_code(spec: EvaluationCodeSpec) -> LinearCode:
    F = field_for_order(spec.field_order)
    rows = [[F.pow(x, i) for x in spec.eval_points] for i in range(spec.r + 1)]
    return LinearCode(
        spec.field_order,
        len(spec.eval_points),
        spec.r + 1,
        rows,
        {"construction": "rs", "params": {"field_order": spec.field_order, "n": len(spec.eval_points), "r": spec.r}},
    )


def shorten_at(code: LinearCode, position: int = 0) -> LinearCode:
    """Subcode vanishing at ``position``, with that coordinate deleted."""
    if not 0 <= position < code.n:
        raise ValueError(f"position {position} out of range")
    F = code.field
    rows = [list(r) for r in code.generator]
    piv = next((i for i, r in enumerate(rows) if r[position] != 0), None)
    if piv is None:
        raise CodeConstructionError("every codeword vanishes at the shortening position")
    prow = rows.pop(piv)
    pinv = F.inv(prow[position])
    new_rows = []
    for r in rows:
        f = F.mul(r[position], pinv)
        r2 = [F.sub(a, F.mul(f, b)) for a, b in zip(r, prow)]
        new_rows.append(r2[:position] + r2[position + 1 :])
    prov = {"construction": "shortened", "params": {"position": position}, "parent": code.provenance}
    return LinearCode(code.field_order, code.n - 1, code.k - 1, new_rows, prov)


def expand_code(code: LinearCode) -> LinearCode:
    """[n, k] over F_{p^2} -> [2n, 2k] over F_p through the basis {1, alpha}."""
    F = code.field
    if not isinstance(F, QuadExtField):
        raise ValueError("expand_code needs a code over F_{p^2}")
    rows = []
    for row in code.generator:
        for b in (1, F.alpha):
            rows.append([c for z in row for c in F.coords(F.mul(b, z))])
    prov = {"construction": "expanded", "params": {"p": F.p, "d": F.d}, "parent": code.provenance}
    return LinearCode(F.p, 2 * code.n, 2 * code.k, rows, prov)


def bch_lee_inner(p: int, t: int, *, certify: bool | None = None, cap: int | None = None) -> LinearCode:
    """Length p-1 code over Z_p with Lee distance >= 2t.

    Parity checks are sum_j c_j g^(i*j) = 0 for i = 0..t-1, g primitive.  With
    ``certify`` left as None the distance is brute-forced whenever p^k fits
    the enumeration cap; True forces it (raising on cap overflow).
    """
    if not PrimeField(p).p >= 5:
        raise ValueError("need a prime p >= 5")
    if not 1 <= t <= (p + 1) // 2:
        raise ValueError(f"t={t} outside [1, {(p + 1) // 2}]")
    g = primitive_element(PrimeField(p))
    H = [[pow(g, i * j, p) for j in range(p - 1)] for i in range(t)]
    basis = _nullspace_prime(H, p)
    code = LinearCode(p, p - 1, len(basis), basis, {"construction": "bch_lee_inner", "params": {"p": p, "t": t}})
    if code.k < p - 1 - t:
        raise CodeConstructionError(f"dimension {code.k} < {p - 1 - t}")
    cap = default_enum_cap() if cap is None else cap
    if certify is None:
        certify = p**code.k <= cap
    if certify:
        d = min_lee_distance_bruteforce(code, cap=cap)
        if d < 2 * t:
            raise CodeConstructionError(f"Lee distance {d} < {2 * t} for p={p}, t={t}")
        code.provenance["certified_lee_distance"] = d
    return code


def concatenate(scheme: ConcatenationScheme) -> LinearCode:
    """Outer symbols are split into F_q-coordinates and encoded by the inner code."""
    outer, inner = scheme.outer, scheme.inner
    q = inner.field_order
    Fo = outer.field
    Gi = inner.G
    basis = [1] if inner.k == 1 else [1, Fo.alpha]
    rows = []
    for row in outer.generator:
        for b in basis:
            word = []
            for z in row:
                msg = np.array(Fo.coords(Fo.mul(b, z)), dtype=np.int64)
                word.extend(int(x) for x in msg @ Gi % q)
            rows.append(word)
    prov = {
        "construction": "concatenation",
        "params": {"outer": outer.provenance, "inner": inner.provenance},
    }
    return LinearCode(q, outer.n * inner.n, outer.k * inner.k, rows, prov)


def _prime_view(code: LinearCode) -> tuple[np.ndarray, int, int]:
    """Generator over the prime field and the number of F_p coordinates per symbol."""
    F = code.field
    if isinstance(F, QuadExtField):
        return expand_code(code).G, F.p, 2
    return code.G, F.p, 1


def _min_weight_range(G: np.ndarray, p: int, group: int, metric: str, lo: int, hi: int) -> int:
    k, n = G.shape
    best = np.iinfo(np.int64).max
    for start in range(lo, hi, _CHUNK):
        idx = np.arange(start, min(hi, start + _CHUNK), dtype=np.int64)
        digits = np.empty((idx.size, k), dtype=np.int64)
        rest = idx
        for i in range(k):
            rest, digits[:, i] = np.divmod(rest, p)
        words = digits @ G % p
        if metric == "lee":
            w = np.minimum(words, p - words).sum(axis=1)
        else:
            nz = words.reshape(idx.size, n // group, group).any(axis=2)
            w = nz.sum(axis=1)
        best = min(best, int(w.min()))
    return best


def _min_distance(code: LinearCode, metric: str, cap: int | None, workers: int) -> int:
    if code.k == 0:
        raise ValueError("code has no nonzero codewords")
    G, p, group = _prime_view(code)
    total = p ** G.shape[0]
    cap = default_enum_cap() if cap is None else cap
    if total > cap:
        raise EnumerationCapExceeded(f"{total} messages exceed the enumeration cap {cap}")
    workers = max(1, min(workers, total - 1))
    if workers == 1:
        return _min_weight_range(G, p, group, metric, 1, total)
    bounds = np.linspace(1, total, workers + 1).astype(np.int64)
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futs = [
            ex.submit(_min_weight_range, G, p, group, metric, int(a), int(b))
            for a, b in zip(bounds[:-1], bounds[1:])
            if b > a
        ]
        return min(f.result() for f in futs)


def min_lee_distance_bruteforce(code: LinearCode, *, cap: int | None = None, workers: int = 1) -> int:
    """Exact minimum Lee weight over all q^k - 1 nonzero codewords.

    Codes over F_{p^2} are weighed through their expansion, which carries
    the same Lee weight symbol by symbol.
    """
    return _min_distance(code, "lee", cap, workers)


def min_hamming_distance_bruteforce(code: LinearCode, *, cap: int | None = None, workers: int = 1) -> int:
    return _min_distance(code, "hamming", cap, workers)


def all_codewords(code: LinearCode, *, cap: int | None = None) -> np.ndarray:
    """Every codeword (q^k rows) in the code's native int encoding."""
    G, p, group = _prime_view(code)
    total = p ** G.shape[0]
    cap = default_enum_cap() if cap is None else cap
    if total > cap:
        raise EnumerationCapExceeded(f"{total} codewords exceed the enumeration cap {cap}")
    idx = np.arange(total, dtype=np.int64)
    digits = np.empty((total, G.shape[0]), dtype=np.int64)
    for i in range(G.shape[0]):
        idx, digits[:, i] = np.divmod(idx, p)
    words = digits @ G % p
    if group == 2:
        words = words[:, 0::2] + p * words[:, 1::2]
    return words


def victorian_bound_value(n: int, r: int) -> Fraction:
    """(n^2 - r^2) / (4r), the Lee distance guarantee of the shortened code."""
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got r={r}, n={n}")
    return Fraction(n * n - r * r, 4 * r)


class DescentBound(NamedTuple):
    value: Fraction
    approx: float


def descent_bound_value(n: int, r: int, p: int) -> DescentBound:
    """r * W(n/r) for the expanded shortened code, with its W_approx floor."""
    if not 0 < r < n:
        raise ValueError(f"need 0 < r < n, got r={r}, n={n}")
    tau = Fraction(n, r)
    if tau > p * p:
        raise ValueError(f"n/r = {tau} exceeds p^2 = {p * p}")
    value = r * weight_sum_W(tau, p)
    approx = (n - r) / 3 * math.sqrt((2 * n - r) / r)
    assert abs(approx - r * weight_sum_W_approx(n / r)) < 1e-9 * max(1.0, approx)
    return DescentBound(Fraction(value), approx)


def code_to_json(code: LinearCode) -> str:
    doc = {
        "field_order": code.field_order,
        "n": code.n,
        "k": code.k,
        "generator": [list(r) for r in code.generator],
        "provenance": code.provenance,
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def code_from_json(text: str | dict) -> LinearCode:
    doc = json.loads(text) if isinstance(text, str) else text
    return LinearCode(
        int(doc["field_order"]),
        int(doc["n"]),
        int(doc["k"]),
        doc["generator"],
        dict(doc.get("provenance", {})),
    )


def build_code(spec: dict) -> LinearCode:
    """Build a code from a JSON-style request.

    Either a full code document (has ``generator``) or
    ``{"construction": name, "params": {...}}`` with name one of
    ``rs``, ``shortened_rs``, ``expanded_shortened_rs``, ``bch_lee_inner``,
    ``concatenation``.
    """
    if "generator" in spec:
        return code_from_json(spec)
    kind = spec.get("construction")
    prm = dict(spec.get("params", {}))
    if kind in ("rs", "shortened_rs", "expanded_shortened_rs"):
        q = int(prm["field_order"])
        pts = tuple(prm.get("points", affine_points(q)))
        code = rs_code(EvaluationCodeSpec(q, pts, int(prm["r"])))
        if kind != "rs":
            code = shorten_at(code, int(prm.get("position", 0)))
        if kind == "expanded_shortened_rs":
            code = expand_code(code)
        return code
    if kind == "bch_lee_inner":
        return bch_lee_inner(int(prm["p"]), int(prm["t"]), certify=prm.get("certify"))
    if kind == "concatenation":
        return concatenate(ConcatenationScheme(build_code(prm["outer"]), build_code(prm["inner"])))
    raise ValueError(f"unknown construction {kind!r}")
