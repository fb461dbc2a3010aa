"""Curve comparisons: crossovers, the delta_q table, grids and the desk-scale checks."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Any, Sequence

import numpy as np

from . import codes
from .bounds import BoundCurve, DomainError, bisect, make_curve
from .fields import is_prime

__all__ = [
    "BracketError",
    "AmbiguityError",
    "CrossoverResult",
    "ComparisonGrid",
    "DominanceResult",
    "crossover",
    "delta_q",
    "delta_q_table",
    "comparison_grid",
    "dominance_scan",
    "concat_prime_scan",
    "VerifyConfig",
    "verification_suite",
]

CROSSOVER_TOL = 1e-8
PRESCAN_POINTS = 600


class BracketError(ValueError):
    """The difference of the two curves does not change sign on the interval."""


class AmbiguityError(ValueError):
    """The pre-scan found more than one sign change."""


@dataclass(frozen=True)
class CrossoverResult:
    delta_star: float
    bracket: tuple[float, float]
    curve_a: str
    curve_b: str
    iterations: int


def _prescan_grid(lo: float, hi: float, n: int) -> np.ndarray:
    lin = np.linspace(lo, hi, n)
    if lo > 0:
        lin = np.union1d(lin, np.geomspace(lo, hi, n))
    return lin


def crossover(
    curve_a: BoundCurve,
    curve_b: BoundCurve,
    interval: tuple[float, float],
    *,
    prescan: int = PRESCAN_POINTS,
    tol: float = CROSSOVER_TOL,
) -> CrossoverResult:
    """Unique delta in ``interval`` where ``curve_a - curve_b`` changes sign."""
    lo, hi = interval
    if not (curve_a.contains(lo) and curve_a.contains(hi) and curve_b.contains(lo) and curve_b.contains(hi)):
        raise DomainError(f"interval {interval} not inside both curve domains")

    def diff(x: float) -> float:
        return curve_a(x) - curve_b(x)

    xs = _prescan_grid(lo, hi, prescan)
    signs = np.sign([diff(x) for x in xs])
    nz = np.flatnonzero(signs)
    changes = [i for i, j in zip(nz[:-1], nz[1:]) if signs[i] != signs[j]]
    if not changes:
        raise BracketError(f"{curve_a.label} - {curve_b.label} keeps its sign on {interval}")
    if len(changes) > 1:
        at = ", ".join(f"{xs[i]:.6g}" for i in changes)
        raise AmbiguityError(f"{len(changes)} sign changes near {at}")
    i = changes[0]
    j = nz[nz > i][0]
    a, b, it = bisect(diff, float(xs[i]), float(xs[j]), xtol=tol / 100)
    return CrossoverResult(0.5 * (a + b), (a, b), curve_a.label, curve_b.label, it)


def _round4(x: float) -> str:
    return str(Decimal(repr(x)).quantize(Decimal("0.0001"), rounding=ROUND_HALF_UP))


def delta_q(q: int, interval: tuple[float, float] = (1e-6, 0.2)) -> CrossoverResult:
    """Where the Victoria bound (gamma = 1/(sqrt q - 1)) overtakes Astola for q = p^2."""
    r = math.isqrt(q)
    if r * r != q or not is_prime(r) or r < 5:
        raise ValueError(f"q={q} must be the square of a prime >= 5")
    return crossover(make_curve("astola", q=q), make_curve("victoria", q=q), interval)


def delta_q_table(q_list: Sequence[int]) -> list[dict[str, Any]]:
    rows = []
    for q in q_list:
        res = delta_q(q)
        rows.append({"q": q, "delta_q": res.delta_star, "display": _round4(res.delta_star)})
    return rows


@dataclass
class ComparisonGrid:
    """Curve values on a delta grid; None marks points outside a curve's domain."""

    delta_values: list[float]
    columns: dict[str, list[float | None]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name, col in self.columns.items():
            if len(col) != len(self.delta_values):
                raise ValueError(f"column {name} has the wrong length")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["delta", *self.columns])
        fmt = lambda v: "" if v is None else format(v, ".12g")  # noqa: E731
        for i, d in enumerate(self.delta_values):
            w.writerow([fmt(d), *(fmt(col[i]) for col in self.columns.values())])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"delta": self.delta_values, "columns": self.columns}, indent=2)


def _column(curve: BoundCurve, grid: Sequence[float]) -> list[float | None]:
    return [curve(d) if curve.contains(d) else None for d in grid]


def comparison_grid(curves: Sequence[BoundCurve], delta_grid: Sequence[float], *, workers: int = 1) -> ComparisonGrid:
    grid = [float(d) for d in delta_grid]
    if not grid:
        raise ValueError("empty delta grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("delta grid must be strictly increasing")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            cols = list(ex.map(lambda c: _column(c, grid), curves))
    else:
        cols = [_column(c, grid) for c in curves]
    return ComparisonGrid(grid, {c.label: col for c, col in zip(curves, cols)})


@dataclass(frozen=True)
class DominanceResult:
    relation: str  # a_dominates | b_dominates | crossing | equal | disjoint
    points: int
    a_above: int
    b_above: int
    max_gap_a: float
    max_gap_b: float


def dominance_scan(curve_a: BoundCurve, curve_b: BoundCurve, grid: Sequence[float], *, atol: float = 1e-12) -> DominanceResult:
    """Pointwise order of two curves over the grid points both are defined on."""
    diffs = [curve_a(d) - curve_b(d) for d in grid if curve_a.contains(d) and curve_b.contains(d)]
    if not diffs:
        return DominanceResult("disjoint", 0, 0, 0, 0.0, 0.0)
    arr = np.array(diffs)
    a_above = int((arr > atol).sum())
    b_above = int((arr < -atol).sum())
    if a_above and b_above:
        rel = "crossing"
    elif a_above:
        rel = "a_dominates"
    elif b_above:
        rel = "b_dominates"
    else:
        rel = "equal"
    return DominanceResult(rel, len(diffs), a_above, b_above, float(max(arr.max(), 0)), float(max(-arr.min(), 0)))


def concat_prime_scan(q: int = 121, primes: Sequence[int] | None = None, points: int = 401) -> list[dict[str, Any]]:
    """Victoria(q) against the concatenation envelope for each prime, on [0, victoria zero]."""
    vic = make_curve("victoria", q=q)
    if vic.domain is None:
        raise DomainError(f"victoria bound is vacuous for q={q}")
    primes = primes or [p for p in range(7, 200) if is_prime(p)]
    grid = np.linspace(0.0, vic.domain[1], points)
    out = []
    for p in primes:
        res = dominance_scan(vic, make_curve("concat-envelope", p=p), grid)
        out.append({"p": p, **asdict(res)})
    return out


# ---------------------------------------------------------------- verification


@dataclass
class VerifyConfig:
    victorian: Sequence[tuple[int, Sequence[int]]] = ((7, range(1, 6)), (11, range(1, 5)))
    descent: Sequence[tuple[int, Sequence[int]]] = ((3, range(1, 4)),)
    bch: Sequence[tuple[int, int, int]] = ((5, 1, 0), (5, 2, 0), (5, 3, 0), (7, 1, 0), (7, 2, 0), (7, 3, 0), (11, 2, 2))
    concat: Sequence[tuple[int, Sequence[int], int]] = ((5, (0, 1, 2), 2),)
    cap: int | None = None
    workers: int = 1


def _check(name: str, params: dict, measured: int, bound: float) -> dict[str, Any]:
    return {
        "check": name,
        "params": params,
        "measured": measured,
        "bound": bound,
        "margin": measured - bound,
        "passed": measured >= bound,
    }


def _guard(name: str, params: dict, thunk) -> dict[str, Any]:
    try:
        return thunk()
    except (codes.EnumerationCapExceeded, codes.CodeConstructionError, ValueError) as exc:
        return {"check": name, "params": params, "passed": False, "error": f"{type(exc).__name__}: {exc}"}


def verify_victorian(p: int, rs: Sequence[int], cap=None, workers=1) -> list[dict[str, Any]]:
    out = []
    for r in rs:
        params = {"p": p, "n": p, "r": r}

        def run(r=r, params=params):
            code = codes.shorten_at(codes.rs_code(codes.EvaluationCodeSpec(p, codes.affine_points(p), r)))
            d = codes.min_lee_distance_bruteforce(code, cap=cap, workers=workers)
            return _check("victorian", params, d, math.ceil(codes.victorian_bound_value(p, r)))

        out.append(_guard("victorian", params, run))
    return out


def verify_descent(p: int, rs: Sequence[int], cap=None, workers=1) -> list[dict[str, Any]]:
    out = []
    n = p * p
    for r in rs:
        params = {"p": p, "n": n, "r": r}

        def run(r=r, params=params):
            code = codes.expand_code(codes.shorten_at(codes.rs_code(codes.EvaluationCodeSpec(n, codes.affine_points(n), r))))
            d = codes.min_lee_distance_bruteforce(code, cap=cap, workers=workers)
            b = codes.descent_bound_value(n, r, p)
            rec = _check("descent", params, d, float(b.value))
            rec["approx_bound"] = b.approx
            rec["passed"] = rec["passed"] and d >= b.approx
            return rec

        out.append(_guard("descent", params, run))
    return out


def verify_bch(p: int, t: int, extra_shorten: int = 0, cap=None, workers=1) -> dict[str, Any]:
    params = {"p": p, "t": t, "extra_shorten": extra_shorten}

    def run():
        code = codes.bch_lee_inner(p, t, certify=False)
        dim_ok = code.k >= p - 1 - t
        for _ in range(extra_shorten):
            code = codes.shorten_at(code, 0)
        d = codes.min_lee_distance_bruteforce(code, cap=cap, workers=workers)
        rec = _check("bch", params, d, 2 * t)
        rec["dimension"] = code.k + extra_shorten
        rec["passed"] = rec["passed"] and dim_ok
        return rec

    return _guard("bch", params, run)


def verify_concat(p: int, points: Sequence[int], t: int, cap=None, workers=1) -> dict[str, Any]:
    """Outer RS [len(points), 2] over F_{p^2}, inner bch_lee_inner(p, t) of dimension 2."""
    params = {"p": p, "outer_points": list(points), "t": t}

    def run():
        outer = codes.rs_code(codes.EvaluationCodeSpec(p * p, tuple(points), 1))
        inner = codes.bch_lee_inner(p, t, certify=False)
        cat = codes.concatenate(codes.ConcatenationScheme(outer, inner))
        dh = codes.min_hamming_distance_bruteforce(outer, cap=cap, workers=workers)
        dl_in = codes.min_lee_distance_bruteforce(inner, cap=cap, workers=workers)
        d = codes.min_lee_distance_bruteforce(cat, cap=cap, workers=workers)
        rec = _check("concat", params, d, dh * dl_in)
        rec.update({"n": cat.n, "k": cat.k, "outer_hamming": dh, "inner_lee": dl_in})
        return rec

    return _guard("concat", params, run)


def verification_suite(config: VerifyConfig | None = None, which: Sequence[str] | None = None) -> dict[str, Any]:
    cfg = config or VerifyConfig()
    which = set(which or ("victorian", "descent", "bch", "concat"))
    checks: list[dict[str, Any]] = []
    kw = {"cap": cfg.cap, "workers": cfg.workers}
    if "victorian" in which:
        for p, rs in cfg.victorian:
            checks += verify_victorian(p, rs, **kw)
    if "descent" in which:
        for p, rs in cfg.descent:
            checks += verify_descent(p, rs, **kw)
    if "bch" in which:
        for p, t, extra in cfg.bch:
            checks.append(verify_bch(p, t, extra, **kw))
    if "concat" in which:
        for p, pts, t in cfg.concat:
            checks.append(verify_concat(p, pts, t, **kw))
    return {"passed": all(c["passed"] for c in checks), "checks": checks}

