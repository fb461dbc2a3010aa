"""Command-line front end.

Examples::

    leebounds sphere-table --p 7
    leebounds delta-q --q 25,49,121,169,289,361,529
    leebounds bound --name victoria --q 121 --delta 0.1
    leebounds compare --curves astola:q=529,victoria:q=529 --grid 0:0.5:101 --out fig4.csv
    leebounds invert --which g --delta 0.4
    leebounds verify victorian --p 7
    leebounds code distance --spec code.json
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from . import bounds, codes, compare, lee_metric


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _grid(text: str) -> list[float]:
    try:
        lo, hi, n = text.split(":")
        lo_f, hi_f, count = float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be LO:HI:N, got {text!r}") from None
    if count < 1 or (count > 1 and hi_f <= lo_f):
        raise argparse.ArgumentTypeError("grid needs N >= 1 and HI > LO")
    if count == 1:
        return [lo_f]
    step = (hi_f - lo_f) / (count - 1)
    return [lo_f + i * step for i in range(count - 1)] + [hi_f]


def parse_curve(text: str) -> bounds.BoundCurve:
    """``name:key=value:key=value`` -> BoundCurve."""
    name, *pairs = text.strip().split(":")
    params: dict[str, Any] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"bad curve parameter {pair!r} in {text!r}")
        params[key] = float(value) if key == "gamma" else int(value)
    return bounds.make_curve(name, **params)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _csv(rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _num(x: Any) -> str:
    return format(x, ".12g") if isinstance(x, float) else str(x)


def _json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


# ---------------------------------------------------------------- subcommands


def cmd_weights(args: argparse.Namespace) -> int:
    if args.p is not None:
        pairs = [tuple(int(v) for v in s.split(":")) for s in args.symbols]
        w = sum(lee_metric.lee_weight_ext_symbol(z, args.p) for z in pairs)
    else:
        w = lee_metric.lee_weight_word([int(s) for s in args.symbols], args.q)
    _emit(f"{w}\n", args.out)
    return EXIT_OK


def cmd_sphere_table(args: argparse.Namespace) -> int:
    tab = lee_metric.sphere_table(args.p)
    if args.format == "json":
        _emit(_json({"p": tab.p, "M": list(range(tab.p)), "S": tab.S, "B": tab.B, "W_at_B": tab.Wb}), args.out)
    else:
        _emit(_csv([("M", "S", "B", "W_at_B"), *tab.rows()]), args.out)
    return EXIT_OK


def cmd_bound(args: argparse.Namespace) -> int:
    if args.name == "descent-delta":
        if args.rate is None or args.p is None:
            raise ValueError("descent-delta needs --rate and --p")
        gamma = args.gamma if args.gamma is not None else 1 / (args.p - 1)
        res = bounds.descent_delta(args.rate, gamma, args.p)
        record = {"name": "descent-delta", "p": args.p, "gamma": gamma, "rate": args.rate,
                  "delta": res.value, "delta_floor": res.floor}
    else:
        if args.delta is None:
            raise ValueError("--delta is required")
        params = {k: getattr(args, k) for k in ("q", "p", "t", "gamma") if getattr(args, k) is not None}
        curve = bounds.make_curve(args.name, **params)
        record = {"name": curve.label, "delta": args.delta, "rate": curve(args.delta), "domain": curve.domain}
        if args.name == "astola":
            sol = bounds.astola_solve(args.delta, args.q)
            record.update({"alpha": sol.alpha, "beta": sol.beta})
    if args.format == "json":
        _emit(_json(record), args.out)
    else:
        keys = [k for k in record if k != "domain"]
        _emit(_csv([keys, [_num(record[k]) for k in keys]]), args.out)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    curves = [parse_curve(c) for c in args.curves.split(",") if c.strip()]
    grid = compare.comparison_grid(curves, args.grid, workers=args.workers)
    _emit(grid.to_json() + "\n" if args.format == "json" else grid.to_csv(), args.out)
    if args.crossover:
        if len(curves) != 2:
            raise ValueError("--crossover needs exactly two curves")
        res = compare.crossover(curves[0], curves[1], (args.grid[0], args.grid[-1]))
        print(f"crossover {res.curve_a} / {res.curve_b}: delta* = {res.delta_star:.12g}", file=sys.stderr)
    return EXIT_OK


def cmd_delta_q(args: argparse.Namespace) -> int:
    rows = compare.delta_q_table(args.q)
    if args.format == "json":
        _emit(_json(rows), args.out)
    else:
        _emit(_csv([("q", "delta_q", "display")] + [(r["q"], _num(r["delta_q"]), r["display"]) for r in rows]), args.out)
    return EXIT_OK


def cmd_invert(args: argparse.Namespace) -> int:
    if args.which == "f":
        if args.p is None:
            raise ValueError("--p is required for f")
        record = {"which": "f", "p": args.p, "delta": args.delta, "x": bounds.f_inverse(args.delta, args.p)}
    else:
        record = {
            "which": "g",
            "delta": args.delta,
            "x": bounds.g_inverse(args.delta),
            "x_cardano": bounds.g_inverse_cardano(args.delta),
        }
    if args.p is not None:
        record["alpha_lee_lower"] = bounds.alpha_lee_lower(args.delta, args.p)
    if args.format == "json":
        _emit(_json(record), args.out)
    else:
        keys = list(record)
        _emit(_csv([keys, [_num(record[k]) for k in keys]]), args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = compare.VerifyConfig(cap=args.cap, workers=args.workers)
    if args.p is not None:
        if args.which == "victorian":
            cfg.victorian = [(args.p, args.r or range(1, args.p - 1))]
        elif args.which == "descent":
            cfg.descent = [(args.p, args.r or range(1, args.p * args.p - 1))]
        elif args.which == "bch":
            cfg.bch = [(args.p, t, args.extra_shorten) for t in (args.t or [2])]
        elif args.which == "concat":
            cfg.concat = [(args.p, (0, 1, 2), (args.t or [2])[0])]
    which = None if args.which == "all" else [args.which]
    report = compare.verification_suite(cfg, which)
    if args.format == "json":
        _emit(_json(report), args.out)
    else:
        rows = [("check", "params", "measured", "bound", "margin", "passed", "error")]
        for c in report["checks"]:
            params = ";".join(f"{k}={v}" for k, v in c["params"].items())
            rows.append((c["check"], params, c.get("measured", ""), _num(c.get("bound", "")),
                         _num(c.get("margin", "")), c["passed"], c.get("error", "")))
        _emit(_csv(rows), args.out)
    return EXIT_OK if report["passed"] else EXIT_FAILED


def cmd_code(args: argparse.Namespace) -> int:
    spec = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    code = codes.build_code(spec)
    if args.action == "build":
        _emit(codes.code_to_json(code) + "\n", args.out)
        return EXIT_OK
    record = {
        "field_order": code.field_order,
        "n": code.n,
        "k": code.k,
        "lee_distance": codes.min_lee_distance_bruteforce(code, cap=args.cap, workers=args.workers),
        "hamming_distance": codes.min_hamming_distance_bruteforce(code, cap=args.cap, workers=args.workers),
    }
    if args.format == "json":
        _emit(_json(record), args.out)
    else:
        _emit(_csv([list(record), list(record.values())]), args.out)
    return EXIT_OK


def cmd_concat_scan(args: argparse.Namespace) -> int:
    rows = compare.concat_prime_scan(args.q)
    if args.format == "json":
        _emit(_json(rows), args.out)
    else:
        keys = list(rows[0])
        _emit(_csv([keys] + [[_num(r[k]) for k in keys] for r in rows]), args.out)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write output here instead of stdout")

    enum = argparse.ArgumentParser(add_help=False)
    enum.add_argument("--cap", type=int, default=None,
                      help=f"enumeration cap (default ${codes.ENUM_CAP_ENV} or {codes.DEFAULT_ENUM_CAP:.0e})")
    enum.add_argument("--workers", type=int, default=1)

    parser = argparse.ArgumentParser(prog="leebounds", description="Lee-metric lower bounds on long codes.")
    parser.add_argument("--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("weights", parents=[common], help="Lee weight of a word")
    p.add_argument("symbols", nargs="+", help="residues, or x:y pairs with --p")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--q", type=int, help="modulus of Z_q")
    g.add_argument("--p", type=int, help="prime p; symbols are x:y pairs over F_{p^2}")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("sphere-table", parents=[common], help="S, B and W at ball radii")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_sphere_table)

    p = sub.add_parser("bound", parents=[common], help="evaluate one bound")
    p.add_argument("--name", required=True, choices=(*bounds.CURVE_NAMES, "descent-delta"))
    p.add_argument("--q", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--rate", type=float, help="rate R for descent-delta")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("compare", parents=[common], help="curves on a delta grid")
    p.add_argument("--curves", required=True, help="e.g. astola:q=25,victoria:q=25")
    p.add_argument("--grid", type=_grid, required=True, help="LO:HI:N")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--crossover", action="store_true", help="also locate the crossing of two curves")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("delta-q", parents=[common], help="crossover table of Astola and Victoria")
    p.add_argument("--q", type=_int_list, required=True)
    p.set_defaults(func=cmd_delta_q)

    p = sub.add_parser("invert", parents=[common], help="f^-1 or g^-1")
    p.add_argument("--which", choices=("f", "g"), required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--p", type=int)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("verify", parents=[common, enum], help="brute-force checks of the constructive bounds")
    p.add_argument("which", choices=("victorian", "descent", "bch", "concat", "all"))
    p.add_argument("--p", type=int)
    p.add_argument("--r", type=_int_list)
    p.add_argument("--t", type=_int_list)
    p.add_argument("--extra-shorten", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("code", parents=[common, enum], help="build a code or brute-force its distances")
    p.add_argument("action", choices=("build", "distance"))
    p.add_argument("--spec", required=True, help="JSON code document or construction request")
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("concat-scan", parents=[common], help="Victoria(q) against concatenation envelopes by prime")
    p.add_argument("--q", type=int, default=121)
    p.set_defaults(func=cmd_concat_scan)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (bounds.DomainError, compare.BracketError, compare.AmbiguityError,
            codes.EnumerationCapExceeded, codes.CodeConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
