"""Command-line front end.

Exit codes: 0 success/pass, 1 verification failure, 2 usage or invalid
parameters, 3 resource cap (instance too large, generation retries),
4 precision exhausted, 5 input parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import formats
from .errors import (
    BracketFailure,
    GenerationFailure,
    InstanceTooLarge,
    InvalidParameters,
    ParseError,
    PrecisionExhausted,
)
from .hypergraph import count_independent_sets, is_k_uniform, max_degree, overlap
from .instances import GenSpec, generate
from .reduction import ReductionParams, build_gadget, verify_identity
from .spin import hypergraph_spin_params, partition_function
from .uniqueness import (
    DEFAULT_PREC,
    DEFAULT_TOL,
    MAX_PREC,
    classify,
    hardness_threshold,
    regime_scan,
    rows_to_csv,
    rows_to_json,
    verify_analytic_lemma,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP, EXIT_PRECISION, EXIT_PARSE = range(6)


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _frac(x: Fraction):
    """Integers stay JSON numbers; other rationals become "p/q" strings."""
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _ball_str(x, digits: int = 20) -> str:
    return x.mid().str(digits, radius=False)


def cmd_gen(args) -> int:
    spec = GenSpec(args.family, args.n, args.degree, args.seed)
    _emit(args, formats.format_graph(generate(spec)))
    return EXIT_OK


def cmd_reduce(args) -> int:
    g = formats.parse_graph(_read(args.graph))
    h, gmap = build_gadget(g, ReductionParams(args.k, args.b))
    if args.map:
        Path(args.map).write_text(formats.format_gadget_map(gmap))
    _emit(args, formats.format_hypergraph(h))
    return EXIT_OK


def cmd_count(args) -> int:
    h = formats.parse_hypergraph(_read(args.hypergraph))
    n = count_independent_sets(h, args.max_vertices, workers=args.threads)
    info = {
        "vertices": h.vertex_count,
        "hyperedges": len(h.edges),
        "max_degree": max_degree(h),
        "overlap": overlap(h),
        "uniform_k": len(h.edges[0]) if h.edges and is_k_uniform(h, len(h.edges[0])) else None,
        "independent_sets": n,
    }
    if args.format == "json":
        _emit(args, json.dumps(info, indent=2) + "\n")
    else:
        _emit(args, "".join(f"{k}={v}\n" for k, v in info.items()))
    return EXIT_OK


def cmd_z(args) -> int:
    g = formats.parse_graph(_read(args.graph))
    spin = hypergraph_spin_params(args.k, args.b)
    z = partition_function(g, spin, workers=args.threads)
    scale = 2 ** (len(g.edges) * (args.k - 2 * args.b))
    info = {
        "beta": _frac(spin.beta), "gamma": _frac(spin.gamma), "lambda": _frac(spin.lam),
        "Z": _frac(z), "scaled_Z": _frac(scale * z),
    }
    if args.format == "json":
        _emit(args, json.dumps(info, indent=2) + "\n")
    else:
        _emit(args, "".join(f"{k}={v}\n" for k, v in info.items()))
    return EXIT_OK


def cmd_verify(args) -> int:
    g = formats.parse_graph(_read(args.graph))
    rep = verify_identity(g, ReductionParams(args.k, args.b), args.max_vertices,
                          workers=args.threads)
    status = "PASS" if rep.passed else "FAIL"
    if args.format == "json":
        out = {
            "k": rep.k, "b": rep.b, "lhs": rep.lhs, "rhs": _frac(rep.rhs), "Z": _frac(rep.z),
            "classes": len(rep.rows), "class_total": rep.class_total,
            "counting_ok": rep.counting_ok, "decomposition_ok": rep.decomposition_ok,
            "method": rep.method, "regular_degree": rep.regular_degree, "status": status,
        }
        _emit(args, json.dumps(out, indent=2) + "\n")
    else:
        lines = [f"lhs={rep.lhs} rhs={_frac(rep.rhs)} {status}"]
        lines.append(f"classes={len(rep.rows)} class_total={rep.class_total} method={rep.method}")
        if not rep.regular:
            lines.append("note: input graph is not regular; hardness regime claims do not apply")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_lemma(args) -> int:
    rows = []
    for k in range(2, args.k_max + 1):
        for b in range(1, k // 2 + 1):
            c = verify_analytic_lemma(k, b, args.precision_bits, args.max_precision_bits)
            rows.append({
                "k": k, "b": b, "d": c.d, "z_star": c.z_star,
                "f_z_star": _ball_str(c.f_value), "f_radius": float(c.f_value.rad()),
                "g_z_star": _ball_str(c.g_value), "g_radius": float(c.g_value.rad()),
                "precision_bits": c.precision_bits, "status": "PASS" if c.passed else "FAIL",
            })
    ok = all(r["status"] == "PASS" for r in rows)
    if args.format == "json":
        _emit(args, json.dumps(rows, indent=2) + "\n")
    elif args.format == "csv":
        head = list(rows[0]) if rows else []
        body = [",".join(str(r[h]) for h in head) for r in rows]
        _emit(args, "\n".join([",".join(head)] + body) + "\n")
    else:
        lines = [f"{'k':>3} {'b':>3} {'d':>8} {'z*':>6}  {'f(z*)':>24}  {'g(z*)':>24}  status"]
        for r in rows:
            lines.append(f"{r['k']:>3} {r['b']:>3} {r['d']:>8} {r['z_star']:>6}  "
                         f"{r['f_z_star'][:24]:>24}  {r['g_z_star'][:24]:>24}  {r['status']}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_classify(args) -> int:
    rep = classify(args.k, args.b, args.delta, args.tol, args.precision_bits,
                   args.max_precision_bits)
    out = {
        "k": args.k, "b": args.b, "delta": args.delta, "d": args.delta - 1,
        "regime": rep.regime,
        "roots": [float(r) for r in rep.roots],
        "residuals": [r.residual for r in rep.roots],
        "slope": float(rep.slope.mid()) if rep.slope is not None else None,
        "precision_bits": rep.precision_bits,
    }
    if args.format == "json":
        _emit(args, json.dumps(out, indent=2) + "\n")
    else:
        _emit(args, "".join(f"{k}={v}\n" for k, v in out.items()))
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.delta is not None:
        deltas = [args.delta]
    elif args.delta_min is not None:
        deltas = range(args.delta_min, args.delta_max + 1)
    else:
        deltas = lambda k: [hardness_threshold(k, args.b)]  # noqa: E731
    rows = regime_scan(range(args.k_min, args.k_max + 1), args.b, deltas, args.tol,
                       args.precision_bits, args.max_precision_bits)
    if args.format == "json":
        _emit(args, rows_to_json(rows) + "\n")
    elif args.format == "csv":
        _emit(args, rows_to_csv(rows))
    else:
        lines = [f"{'k':>3} {'b':>3} {'delta':>7}  {'regime':<12} {'Q-':>12} {'Qx':>12} {'Q+':>14}"]
        for r in rows:
            fmt = lambda x: "-" if x is None else f"{x:.6g}"  # noqa: E731
            lines.append(f"{r.k:>3} {r.b:>3} {r.delta:>7}  {r.regime:<12} "
                         f"{fmt(r.q_minus):>12} {fmt(r.q_times):>12} {fmt(r.q_plus):>14}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--threads", type=int, default=1, help="worker processes for exact counts")
    common.add_argument("--max-vertices", type=int, default=None)
    common.add_argument("--precision-bits", type=int, default=DEFAULT_PREC)
    common.add_argument("--max-precision-bits", type=int, default=MAX_PREC)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--seed", type=int, default=0)

    kb = argparse.ArgumentParser(add_help=False)
    kb.add_argument("--k", type=int, required=True)
    kb.add_argument("--b", type=int, required=True)

    parser = argparse.ArgumentParser(prog="indhard", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a graph")
    p.add_argument("--family", choices=("cycle", "complete", "random_regular"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degree", type=int)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", parents=[common, kb], help="build the gadget hypergraph")
    p.add_argument("--graph", required=True)
    p.add_argument("--map", help="also write the block/filler map here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("count", parents=[common], help="count independent sets exactly")
    p.add_argument("--hypergraph", required=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("z", parents=[common, kb], help="exact partition function of the spin system")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_z)

    p = sub.add_parser("verify", parents=[common, kb], help="check the counting identity")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lemma", parents=[common], help="certify f(z*) > 0 > g(z*)")
    p.add_argument("--k-max", type=int, default=16)
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("classify", parents=[common, kb], help="uniqueness regime at one delta")
    p.add_argument("--delta", type=int, required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("scan", parents=[common], help="regime table over k and delta")
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--delta", type=int, help="a single delta for every k")
    p.add_argument("--delta-min", type=int)
    p.add_argument("--delta-max", type=int)
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "delta_min", None) is not None and args.delta_max is None:
        parser.error("--delta-min needs --delta-max")
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidParameters as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InstanceTooLarge, GenerationFailure) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except BracketFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
