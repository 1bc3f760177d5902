"""Command-line front end.

Exit status: 0 when every checked inequality holds, 1 when a violation is
found (for ``check``: a violation confirmed by the independent evaluator),
2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import itertools
import sys

import numpy as np

from . import metric_index
from ._accel import backend_name
from .core import DEFAULT_TOL, Tolerance, normalize
from .errors import SchwarzkitError
from .harness import TrialConfig, resolve_workers, run_suite
from .io import parse_vectors
from .metrics import AngleKind, TriangleKind, angle_of, check_p, dist, pair_stats, triangle_sides
from .ntuple import Order, basis_max_bound, general_e_bound, mean_bound
from .projections import make_projector, projection_bound, projection_floor
from .refinements import MetricParams, Mode, det2_bound, detp_bound, quad_refinement, rs_chain
from .reports import dumps, fmt17, judge

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

METHODS = ("projection", "quad", "rs", "detp", "det2", "ntuple-general", "ntuple-basis-max", "ntuple-mean")
PAIR_KINDS = ("dp", "deltap", "psi", "phi")


class UsageError(Exception):
    pass


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _write_json(path, obj):
    text = dumps(obj) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _table(rows, headers):
    cells = [[str(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(headers)]
    line = "  ".join(h.ljust(w) for h, w in zip(headers, widths))
    print(line.rstrip())
    for r in cells:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())


def _tol(args) -> Tolerance:
    return Tolerance(args.tol, args.abs_tol)


def _pick(vf, index, name):
    if index is None:
        return None
    if not 0 <= index < len(vf.vectors):
        raise UsageError(f"--{name} {index} is out of range; the file holds {len(vf.vectors)} vectors")
    return vf.vectors[index]


# ------------------------------------------------------------------ bound


def _need(value, flag, method):
    if value is None:
        raise UsageError(f"--method {method} needs --{flag}")
    return value


def cmd_bound(args) -> int:
    vf = parse_vectors(args.input, args.format)
    tol = _tol(args)
    x = _pick(vf, args.x, "x")
    y = _pick(vf, args.y, "y")
    e = _pick(vf, args.e, "e")
    z = _pick(vf, args.z, "z")
    if e is not None and args.normalize_e:
        e = normalize(e)
    method = args.method
    mode = Mode(args.mode)
    entries = []
    if method == "projection":
        family = [_pick(vf, i, "projector") for i in args.projector]
        P = make_projector(family)
        a, b = projection_bound(P, x, y, tol)
        scale = a.lhs
        entries = [a.to_dict(), b.to_dict(), projection_floor(b, scale, tol).to_dict()]
    elif method == "quad":
        entries = [quad_refinement(x, y, _need(z, "z", method), tol).to_dict()]
    elif method == "rs":
        chain = rs_chain(x, y, _need(e, "e", method), tol)
        entries = [chain.upper.to_dict(), chain.lower.to_dict()]
    elif method == "detp":
        entries = [detp_bound(x, y, _need(e, "e", method), MetricParams(args.p, mode), tol).to_dict()]
    elif method == "det2":
        entries = [det2_bound(x, y, _need(e, "e", method), mode, tol).to_dict()]
    elif method == "ntuple-general":
        order = Order(args.order or "p")
        entries = [general_e_bound(x, y, _need(e, "e", method), args.p, order, tol).to_dict()]
    elif method == "ntuple-basis-max":
        entries = [basis_max_bound(x, y, args.p, Order(args.order or "p"), tol).to_dict()]
    else:
        entries = [mean_bound(x, y, args.p, Order(args.order or "p"), tol).to_dict()]
    _table([(r["label"], fmt17(r["lhs"]), fmt17(r["rhs"]), fmt17(r["gap"]), r["satisfied"], r["equality"])
            for r in entries], ["label", "lhs", "rhs", "gap", "satisfied", "equality"])
    if args.json:
        _write_json(args.json, {"reports": entries})
    return EXIT_OK if all(r["satisfied"] for r in entries) else EXIT_VIOLATION


# ---------------------------------------------------------------- metrics


def cmd_metrics(args) -> int:
    vf = parse_vectors(args.input, args.format)
    tol = _tol(args)
    n = len(vf.vectors)
    if any(not np.any(v.data) for v in vf.vectors):
        raise UsageError("metrics need nonzero vectors")
    V = np.stack([v.data for v in vf.vectors]) if n else np.zeros((0, vf.dim), dtype=np.complex128)
    if args.pairs:
        if args.kind not in PAIR_KINDS:
            raise UsageError(f"--pairs takes --kind {{{','.join(PAIR_KINDS)}}}")
        if args.kind in ("dp", "deltap"):
            check_p(args.p)
        idx = np.array(list(itertools.combinations(range(n), 2)), dtype=np.int64).reshape(-1, 2)
        real = args.kind in ("deltap", AngleKind.PHI.value)
        stats = pair_stats(V[idx[:, 0]], V[idx[:, 1]], real) if len(idx) else None
        if stats is None:
            values = np.zeros(0)
        elif args.kind in ("dp", "deltap"):
            values = dist(stats, args.p)
        else:
            values = angle_of(stats)
        rows = [{"i": int(i), "j": int(j), "value": float(v)} for (i, j), v in zip(idx, values)]
        _table([(r["i"], r["j"], fmt17(r["value"])) for r in rows], ["i", "j", args.kind])
        if args.json:
            _write_json(args.json, {"kind": args.kind, "p": args.p, "pairs": rows})
        return EXIT_OK
    kind = TriangleKind(args.kind)
    check_p(args.p)
    idx = np.array(list(itertools.combinations(range(n), 3)), dtype=np.int64).reshape(-1, 3)
    rows = []
    if len(idx):
        real = kind in (TriangleKind.KREIN, TriangleKind.SIN_PHI, TriangleKind.DELTAP)
        X, Z, Y = V[idx[:, 0]], V[idx[:, 1]], V[idx[:, 2]]
        legs, single, scale = triangle_sides(kind, pair_stats(X, Y, real), pair_stats(X, Z, real),
                                             pair_stats(Z, Y, real), args.p)
        gap, _, ok, eq = judge(legs, single, scale, tol)
        rows = [{"x": int(a), "z": int(b), "y": int(c), "lhs": float(l), "rhs": float(r),
                 "gap": float(g), "satisfied": bool(s), "equality": bool(q)}
                for (a, b, c), l, r, g, s, q in zip(idx, legs, single, gap, ok, eq)]
    _table([(r["x"], r["z"], r["y"], fmt17(r["lhs"]), fmt17(r["rhs"]), r["satisfied"]) for r in rows],
           ["x", "z", "y", "lhs", "rhs", "satisfied"])
    if args.json:
        _write_json(args.json, {"kind": kind.value, "p": args.p, "triples": rows})
    return EXIT_OK if all(r["satisfied"] for r in rows) else EXIT_VIOLATION


# ------------------------------------------------------------------ index


def _results_table(results):
    _table([(q, rank, i, fmt17(d)) for q, hits in enumerate(results) for rank, (i, d) in enumerate(hits)],
           ["query", "rank", "id", "distance"])


def cmd_index(args) -> int:
    if args.action == "build":
        vf = parse_vectors(args.input, args.format)
        index = metric_index.build(vf.vectors, args.p)
        metric_index.save(index, args.out)
        print(f"indexed {index.size} points of dimension {vf.dim} with p = {index.p:g} into {args.out}")
        return EXIT_OK
    index = metric_index.load(args.index)
    queries = parse_vectors(args.query, args.format).vectors
    if args.action == "nn":
        results = [metric_index.query_nn(index, q, args.k) for q in queries]
    else:
        results = [metric_index.query_range(index, q, args.r) for q in queries]
    _results_table(results)
    if args.json:
        _write_json(args.json, {"results": [[{"id": i, "distance": d} for i, d in hits] for hits in results]})
    return EXIT_OK


# ------------------------------------------------------------------ check


def cmd_check(args) -> int:
    config = TrialConfig(dims=args.dims, trials_per_dim=args.trials, seed=args.seed, p_values=args.p,
                         scalar_field=args.field, tol=_tol(args))
    workers = resolve_workers(args.threads)
    report = run_suite(config, workers=workers)
    rows = [(key, s.trials, s.violations, s.confirmed_violations, s.equality_hits,
             fmt17(s.worst_gap) if s.worst_at else "-",
             fmt17(s.max_tightness) if s.tightness_at else "-")
            for key, s in report.families.items()]
    _table(rows, ["family", "trials", "violations", "confirmed", "equalities", "worst_gap", "max_tightness"])
    summary = report.summary()
    print(f"{summary['evaluations']} evaluations, {summary['confirmed_violations']} confirmed violations, "
          f"{summary['numerical_disagreements']} numerical disagreements, "
          f"{report.elapsed:.2f} s on {report.workers} worker(s), {backend_name()} kernels")
    if args.json:
        _write_json(args.json, report.to_dict())
    return EXIT_OK if report.passed else EXIT_VIOLATION


# ----------------------------------------------------------------- parser


def _add_tol(p):
    p.add_argument("--tol", type=float, default=DEFAULT_TOL.rel_eps, metavar="EPS",
                   help="relative tolerance (default %(default)g)")
    p.add_argument("--abs-tol", type=float, default=DEFAULT_TOL.abs_eps, metavar="EPS",
                   help="absolute tolerance (default %(default)g)")


def _add_format(p):
    p.add_argument("--format", choices=("json", "csv"), help="file format; default from the extension")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schwarzkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="evaluate one refinement on vectors from a file")
    p.add_argument("--input", required=True, metavar="FILE")
    _add_format(p)
    p.add_argument("--x", type=int, required=True, metavar="I", help="row of x in the file")
    p.add_argument("--y", type=int, required=True, metavar="J")
    p.add_argument("--e", type=int, metavar="K")
    p.add_argument("--z", type=int, metavar="L")
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.MODULUS.value)
    p.add_argument("--order", choices=[o.value for o in Order],
                   help="n-tuple form: p-power, quadratic, or p2 (basis-max only)")
    p.add_argument("--projector", type=_int_list, default=[], metavar="LIST",
                   help="rows forming the orthonormal family of the projection")
    p.add_argument("--normalize-e", action="store_true", help="scale e to unit norm first")
    p.add_argument("--json", metavar="OUT", help="write reports as JSON ('-' for stdout)")
    _add_tol(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("metrics", help="distances, angles or triangle checks over a vector file")
    p.add_argument("--input", required=True, metavar="FILE")
    _add_format(p)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--pairs", action="store_true", help="every pair i < j")
    which.add_argument("--triples", action="store_true", help="every i < j < k, with row j in the middle")
    p.add_argument("--kind", required=True,
                   choices=sorted(set(PAIR_KINDS) | {k.value for k in TriangleKind}))
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--json", metavar="OUT")
    _add_tol(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("index", help="build or query a vantage-point index")
    isub = p.add_subparsers(dest="action", required=True)
    b = isub.add_parser("build")
    b.add_argument("--input", required=True, metavar="FILE")
    _add_format(b)
    b.add_argument("--p", type=float, default=2.0)
    b.add_argument("--out", required=True, metavar="IDX")
    for name in ("nn", "range"):
        q = isub.add_parser(name)
        q.add_argument("--index", required=True, metavar="IDX")
        q.add_argument("--query", required=True, metavar="FILE")
        _add_format(q)
        if name == "nn":
            q.add_argument("--k", type=int, default=1)
        else:
            q.add_argument("--r", type=float, required=True)
        q.add_argument("--json", metavar="OUT")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("check", help="run the randomized verification suite")
    p.add_argument("--dims", type=_int_list, required=True, metavar="LIST")
    p.add_argument("--trials", type=int, required=True, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=_float_list, default=[2.0], metavar="LIST")
    p.add_argument("--field", choices=("real", "complex"), default="complex")
    p.add_argument("--threads", type=int, metavar="N",
                   help="worker processes (default: automatic, capped by SCHWARZKIT_THREADS)")
    p.add_argument("--json", metavar="OUT")
    _add_tol(p)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (SchwarzkitError, UsageError, OSError, ValueError) as exc:
        print(f"schwarzkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
