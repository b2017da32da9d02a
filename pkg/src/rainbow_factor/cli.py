"""``rainbow`` command line.

Exit codes: 0 found/ok, 1 verified absence or failed verification,
2 usage or parse error, 3 an event the existence theorems rule out.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import formats
from .core import (
    CapacityError,
    Params,
    TheoremContradiction,
    ValidationError,
    edge_mask,
    is_rainbow,
    verify_proper,
)
from .fuzz import run_fuzz
from .gen import (
    gen_backtrack_factorization,
    gen_fixture,
    gen_random_greedy,
    gen_round_robin,
)
from .rng import derive_seed
from .solver import (
    exhaustive_search,
    oracle_enumerate,
    run_graph_solver,
    solve,
    solve_k3r,
)

EXIT_OK, EXIT_ABSENT, EXIT_USAGE, EXIT_CONTRADICTION = 0, 1, 2, 3

class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("RAINBOW_SEED", "0")
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"RAINBOW_SEED is not an integer: {raw!r}") from None


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc)
    if out is None or out == "-":
        print(text)
    else:
        Path(out).write_text(text + "\n")


def _contradiction(exc: TheoremContradiction, report_path: str | None) -> int:
    print(f"theorem contradiction: {exc}", file=sys.stderr)
    doc = {"error": str(exc), "report": exc.report}
    if report_path:
        Path(report_path).write_text(json.dumps(doc) + "\n")
    else:
        print(json.dumps(doc), file=sys.stderr)
    return EXIT_CONTRADICTION


def cmd_gen(args: argparse.Namespace) -> int:
    kind = args.kind.replace("-", "_")
    if kind != "fixture" and args.n is None:
        raise UsageError(f"--kind {args.kind} needs --n")
    if kind == "round_robin":
        if args.r != 2:
            raise UsageError("round-robin requires --r 2")
        coloring = gen_round_robin(args.n)
    elif kind == "backtrack":
        coloring = gen_backtrack_factorization(Params(args.r, args.n))
    elif kind == "random_greedy":
        seed = _default_seed() if args.seed is None else args.seed
        coloring = gen_random_greedy(Params(args.r, args.n), seed, args.strategy)
    else:
        if not args.name:
            raise UsageError("--kind fixture needs --name")
        params = Params(args.r, args.n) if args.n is not None else None
        coloring = gen_fixture(args.name, params)
    if args.out is None or args.out == "-":
        if args.out_format == "csv":
            sys.stdout.write(formats.coloring_to_csv(coloring))
        else:
            print(json.dumps(formats.coloring_to_dict(coloring)))
        return EXIT_OK
    path = Path(args.out)
    if path.exists() and not args.force:
        raise UsageError(f"{args.out} exists; pass --force to overwrite")
    formats.write_coloring(coloring, path)
    print(
        f"wrote {path}: r={coloring.params.r} n={coloring.params.n} "
        f"colors={coloring.color_count}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    coloring = formats.read_coloring(args.input, normalize=args.normalize)
    verdict = verify_proper(coloring)
    if not verdict.ok:
        a, b = verdict.witness
        print(f"improper coloring: edges {list(a)} and {list(b)} share a color and meet", file=sys.stderr)
        return EXIT_USAGE
    params = coloring.params
    method = args.method
    certificate = None
    traces = []
    try:
        if method == "auto":
            seed = args.seed
            sol = solve(coloring, trace=args.trace is not None, seed=seed, check=False)
            factor, used_method = sol.factor, sol.method
            if sol.certificate is not None:
                certificate = sol.certificate.to_dict()
            if sol.run is not None:
                traces = sol.run.traces
            if factor is None:
                return _report_absent(coloring, sol.reason)
        elif method == "augment":
            if params.r != 2 or params.n < 3:
                raise UsageError("--method augment needs r = 2 and n >= 3")
            run = run_graph_solver(coloring, trace=args.trace is not None, check=False)
            factor, used_method, traces = run.factor, run.method, run.traces
        elif method == "k3r":
            if params.n != 3:
                raise UsageError("--method k3r needs n = 3")
            factor, cert = solve_k3r(coloring, check=False)
            used_method, certificate = "k3r", cert.to_dict()
        else:
            if params.vertex_count <= 12:
                oracle = oracle_enumerate(coloring)
                factor = oracle.witness
                if factor is None:
                    print(
                        f"verified absent: {oracle.rainbow_factors} of "
                        f"{oracle.total_factors} factors rainbow"
                    )
                    return EXIT_ABSENT
            else:
                factor = exhaustive_search(coloring)
                if factor is None:
                    print("verified absent: exhaustive search found no rainbow factor")
                    return EXIT_ABSENT
            used_method = "exhaustive"
    except TheoremContradiction as exc:
        return _contradiction(exc, args.report)
    if args.trace is not None:
        formats.write_jsonl((t.to_dict() for t in traces), args.trace)
    _emit(formats.factor_to_dict(factor, coloring, used_method, certificate), args.out)
    return EXIT_OK


def _report_absent(coloring, reason: str) -> int:
    if coloring.params.vertex_count <= 12:
        oracle = oracle_enumerate(coloring)
        print(
            f"verified absent: {oracle.rainbow_factors} of {oracle.total_factors} "
            f"factors rainbow ({reason})"
        )
    else:
        print(f"no rainbow factor returned: {reason}")
    return EXIT_ABSENT


def cmd_verify(args: argparse.Namespace) -> int:
    coloring = formats.read_coloring(args.input, normalize=args.normalize)
    verdict = verify_proper(coloring)
    if not verdict.ok:
        a, b = verdict.witness
        print(f"FAIL improper: {list(a)} and {list(b)} share color {coloring.color(a)} and meet")
        return EXIT_ABSENT
    if args.factor is None:
        print(f"OK proper: {coloring.color_count} colors")
        return EXIT_OK
    params, edges, _ = formats.read_factor(args.factor)
    if params != coloring.params:
        raise ValidationError("factor and coloring have different (r, n)")
    seen: dict[int, tuple] = {}
    for e in edges:
        for f in seen.values():
            if edge_mask(e) & edge_mask(f):
                print(f"FAIL not a matching: {list(f)} and {list(e)} share a vertex")
                return EXIT_ABSENT
        c = coloring.color(e)
        if c in seen:
            print(f"FAIL not rainbow: {list(seen[c])} and {list(e)} both have color {c}")
            return EXIT_ABSENT
        seen[c] = e
    if len(edges) != params.n:
        print(f"FAIL not a 1-factor: {len(edges)} edges, expected {params.n}")
        return EXIT_ABSENT
    print("OK proper coloring, rainbow 1-factor")
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    coloring = formats.read_coloring(args.input)
    oracle = oracle_enumerate(coloring)
    print(
        json.dumps(
            {
                "total_factors": oracle.total_factors,
                "rainbow_factors": oracle.rainbow_factors,
                "witness": oracle.witness.to_list() if oracle.witness else None,
            }
        )
    )
    return EXIT_OK if oracle.rainbow_factors else EXIT_ABSENT


def cmd_fuzz(args: argparse.Namespace) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    if args.iters < 0 or args.workers < 1:
        raise UsageError("--iters must be >= 0 and --workers >= 1")
    summary = run_fuzz(
        Params(args.r, args.n),
        args.iters,
        seed,
        workers=args.workers,
        mode=args.mode,
        trace=not args.fast,
        keep_traces=args.trace_out is not None,
    )
    if args.trace_out:
        formats.write_jsonl(summary.trace_records, args.trace_out)
    if args.report and summary.failures:
        formats.write_jsonl(summary.failures, args.report)
    print(json.dumps(summary.to_dict()))
    return summary.exit_code


def _percentiles(xs: list[float]) -> dict:
    a = np.asarray(xs)
    return {
        "p50": float(np.percentile(a, 50)),
        "p90": float(np.percentile(a, 90)),
        "max": float(a.max()),
        "mean": float(a.mean()),
    }


def cmd_bench(args: argparse.Namespace) -> int:
    if args.r != 2:
        raise UsageError("bench supports r = 2 only")
    if args.n < 3 or args.reps < 1:
        raise UsageError("bench needs --n >= 3 and --reps >= 1")
    seed = _default_seed() if args.seed is None else args.seed
    params = Params(2, args.n)
    gen_t, solve_t = [], []
    for i in range(args.reps):
        t0 = time.perf_counter()
        coloring = gen_random_greedy(params, derive_seed(seed, i))
        t1 = time.perf_counter()
        run = run_graph_solver(coloring, check=False)
        t2 = time.perf_counter()
        if not is_rainbow(run.factor.edges, coloring):
            raise TheoremContradiction("benchmark factor failed verification")
        gen_t.append(t1 - t0)
        solve_t.append(t2 - t1)
    totals = [g + s for g, s in zip(gen_t, solve_t)]
    print(
        json.dumps(
            {
                "r": 2,
                "n": args.n,
                "reps": args.reps,
                "seed": seed,
                "gen_seconds": _percentiles(gen_t),
                "solve_seconds": _percentiles(solve_t),
                "total_seconds": _percentiles(totals),
                "verified": True,
            }
        )
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rainbow", description="Rainbow 1-factors in properly colored K_{rn}^{(r)}."
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a proper coloring")
    g.add_argument(
        "--kind",
        required=True,
        choices=["round-robin", "backtrack", "random-greedy", "fixture"],
    )
    g.add_argument("--r", type=int, default=2)
    g.add_argument("--n", type=int)
    g.add_argument("--seed", type=lambda s: int(s, 0))
    g.add_argument("--strategy", choices=["least_color", "random_feasible"], default="least_color")
    g.add_argument("--name", help="fixture name, e.g. k4-no-rainbow-2k2")
    g.add_argument("--out")
    g.add_argument("--format", dest="out_format", choices=["json", "csv"], default="json",
                   help="stdout format; files use their suffix")
    g.add_argument("--force", action="store_true")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="find a rainbow 1-factor")
    s.add_argument("input")
    s.add_argument("--method", choices=["auto", "augment", "exhaustive", "k3r"], default="auto")
    s.add_argument("--trace", metavar="PATH", help="write augmentation traces as JSON lines")
    s.add_argument("--out")
    s.add_argument("--seed", type=lambda s: int(s, 0))
    s.add_argument("--normalize", action="store_true")
    s.add_argument("--report", metavar="PATH", help="where to write a contradiction report")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a coloring and optionally a factor")
    v.add_argument("input")
    v.add_argument("factor", nargs="?")
    v.add_argument("--normalize", action="store_true")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("enumerate", help="count all and rainbow 1-factors (<= 12 vertices)")
    e.add_argument("input")
    e.set_defaults(func=cmd_enumerate)

    f = sub.add_parser("fuzz", help="seeded stress run")
    f.add_argument("--r", type=int, default=2)
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--iters", type=int, default=1000)
    f.add_argument("--seed", type=lambda s: int(s, 0))
    f.add_argument("--workers", type=int, default=1)
    f.add_argument("--mode", choices=["greedy", "factorization", "mixed"], default="mixed")
    f.add_argument("--fast", action="store_true", help="skip trace recording")
    f.add_argument("--trace-out", metavar="PATH")
    f.add_argument("--report", metavar="PATH", help="JSON lines of failing instances")
    f.set_defaults(func=cmd_fuzz)

    b = sub.add_parser("bench", help="time greedy coloring + graph solver")
    b.add_argument("--r", type=int, default=2)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--reps", type=int, default=3)
    b.add_argument("--seed", type=lambda s: int(s, 0))
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        return args.func(args)
    except TheoremContradiction as exc:
        return _contradiction(exc, getattr(args, "report", None))
    except (UsageError, ValidationError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
