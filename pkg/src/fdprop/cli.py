"""Command-line front end.

Subcommands:

    solve <file|bench:name> [--level fc|ic|ac] [--alldistinct naive|linear|wac]
          [--all] [--trace] [--no-coalesce] [--stats-json PATH] [--expect-sat]
    verify <file|bench:name> [--level ...] [--alldistinct ...] [--cap N]
    bench [--level ...] [--workers N]

``solve`` prints one line per solution (``name=value`` pairs in
declaration order) followed by
``stats: backtracks=<n> activations=<n> solutions=<n> time_ms=<t>``;
--stats-json writes the same four fields as a JSON object.  --trace
streams one tab-separated line per propagator activation to stderr:
``<seq>\\t<agent>\\t<event>\\t<rule>\\t<outcome>``.

``verify`` re-solves a small model for all solutions, compares against
the brute-force enumeration oracle, and reports whether the root
fixpoint meets the consistency level's defining predicate.

Exit codes: 0 success, 2 model/parse error, 3 unsatisfiable with
--expect-sat, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .benchmarks import BENCH_CORPUS, get_benchmark
from .linear import BinaryLinear, CapacityError, NaryLinear
from .model import (
    Distinct,
    Model,
    ModelError,
    SolverConfig,
    build,
    parse_model,
    solve_model,
)
from .oracle import (
    CapExceeded,
    check_arc_consistent,
    check_interval_consistent,
    check_weak_arc_consistent,
    enumerate_solutions,
)
from .search import ALL_SOLUTIONS, FIRST_SOLUTION
from .store import InvariantError

EXIT_OK = 0
EXIT_MODEL_ERROR = 2
EXIT_UNSAT = 3
EXIT_INVARIANT = 4


def _load(ref: str) -> Model:
    if ref.startswith("bench:"):
        try:
            return get_benchmark(ref[len("bench:"):])
        except KeyError as exc:
            raise ModelError(str(exc.args[0])) from None
    path = Path(ref)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelError(f"cannot read {ref}: {exc}") from None
    return parse_model(text, path.stem)


def _config(args, mode: str) -> SolverConfig:
    return SolverConfig(level=args.level, alldistinct=args.alldistinct,
                        mode=mode, trace=getattr(args, "trace", False),
                        coalesce=not getattr(args, "no_coalesce", False))


def _cmd_solve(args) -> int:
    model = _load(args.model)
    mode = ALL_SOLUTIONS if args.all else FIRST_SOLUTION
    config = _config(args, mode)
    result = solve_model(model, config, trace_stream=sys.stderr)
    names = [vd.name for vd in model.vars]
    for sol in result.solutions:
        print(" ".join(f"{n}={v}" for n, v in zip(names, sol)))
    stats = result.stats
    print(f"stats: backtracks={stats.backtracks} activations={stats.activations} "
          f"solutions={stats.solutions} time_ms={result.time_ms}")
    if args.stats_json:
        payload = {"backtracks": stats.backtracks, "activations": stats.activations,
                   "solutions": stats.solutions, "time_ms": result.time_ms}
        Path(args.stats_json).write_text(json.dumps(payload), encoding="utf-8")
    if args.expect_sat and not result.solutions:
        return EXIT_UNSAT
    return EXIT_OK


def _root_consistency_report(model: Model, config: SolverConfig) -> list[str]:
    """Propagate to the root fixpoint and evaluate the defining
    consistency predicates on every constraint."""
    store, rt, ok = build(model, config)
    if ok:
        ok = rt.run_to_fixpoint()
    if not ok:
        return ["root propagation: failed (constraints are inconsistent)"]
    lines = []
    domains = [list(store.domain(i).values()) for i in range(len(model.vars))]

    def fmt(flag: bool) -> str:
        return "yes" if flag else "NO"

    if config.level in ("ic", "ac"):
        ok_ic = True
        for con in model.constraints:
            if isinstance(con, NaryLinear):
                coeffs = [a for a, _ in con.terms]
                doms = [domains[x] for _, x in con.terms]
                ok_ic &= check_interval_consistent(con.c, coeffs, doms)
            elif isinstance(con, BinaryLinear):
                ok_ic &= check_interval_consistent(
                    con.c, [-con.a, con.b], [domains[con.x], domains[con.y]])
        lines.append(f"interval consistent at root: {fmt(ok_ic)}")
    if config.level == "ac":
        ok_ac = True
        for con in model.constraints:
            if isinstance(con, BinaryLinear):
                a, b, c = con.a, con.b, con.c
                ok_ac &= check_arc_consistent(
                    lambda vx, vy, a=a, b=b, c=c: a * vx == b * vy + c,
                    domains[con.x], domains[con.y])
        lines.append(f"arc consistent at root: {fmt(ok_ac)}")
    if config.alldistinct == "wac":
        ok_wac = True
        for con in model.constraints:
            if isinstance(con, Distinct):
                ok_wac &= check_weak_arc_consistent([domains[x] for x in con.vars])
        lines.append(f"weak arc consistent at root: {fmt(ok_wac)}")
    return lines


def _cmd_verify(args) -> int:
    model = _load(args.model)
    config = _config(args, ALL_SOLUTIONS)
    for line in _root_consistency_report(model, config):
        print(line)
    result = solve_model(model, config)
    try:
        expected = enumerate_solutions(model.to_ground(cap=args.cap))
    except CapExceeded as exc:
        print(f"oracle refused: {exc}")
        return EXIT_MODEL_ERROR
    agree = set(result.solutions) == expected
    print(f"solutions agree: {'yes' if agree else 'no'} "
          f"(engine {len(result.solutions)}, oracle {len(expected)})")
    return EXIT_OK if agree else 1


def _bench_one(spec: tuple[str, str, str]) -> tuple[str, int, int, int]:
    name, level, alldistinct = spec
    model = get_benchmark(name)
    config = SolverConfig(level=level, alldistinct=alldistinct, mode=FIRST_SOLUTION)
    result = solve_model(model, config)
    return name, result.stats.backtracks, result.stats.solutions, result.time_ms


def _cmd_bench(args) -> int:
    specs = [(name, args.level, args.alldistinct) for name in BENCH_CORPUS]
    started = time.perf_counter()
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_bench_one, specs))
    else:
        rows = [_bench_one(spec) for spec in specs]
    for name, backtracks, solutions, ms in rows:
        print(f"{name:<14} backtracks={backtracks:<8} solutions={solutions:<4} time_ms={ms}")
    total = int((time.perf_counter() - started) * 1000)
    print(f"total time_ms={total}")
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdprop",
                                     description="Finite-domain constraint solver")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--level", choices=["fc", "ic", "ac"], default="ac")
        p.add_argument("--alldistinct", choices=["naive", "linear", "wac"],
                       default="linear")

    solve = sub.add_parser("solve", help="solve a model file or bench:<name>")
    solve.add_argument("model")
    add_config(solve)
    solve.add_argument("--all", action="store_true", help="find all solutions")
    solve.add_argument("--trace", action="store_true",
                       help="stream activation trace to stderr")
    solve.add_argument("--no-coalesce", action="store_true",
                       help="disable redundant-wake coalescing")
    solve.add_argument("--stats-json", metavar="PATH")
    solve.add_argument("--expect-sat", action="store_true",
                       help="exit 3 when no solution exists")
    solve.set_defaults(func=_cmd_solve)

    verify = sub.add_parser("verify",
                            help="cross-check a model against the enumeration oracle")
    verify.add_argument("model")
    add_config(verify)
    verify.add_argument("--cap", type=int, default=10 ** 7,
                        help="oracle assignment-count cap")
    verify.set_defaults(func=_cmd_verify)

    bench = sub.add_parser("bench", help="run the benchmark corpus")
    add_config(bench)
    bench.add_argument("--workers", type=int, default=1)
    bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (ModelError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL_ERROR
    except InvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
