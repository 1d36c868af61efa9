"""Command-line front end: verification, benchmarking, problem drivers.

Exit codes: 0 success, 1 failed check, 2 usage or parse error, 3 I/O error.
The RETRO_SEED environment variable supplies the default --seed.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time
from typing import Optional

from .circuits import Circuit
from .errors import RetroError
from .full import StrategyConfig
from .harness import (
    CSV_HEADER,
    FAMILIES,
    STRATEGIES,
    append_records,
    run_bench_cell,
    run_equivalence,
)
from .kernels import pure as pure_kernels
from .reductions import (
    CsatInstance,
    MinPlusInstance,
    ThreeSumInstance,
    brute_3sum,
    brute_csat,
    brute_minplus,
    solve_3sum_retro,
    solve_csat_retro,
    solve_online_minplus,
)

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _resolve_seed(value: Optional[int]) -> int:
    if value is not None:
        return value
    raw = os.environ.get("RETRO_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(EXIT_USAGE) from None


# ---------------------------------------------------------------------------
# input files


def _int_row(line: str) -> list[int]:
    return [int(token) for token in line.split()]


def _content_lines(text: str) -> list[str]:
    return [line for line in (raw.strip() for raw in text.splitlines()) if line]


def parse_minplus_file(text: str) -> MinPlusInstance:
    """First line n, then n matrix rows, then n request vectors."""
    lines = _content_lines(text)
    if not lines:
        raise ValueError("empty min-plus file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"first line must be the dimension, got {lines[0]!r}") from None
    if n <= 0:
        raise ValueError("dimension must be positive")
    if len(lines) != 1 + 2 * n:
        raise ValueError(f"expected {1 + 2 * n} lines for dimension {n}, got {len(lines)}")
    rows = [_int_row(line) for line in lines[1 : 1 + n]]
    vectors = [_int_row(line) for line in lines[1 + n :]]
    return MinPlusInstance(rows, vectors)


def parse_3sum_file(text: str) -> ThreeSumInstance:
    """Exactly three lines of space-separated integers: the sets A, B, C."""
    lines = _content_lines(text)
    if len(lines) != 3:
        raise ValueError(f"expected exactly 3 lines, got {len(lines)}")
    a, b, c = (_int_row(line) for line in lines)
    return ThreeSumInstance(a, b, c)


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    families = list(FAMILIES) if args.instance == "all" else [args.instance]
    strategies = list(STRATEGIES) if args.strategy == "all" else [args.strategy]
    failures = 0
    for family in families:
        for strategy in strategies:
            try:
                compared = run_equivalence(family, strategy, args.ops, args.queries, seed)
            except AssertionError as exc:
                failures += 1
                print(f"FAIL {family}/{strategy}: {exc}")
                continue
            print(
                f"ok   {family}/{strategy}: {args.ops} edits, "
                f"{compared} queries matched the oracle (seed {seed})"
            )
    return EXIT_CHECK if failures else EXIT_OK


def _parse_m_range(parser: argparse.ArgumentParser, spec: str) -> list[int]:
    lo_hi = spec.split(":")
    if len(lo_hi) != 2:
        parser.error(f"--m-range must look like LO:HI, got {spec!r}")
    try:
        lo, hi = int(lo_hi[0]), int(lo_hi[1])
    except ValueError:
        parser.error(f"--m-range needs integers, got {spec!r}")
    for value in (lo, hi):
        if value < 1 or value & (value - 1):
            parser.error(f"--m-range bounds must be powers of two, got {value}")
    if lo > hi:
        parser.error(f"--m-range must have LO <= HI, got {spec!r}")
    out = []
    m = lo
    while m <= hi:
        out.append(m)
        m *= 2
    return out


def cmd_bench(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    seed = _resolve_seed(args.seed)
    ms = _parse_m_range(parser, args.m_range)
    families = list(FAMILIES) if args.instance == "all" else [args.instance]
    strategies = list(STRATEGIES) if args.strategy == "all" else [args.strategy]
    records = [
        run_bench_cell(family, strategy, m, seed)
        for m in ms
        for family in families
        for strategy in strategies
    ]
    if args.out is None:
        print(CSV_HEADER)
        for record in records:
            print(record.csv_row())
        return EXIT_OK
    try:
        append_records(args.out, records)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_IO
    config = StrategyConfig(strategy=args.strategy)
    try:
        if args.problem == "minplus":
            instance = parse_minplus_file(text)
        elif args.problem == "3sum":
            instance = parse_3sum_file(text)
        else:
            instance = CsatInstance(Circuit.from_netlist(text))
    except (ValueError, RetroError) as exc:
        print(f"error: bad {args.problem} input: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.problem == "minplus":
        products = solve_online_minplus(instance, config)
        for product in products:
            print(" ".join("none" if v is None else str(v) for v in product))
        if args.check:
            expected = [brute_minplus(instance.matrix, v) for v in instance.vectors]
            if products != expected:
                print("error: driver disagrees with brute force", file=sys.stderr)
                return EXIT_CHECK
    elif args.problem == "3sum":
        answer = solve_3sum_retro(instance, config)
        print("TRUE" if answer else "FALSE")
        if args.check and answer != brute_3sum(instance.a, instance.b, instance.c):
            print("error: driver disagrees with brute force", file=sys.stderr)
            return EXIT_CHECK
    else:
        answer = solve_csat_retro(instance, config)
        print("SAT" if answer else "UNSAT")
        if args.check and answer != brute_csat(instance.circuit):
            print("error: driver disagrees with brute force", file=sys.stderr)
            return EXIT_CHECK
    return EXIT_OK


def _time_kernel(module, reps: int, seed: int) -> dict[str, float]:
    """Nanoseconds per operation for each kernel piece."""
    rng = random.Random(seed)
    values = [rng.randrange(-200, 200) for _ in range(reps)]
    out: dict[str, float] = {}

    sums = module.SumMultiset()
    started = time.perf_counter_ns()
    for v in values:
        sums.add(v)
    for v in values[: reps // 2]:
        sums.remove(v)
    for _ in range(64):
        sums.min()
    out["summultiset"] = (time.perf_counter_ns() - started) / (reps + reps // 2 + 64)

    table = module.TripleTable()
    started = time.perf_counter_ns()
    for v in values:
        table.add_value(v)
        table.add_pair(-v)
    for v in values[: reps // 2]:
        table.remove_pair(-v)
        table.remove_value(v)
    out["tripletable"] = (time.perf_counter_ns() - started) / (3 * reps)

    from .circuits import random_circuit

    circuit = random_circuit(random.Random(seed), 8, 24)
    kinds, arg_a, arg_b = circuit.packed()
    bits = [format(w, "08b").encode("ascii") for w in range(256)]
    loops = max(1, reps // 256)
    started = time.perf_counter_ns()
    for _ in range(loops):
        for b in bits:
            module.eval_packed(kinds, arg_a, arg_b, b)
    out["eval_packed"] = (time.perf_counter_ns() - started) / (loops * 256)
    return out


def cmd_kernelbench(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args.seed)
    from . import kernels

    pure_times = _time_kernel(pure_kernels, args.reps, seed)
    compiled = None
    try:
        from .kernels import _speedups as compiled  # type: ignore[no-redef]
    except ImportError:
        pass
    print(f"active kernel: {kernels.IMPLEMENTATION}")
    print(f"{'piece':<14}{'pure ns/op':>12}{'compiled ns/op':>16}{'speedup':>10}")
    if compiled is None:
        for piece, ns in pure_times.items():
            print(f"{piece:<14}{ns:>12.1f}{'-':>16}{'-':>10}")
        print("compiled kernels unavailable; build the extension to compare")
        return EXIT_OK
    compiled_times = _time_kernel(compiled, args.reps, seed)
    for piece, ns in pure_times.items():
        cns = compiled_times[piece]
        ratio = ns / cns if cns else float("inf")
        print(f"{piece:<14}{ns:>12.1f}{cns:>16.1f}{ratio:>9.1f}x")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retrokit",
        description="retroactive data structures: verify, benchmark, and drive reductions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="randomized equivalence against the replay oracle")
    p.add_argument("--instance", choices=(*FAMILIES, "all"), default="all")
    p.add_argument("--ops", type=int, default=1000, help="retroactive edits per run")
    p.add_argument("--queries", type=int, default=200, help="random-time queries per run")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--strategy", choices=(*STRATEGIES, "all"), default="all")

    p = sub.add_parser("bench", help="edit/query mix with base-call counting, CSV output")
    p.add_argument("--instance", choices=(*FAMILIES, "all"), default="minplus")
    p.add_argument("--m-range", required=True, metavar="LO:HI", help="powers of two, inclusive")
    p.add_argument("--strategy", choices=(*STRATEGIES, "all"), default="all")
    p.add_argument("--out", default=None, help="CSV file to append to (stdout when omitted)")
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("reduce", help="solve a problem file through the retroactive driver")
    p.add_argument("problem", choices=("minplus", "3sum", "csat"))
    p.add_argument("--input", required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p.add_argument("--check", action="store_true", help="cross-check against brute force")

    p = sub.add_parser("kernelbench", help="time pure-Python kernels against the compiled ones")
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            if args.ops < 0 or args.queries < 0:
                parser.error("--ops and --queries must be nonnegative")
            return cmd_verify(args)
        if args.command == "bench":
            return cmd_bench(args, parser)
        if args.command == "reduce":
            return cmd_reduce(args)
        return cmd_kernelbench(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except BrokenPipeError:
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
