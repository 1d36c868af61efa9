"""Randomized verification and benchmarking plumbing shared by CLI and tests.

A Family bundles a base-structure constructor with a sampler that produces
plausible random slot writes for it. The two entry points are
run_equivalence (subject strategy vs the replay oracle, exact match) and
run_bench_cell (fixed edit/query mix with base-call counting, reported as
one CSV record per cell).
"""

from __future__ import annotations

import os
import random
import time
import zlib
from dataclasses import dataclass
from typing import Callable, Optional

from .circuits import Circuit, CircuitEntry, and_, inp, not_, or_
from .full import ReplayOracle, StrategyConfig, make_strategy
from .partial import BaseStructure, CallCounters
from .structures import CircuitPair, MinPlusSum, ThreeSum
from .timeline import RetroOp

CSV_HEADER = "family,strategy,n,m,updates,queries,base_apply_calls,base_eval_calls,wall_ns,seed"

Sampler = Callable[[], tuple[int, int, object]]


def _derive_seed(*parts: str) -> int:
    # crc of the joined label, not hash(): hash salting would break replays
    return zlib.crc32("|".join(parts).encode("ascii"))


@dataclass(frozen=True)
class Family:
    """A base structure plus a generator of random writes aimed at it."""

    name: str
    list_count: int
    default_span: int
    make_base: Callable[[CallCounters], BaseStructure]
    make_sampler: Callable[[random.Random, int, float], Sampler]


def _minplus_sampler(rng: random.Random, span: int, none_rate: float) -> Sampler:
    def sample() -> tuple[int, int, object]:
        value = None if rng.random() < none_rate else rng.randrange(-40, 41)
        return rng.randrange(1, 3), rng.randrange(span), value

    return sample


def _threesum_sampler(rng: random.Random, span: int, none_rate: float) -> Sampler:
    def sample() -> tuple[int, int, object]:
        # small values so zero triples actually happen; extra weight on list 1
        # because the evaluation gate wants it to be the big one
        list_id = 1 if rng.random() < 0.5 else rng.randrange(2, 4)
        value = None if rng.random() < none_rate else rng.randrange(-8, 9)
        return list_id, rng.randrange(span), value

    return sample


def _circuit_pool() -> list[CircuitEntry]:
    """Fixed entries over 4-input circuits (2 bits per side), including a
    malformed circuit and a wrong-arity entry that can never form pairs."""
    legs = (inp(0), inp(1), inp(2), inp(3))
    any_one = Circuit(4, legs + (or_(0, 1), or_(2, 3), or_(4, 5)))
    all_ones = Circuit(4, legs + (and_(0, 1), and_(2, 3), and_(4, 5)))
    lopsided = Circuit(4, legs + (not_(1), and_(0, 4)))
    broken = Circuit(4, (and_(0, 5),))
    pool = [
        CircuitEntry(circuit, bits)
        for circuit in (any_one, all_ones, lopsided)
        for bits in ("00", "01", "10", "11")
    ]
    pool.append(CircuitEntry(broken, "01"))
    pool.append(CircuitEntry(any_one, "1"))
    return pool


def _circuit_sampler(rng: random.Random, span: int, none_rate: float) -> Sampler:
    pool = _circuit_pool()

    def sample() -> tuple[int, int, object]:
        value = None if rng.random() < none_rate else rng.choice(pool)
        return rng.randrange(1, 3), rng.randrange(span), value

    return sample


FAMILIES: dict[str, Family] = {
    fam.name: fam
    for fam in (
        Family("minplus", 2, 4, MinPlusSum, _minplus_sampler),
        Family("3sum", 3, 3, ThreeSum, _threesum_sampler),
        Family("csat", 2, 4, CircuitPair, _circuit_sampler),
    )
}

STRATEGIES = ("checkpoint", "wbt", "auto")


# ---------------------------------------------------------------------------
# oracle equivalence


def run_equivalence(
    family: str,
    strategy: str,
    edits: int,
    queries: int,
    seed: int,
    span: Optional[int] = None,
    none_rate: float = 0.25,
    config: Optional[StrategyConfig] = None,
) -> int:
    """Interleave random retroactive edits with random-time queries and
    demand exact agreement with the replay oracle. Returns the number of
    compared queries; raises AssertionError on the first mismatch."""
    fam = FAMILIES[family]
    span = span or fam.default_span
    rng = random.Random(_derive_seed("equiv", family, strategy, str(seed)))
    counters = CallCounters()
    subject = make_strategy(
        config or StrategyConfig(strategy=strategy),
        lambda: fam.make_base(counters),
        counters,
    )
    oracle_counters = CallCounters()
    oracle = ReplayOracle(lambda: fam.make_base(oracle_counters))
    sample = fam.make_sampler(rng, span, none_rate)

    horizon = 1 << 20
    times: list[int] = []
    used: set[int] = set()
    deck = ["E"] * edits + ["Q"] * queries
    rng.shuffle(deck)
    compared = 0

    def check(t: int) -> None:
        nonlocal compared
        got = subject.fr_query(t)
        want = oracle.fr_query(t)
        if got != want:
            raise AssertionError(
                f"{family}/{strategy} seed {seed}: fr_query({t}) = {got!r}, oracle says {want!r}"
            )
        compared += 1

    for step in deck:
        if step == "E" and times and rng.random() < 0.35:
            i = rng.randrange(len(times))
            t = times[i]
            times[i] = times[-1]
            times.pop()
            used.remove(t)
            subject.fr_delete(t)
            oracle.fr_delete(t)
        elif step == "E":
            t = rng.randrange(horizon)
            while t in used:
                t = rng.randrange(horizon)
            op = RetroOp(*sample())
            subject.fr_insert(t, op)
            oracle.fr_insert(t, op)
            times.append(t)
            used.add(t)
        else:
            check(rng.randrange(horizon))
    for t in (0, horizon, *times[:3]):
        check(t)
    return compared


# ---------------------------------------------------------------------------
# benchmarking


@dataclass
class BenchRecord:
    family: str
    strategy: str
    n: int
    m: int
    updates: int
    queries: int
    base_apply_calls: int
    base_eval_calls: int
    wall_ns: int
    seed: int

    def csv_row(self) -> str:
        return (
            f"{self.family},{self.strategy},{self.n},{self.m},{self.updates},"
            f"{self.queries},{self.base_apply_calls},{self.base_eval_calls},"
            f"{self.wall_ns},{self.seed}"
        )

    def calls_per_query(self) -> float:
        if self.queries == 0:
            return 0.0
        return (self.base_apply_calls + self.base_eval_calls) / self.queries


def run_bench_cell(
    family: str,
    strategy: str,
    m: int,
    seed: int,
    span: Optional[int] = None,
    none_rate: float = 0.2,
    config: Optional[StrategyConfig] = None,
) -> BenchRecord:
    """One cell of the benchmark grid: m sequential inserts (bulk-loaded),
    then m/4 random retroactive edits interleaved with m/4 random-time
    queries. Base-structure calls are accumulated over the query windows
    only, so the record isolates per-query overhead.

    The edit/query schedule depends on (family, m, seed) but not on the
    strategy, so records across strategies are directly comparable.
    """
    fam = FAMILIES[family]
    span = span or fam.default_span
    rng = random.Random(_derive_seed("bench", family, str(m), str(seed)))
    counters = CallCounters()
    structure = make_strategy(
        config or StrategyConfig(strategy=strategy),
        lambda: fam.make_base(counters),
        counters,
    )
    sample = fam.make_sampler(rng, span, none_rate)

    stride = 4
    items = []
    for i in range(m):
        list_id, index, value = sample()
        items.append(((i + 1) * stride, RetroOp(list_id, index, value)))
    horizon = (m + 2) * stride
    times = [t for t, _ in items]
    used = set(times)
    rounds = m // 4
    query_apply = query_eval = 0

    started = time.perf_counter_ns()
    structure.bulk_load(items)
    for _ in range(rounds):
        if times and rng.random() < 0.5:
            i = rng.randrange(len(times))
            t = times[i]
            times[i] = times[-1]
            times.pop()
            used.remove(t)
            structure.fr_delete(t)
        else:
            t = rng.randrange(1, horizon)
            while t in used:
                t = rng.randrange(1, horizon)
            list_id, index, value = sample()
            structure.fr_insert(t, RetroOp(list_id, index, value))
            times.append(t)
            used.add(t)
        query_at = rng.randrange(1, horizon)
        apply_before, eval_before = counters.apply_calls, counters.eval_calls
        structure.fr_query(query_at)
        query_apply += counters.apply_calls - apply_before
        query_eval += counters.eval_calls - eval_before
    wall_ns = time.perf_counter_ns() - started

    return BenchRecord(
        family=family,
        strategy=strategy,
        n=span * fam.list_count,
        m=m,
        updates=m + rounds,
        queries=rounds,
        base_apply_calls=query_apply,
        base_eval_calls=query_eval,
        wall_ns=wall_ns,
        seed=seed,
    )


def append_records(path: str, records) -> None:
    """Append CSV rows, writing the header only when the file is new/empty."""
    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", encoding="ascii") as fh:
        if fresh:
            fh.write(CSV_HEADER + "\n")
        for record in records:
            fh.write(record.csv_row() + "\n")
