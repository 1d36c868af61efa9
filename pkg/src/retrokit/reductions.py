"""Classic problems solved through retroactive timelines.

Three drivers, each paired with a brute-force reference solver:

* online (min,+) matrix-vector products against a fixed matrix,
* 3SUM over three integer sets,
* circuit satisfiability via meet-in-the-middle over half-assignments.

Each driver arranges a single timeline so every answer drops out of
historical queries, and counts its own timeline traffic so tests can pin
the operation budget.
"""

from __future__ import annotations

import random
from math import isqrt
from typing import Optional

from .circuits import Circuit, CircuitEntry, and_, not_, random_circuit, eval_circuit
from .errors import DimensionMismatch, MalformedCircuit, OddInputCount, RetroError
from .full import StrategyConfig, make_strategy
from .partial import CallCounters
from .structures import CircuitPair, MinPlusSum, ThreeSum
from .timeline import RetroOp

# gap between consecutive driver ops, so a replacement can land on the exact
# vacated TimeKey without colliding with its neighbours
STRIDE = 1 << 16


class OpTally:
    """Counts the timeline operations a driver issues."""

    __slots__ = ("inserts", "deletes", "queries")

    def __init__(self) -> None:
        self.inserts = 0
        self.deletes = 0
        self.queries = 0

    def total(self) -> int:
        return self.inserts + self.deletes + self.queries


class _CountedRetro:
    """Thin shim putting a tally in front of a fully retroactive structure."""

    __slots__ = ("_fr", "_tally")

    def __init__(self, fr, tally: OpTally) -> None:
        self._fr = fr
        self._tally = tally

    def insert(self, t: int, list_id: int, index: int, value) -> None:
        self._tally.inserts += 1
        self._fr.fr_insert(t, RetroOp(list_id, index, value))

    def delete(self, t: int) -> None:
        self._tally.deletes += 1
        self._fr.fr_delete(t)

    def query(self, t: int):
        self._tally.queries += 1
        return self._fr.fr_query(t)


def _build(config: Optional[StrategyConfig], factory, counters, tally: Optional[OpTally]):
    config = config or StrategyConfig()
    return _CountedRetro(make_strategy(config, factory, counters), tally or OpTally())


# ---------------------------------------------------------------------------
# online (min,+) products


class MinPlusInstance:
    """An n x n matrix plus a stream of n request vectors.

    next_vector / emit enforce the online contract: a vector's product must
    be emitted before the following vector can be read. The access order is
    recorded in `events` for auditing.
    """

    def __init__(self, matrix, vectors) -> None:
        n = len(matrix)
        if n == 0:
            raise DimensionMismatch("matrix must be nonempty")
        if any(len(row) != n for row in matrix):
            raise DimensionMismatch("matrix must be square")
        if any(len(v) != n for v in vectors):
            raise DimensionMismatch(f"every vector must have length {n}")
        self.matrix = [list(row) for row in matrix]
        self.vectors = [list(v) for v in vectors]
        self.n = n
        self.outputs: list[list[int]] = []
        self.events: list[tuple[str, int]] = []
        self._cursor = 0
        self._pending = False

    def next_vector(self) -> Optional[list[int]]:
        """Hand out the next vector, or None once the stream is drained."""
        if self._pending:
            raise RetroError("previous product has not been emitted yet")
        if self._cursor >= len(self.vectors):
            return None
        self._pending = True
        self.events.append(("read", self._cursor))
        return list(self.vectors[self._cursor])

    def emit(self, product) -> None:
        if not self._pending:
            raise RetroError("no vector outstanding")
        if len(product) != self.n:
            raise DimensionMismatch(f"product must have length {self.n}")
        self.events.append(("emit", self._cursor))
        self.outputs.append(list(product))
        self._cursor += 1
        self._pending = False


def brute_minplus(matrix, vector) -> list[int]:
    """Direct double loop: entry j is min over k of matrix[j][k] + vector[k]."""
    return [min(row[k] + vector[k] for k in range(len(row))) for row in matrix]


def solve_online_minplus(
    instance: MinPlusInstance,
    config: Optional[StrategyConfig] = None,
    tally: Optional[OpTally] = None,
    counters: Optional[CallCounters] = None,
) -> list[list[int]]:
    """Stream all products out of one retroactive timeline.

    The vector occupies list 1 at the n earliest times; the matrix rows are
    played into list 2 one after another, so the state just after row j
    pairs the current vector with exactly that row. A new vector only
    rewrites the n earliest ops, then n historical queries read its product.
    """
    counters = counters or CallCounters()

    def factory():
        return MinPlusSum(counters)

    fr = _build(config, factory, counters, tally)
    n = instance.n
    seq = 1
    vec_times = []
    for k in range(n):
        t = seq * STRIDE
        fr.insert(t, 1, k, 0)
        vec_times.append(t)
        seq += 1
    row_times = []
    for row in instance.matrix:
        for k, value in enumerate(row):
            fr.insert(seq * STRIDE, 2, k, value)
            seq += 1
        row_times.append((seq - 1) * STRIDE)

    while (vector := instance.next_vector()) is not None:
        for k, value in enumerate(vector):
            fr.delete(vec_times[k])
            fr.insert(vec_times[k], 1, k, value)
        instance.emit([fr.query(tj) for tj in row_times])
    return instance.outputs


# ---------------------------------------------------------------------------
# 3SUM


class ThreeSumInstance:
    """Three equal-size integer sets, elements distinct within each set."""

    __slots__ = ("a", "b", "c", "n")

    def __init__(self, a, b, c) -> None:
        self.a, self.b, self.c = list(a), list(b), list(c)
        self.n = len(self.a)
        if not (len(self.b) == len(self.c) == self.n):
            raise DimensionMismatch("the three sets must have equal size")
        for name, values in (("A", self.a), ("B", self.b), ("C", self.c)):
            if len(set(values)) != len(values):
                raise ValueError(f"set {name} contains repeated values")


def brute_3sum(a, b, c) -> bool:
    c_set = set(c)
    return any(-(x + y) in c_set for x in a for y in b)


def solve_3sum_retro(
    instance: ThreeSumInstance,
    config: Optional[StrategyConfig] = None,
    tally: Optional[OpTally] = None,
    counters: Optional[CallCounters] = None,
) -> bool:
    """Decide whether a + b + c = 0 has a solution across the three sets.

    List 1 carries all of A. B and C are cut into groups of floor(sqrt(n)):
    the C groups are played into list 3 over time, all reusing the same
    slots, with a query time recorded after each; the B groups then take
    turns retroactively rewriting the list-2 slots. Each historical query
    scans one (B group, C group) cell, so the whole grid costs about n
    timeline ops.
    """
    n = instance.n
    if n == 0:
        return False
    counters = counters or CallCounters()

    def factory():
        return ThreeSum(counters)

    fr = _build(config, factory, counters, tally)
    s = isqrt(n)  # group size; s*s <= n keeps the size gate open
    groups = list(range(0, n, s))
    seq = 1
    for k, value in enumerate(instance.a):
        fr.insert(seq * STRIDE, 1, k, value)
        seq += 1
    slot_times = []
    for k in range(s):
        t = seq * STRIDE
        fr.insert(t, 2, k, 0)
        slot_times.append(t)
        seq += 1
    group_times = []
    for lo in groups:
        chunk = instance.c[lo : lo + s]
        for k in range(s):
            # unset the tail slots so a short last group hides earlier values
            value = chunk[k] if k < len(chunk) else None
            fr.insert(seq * STRIDE, 3, k, value)
            seq += 1
        group_times.append((seq - 1) * STRIDE)

    for lo in groups:
        chunk = instance.b[lo : lo + s]
        for k in range(s):
            value = chunk[k] if k < len(chunk) else None
            fr.delete(slot_times[k])
            fr.insert(slot_times[k], 2, k, value)
        for qt in group_times:
            if fr.query(qt) == 1:
                return True
    return False


# ---------------------------------------------------------------------------
# circuit satisfiability


class CsatInstance:
    """A well-formed circuit over an even number of inputs."""

    __slots__ = ("circuit",)

    def __init__(self, circuit: Circuit) -> None:
        if not circuit.well_formed():
            raise MalformedCircuit("satisfiability instance needs a well-formed circuit")
        if circuit.num_inputs % 2:
            raise OddInputCount(f"need an even input count, got {circuit.num_inputs}")
        self.circuit = circuit


def brute_csat(circuit: Circuit) -> bool:
    if not circuit.well_formed():
        raise MalformedCircuit("cannot enumerate a malformed circuit")
    u = circuit.num_inputs
    return any(
        eval_circuit(circuit, format(w, f"0{u}b") if u else "") == 1 for w in range(1 << u)
    )


def solve_csat_retro(
    instance: CsatInstance,
    config: Optional[StrategyConfig] = None,
    tally: Optional[OpTally] = None,
    counters: Optional[CallCounters] = None,
) -> bool:
    """Meet-in-the-middle satisfiability through pair queries.

    Every low/high half-assignment w becomes an entry (circuit, w). List 2
    receives the high-half groups over time, a query time after each; the
    low-half groups retroactively rewrite list 1's few slots. A query
    reports whether any concatenated assignment in that group pair
    satisfies the circuit.
    """
    circuit = instance.circuit
    u = circuit.num_inputs
    half = u // 2
    words = [format(w, f"0{half}b") for w in range(1 << half)] if half else [""]
    size_cap = max(circuit.size, u, 1)
    counters = counters or CallCounters()

    def factory():
        return CircuitPair(counters, max_size=size_cap)

    fr = _build(config, factory, counters, tally)
    s = 1 << (u // 4)  # slots per group; the group count is 2^ceil(u/4)
    groups = [words[lo : lo + s] for lo in range(0, len(words), s)]
    seq = 1
    slot_times = []
    for k in range(s):
        t = seq * STRIDE
        fr.insert(t, 1, k, None)
        slot_times.append(t)
        seq += 1
    group_times = []
    for chunk in groups:
        for k in range(s):
            value = CircuitEntry(circuit, chunk[k]) if k < len(chunk) else None
            fr.insert(seq * STRIDE, 2, k, value)
            seq += 1
        group_times.append((seq - 1) * STRIDE)

    for chunk in groups:
        for k in range(s):
            value = CircuitEntry(circuit, chunk[k]) if k < len(chunk) else None
            fr.delete(slot_times[k])
            fr.insert(slot_times[k], 1, k, value)
        for qt in group_times:
            if fr.query(qt) == 1:
                return True
    return False


# ---------------------------------------------------------------------------
# instance generators


def random_minplus_instance(
    rng: random.Random, n: int, vector_count: Optional[int] = None, spread: Optional[int] = None
) -> MinPlusInstance:
    """Matrix and vectors with entries in [0, spread); spread defaults to n*n+2."""
    count = n if vector_count is None else vector_count
    hi = spread if spread is not None else n * n + 2
    matrix = [[rng.randrange(hi) for _ in range(n)] for _ in range(n)]
    vectors = [[rng.randrange(hi) for _ in range(n)] for _ in range(count)]
    return MinPlusInstance(matrix, vectors)


def random_3sum_instance(
    rng: random.Random, n: int, plant: Optional[bool] = None
) -> ThreeSumInstance:
    """Three distinct-value sets; plants a zero triple on a coin flip."""
    span = 6 * n + 6
    a = rng.sample(range(-span, span), n)
    b = rng.sample(range(-span, span), n)
    c = rng.sample(range(-2 * span, 2 * span), n)
    if plant is None:
        plant = rng.random() < 0.5
    if plant:
        target = -(rng.choice(a) + rng.choice(b))
        if target not in c:
            c[rng.randrange(n)] = target
    return ThreeSumInstance(a, b, c)


def random_csat_instance(
    rng: random.Random, num_inputs: int, size: int = 12, force_unsat: Optional[bool] = None
) -> CsatInstance:
    """Random well-formed circuit; on a coin flip its output is strangled
    to a contradiction so both outcomes stay exercised."""
    circuit = random_circuit(rng, num_inputs, size)
    if force_unsat is None:
        force_unsat = rng.random() < 0.5
    if force_unsat:
        gates = list(circuit.gates)
        out = len(gates) - 1
        gates.append(not_(out))
        gates.append(and_(out, len(gates) - 1))
        circuit = Circuit(num_inputs, gates)
    return CsatInstance(circuit)
