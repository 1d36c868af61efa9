"""Pure-Python kernel implementations.

Same interface as the compiled `_speedups` module. These are the import-time
fallback and the reference side of the kernel equivalence tests, so keep the
semantics boring: dicts of counts plus a lazy-deletion heap.
"""

from __future__ import annotations

import heapq

IMPLEMENTATION = "pure"

# Gate opcodes shared with the compiled kernel and the circuit layer.
OP_IN, OP_CONST, OP_NOT, OP_AND, OP_OR = 0, 1, 2, 3, 4


class SumMultiset:
    """Multiset of signed integers with O(log n) minimum retrieval.

    Deletions leave stale heap entries behind; min() discards them lazily
    against the live count table.
    """

    __slots__ = ("_counts", "_heap")

    def __init__(self) -> None:
        self._counts: dict[int, int] = {}
        self._heap: list[int] = []

    def add(self, x: int) -> None:
        c = self._counts.get(x, 0)
        self._counts[x] = c + 1
        if c == 0:
            heapq.heappush(self._heap, x)

    def remove(self, x: int) -> None:
        c = self._counts[x]
        if c == 1:
            del self._counts[x]
        else:
            self._counts[x] = c - 1

    def min(self):
        heap = self._heap
        counts = self._counts
        while heap and counts.get(heap[0], 0) == 0:
            heapq.heappop(heap)
        return heap[0] if heap else None

    def __len__(self) -> int:
        return sum(self._counts.values())

    def clone(self) -> "SumMultiset":
        other = SumMultiset.__new__(SumMultiset)
        other._counts = self._counts.copy()
        other._heap = self._heap.copy()
        return other


class TripleTable:
    """Count tables backing a zero-triple counter.

    Maintains value counts (one side) and pair-sum counts (the other two
    sides combined) so that `triples` always equals
    sum over s of pairs[s] * values[-s].
    """

    __slots__ = ("_values", "_pairs", "_triples")

    def __init__(self) -> None:
        self._values: dict[int, int] = {}
        self._pairs: dict[int, int] = {}
        self._triples = 0

    @property
    def triples(self) -> int:
        return self._triples

    def add_value(self, v: int) -> None:
        self._triples += self._pairs.get(-v, 0)
        self._values[v] = self._values.get(v, 0) + 1

    def remove_value(self, v: int) -> None:
        c = self._values[v]
        if c == 1:
            del self._values[v]
        else:
            self._values[v] = c - 1
        self._triples -= self._pairs.get(-v, 0)

    def add_pair(self, s: int) -> None:
        self._triples += self._values.get(-s, 0)
        self._pairs[s] = self._pairs.get(s, 0) + 1

    def remove_pair(self, s: int) -> None:
        c = self._pairs[s]
        if c == 1:
            del self._pairs[s]
        else:
            self._pairs[s] = c - 1
        self._triples -= self._values.get(-s, 0)

    def add_pairs(self, b: int, cs) -> None:
        for c in cs:
            self.add_pair(b + c)

    def remove_pairs(self, b: int, cs) -> None:
        for c in cs:
            self.remove_pair(b + c)

    def clone(self) -> "TripleTable":
        other = TripleTable.__new__(TripleTable)
        other._values = self._values.copy()
        other._pairs = self._pairs.copy()
        other._triples = self._triples
        return other


def eval_packed(kinds, arg_a, arg_b, bits: bytes) -> int:
    """Evaluate a packed gate list on an input bit string.

    `kinds`/`arg_a`/`arg_b` are parallel arrays (opcode, operand, operand);
    `bits` holds b'0'/b'1' bytes. The caller guarantees well-formedness and
    arity, so operand indices are trusted. Returns the last gate's output.
    """
    out = [0] * len(kinds)
    for i in range(len(kinds)):
        k = kinds[i]
        if k == OP_IN:
            out[i] = bits[arg_a[i]] - 48
        elif k == OP_CONST:
            out[i] = arg_a[i]
        elif k == OP_NOT:
            out[i] = 1 - out[arg_a[i]]
        elif k == OP_AND:
            out[i] = out[arg_a[i]] & out[arg_b[i]]
        else:
            out[i] = out[arg_a[i]] | out[arg_b[i]]
    return out[-1]
