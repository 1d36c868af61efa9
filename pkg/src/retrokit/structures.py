"""The three evaluable list structures the retroactive layers wrap.

Each maintains its aggregate incrementally under single-slot writes, so the
evaluation itself is O(1). Duplicated values across slots are expected and
handled with multiset semantics throughout.
"""

from __future__ import annotations

from bisect import insort, bisect_left
from math import isqrt
from typing import Optional

from . import kernels
from .circuits import DEFAULT_MAX_GATES, Circuit, CircuitEntry
from .partial import BaseStructure, CallCounters


class MinPlusSum(BaseStructure):
    """Two integer lists; evaluates min over shared indices of their sums.

    A multiset of the sums at indices occupied in both lists makes the
    evaluation a single minimum lookup. Returns None when no index is
    occupied in both lists.
    """

    list_count = 2

    def __init__(self, counters: Optional[CallCounters] = None) -> None:
        super().__init__(counters)
        self._sums = kernels.SumMultiset()

    def _apply(self, list_id: int, index: int, value) -> None:
        old = self._write_slot(list_id, index, value)
        other = self._lists[2 - list_id].get(index)
        if other is not None:
            if old is not None:
                self._sums.remove(old + other)
            if value is not None:
                self._sums.add(value + other)

    def _eval(self):
        return self._sums.min()

    def clone(self) -> "MinPlusSum":
        other = MinPlusSum.__new__(MinPlusSum)
        self._clone_counters_into(other)
        other._lists = tuple(d.copy() for d in self._lists)
        other._sums = self._sums.clone()
        return other


class ThreeSum(BaseStructure):
    """Three integer lists; evaluates whether a zero-sum triple exists.

    The zero-triple counter runs over list 1 and bounded views of lists 2
    and 3: their first floor(sqrt(|L1|)) occupied slots in index order.
    The evaluation gates on |L2|^2 <= |L1| and |L3|^2 <= |L1|; whenever the
    gate passes the views cover the whole lists, so the counter is exact
    exactly when it matters.
    """

    list_count = 3

    def __init__(self, counters: Optional[CallCounters] = None) -> None:
        super().__init__(counters)
        self._table = kernels.TripleTable()
        self._indices = ([], [])  # occupied indices of lists 2 and 3, sorted
        self._views = ([], [])  # current (index, value) views of lists 2 and 3

    def _apply(self, list_id: int, index: int, value) -> None:
        old = self._write_slot(list_id, index, value)
        if old is None and value is None:
            return
        if list_id == 1:
            if old is not None:
                self._table.remove_value(old)
            if value is not None:
                self._table.add_value(value)
        else:
            ids = self._indices[list_id - 2]
            if old is None:
                insort(ids, index)
            elif value is None:
                ids.pop(bisect_left(ids, index))
        self._reconcile_views()

    def _reconcile_views(self) -> None:
        # cap changes by at most one per write, so each diff below touches
        # at most a couple of boundary elements
        cap = isqrt(len(self._lists[0]))
        old2, old3 = self._views
        new2 = self._target_view(2, cap)
        new3 = self._target_view(3, cap)
        rem2, add2, kept2 = _view_diff(old2, new2)
        rem3, add3, kept3 = _view_diff(old3, new3)
        if rem2 or add2 or rem3 or add3:
            table = self._table
            old3_vals = [v for _, v in old3]
            kept2_vals = [v for _, v in kept2]
            new3_vals = [v for _, v in new3]
            for _, b in rem2:
                table.remove_pairs(b, old3_vals)
            for _, c in rem3:
                table.remove_pairs(c, kept2_vals)
            for _, c in add3:
                table.add_pairs(c, kept2_vals)
            for _, b in add2:
                table.add_pairs(b, new3_vals)
        self._views = (new2, new3)

    def _target_view(self, list_id: int, cap: int) -> list:
        ids = self._indices[list_id - 2]
        d = self._lists[list_id - 1]
        return [(i, d[i]) for i in ids[: min(len(ids), cap)]]

    def zero_triples(self) -> int:
        """Current counter value over (list 1, view 2, view 3)."""
        return self._table.triples

    def views(self) -> tuple[list, list]:
        return ([*self._views[0]], [*self._views[1]])

    def _eval(self):
        n1 = len(self._lists[0])
        n2 = len(self._lists[1])
        n3 = len(self._lists[2])
        if n2 * n2 <= n1 and n3 * n3 <= n1 and self._table.triples > 0:
            return 1
        return 0

    def clone(self) -> "ThreeSum":
        other = ThreeSum.__new__(ThreeSum)
        self._clone_counters_into(other)
        other._lists = tuple(d.copy() for d in self._lists)
        other._table = self._table.clone()
        other._indices = tuple(ids.copy() for ids in self._indices)
        other._views = tuple(v.copy() for v in self._views)
        return other


def _view_diff(old: list, new: list) -> tuple[list, list, list]:
    """Split two index-sorted (index, value) lists into (removed, added, kept).

    A slot present in both with a different value counts as removed plus
    added; `kept` is the shared unchanged part.
    """
    removed, added, kept = [], [], []
    i = j = 0
    while i < len(old) and j < len(new):
        oi, ov = old[i]
        nj, nv = new[j]
        if oi == nj:
            if ov == nv:
                kept.append(old[i])
            else:
                removed.append(old[i])
                added.append(new[j])
            i += 1
            j += 1
        elif oi < nj:
            removed.append(old[i])
            i += 1
        else:
            added.append(new[j])
            j += 1
    removed.extend(old[i:])
    added.extend(new[j:])
    return removed, added, kept


class _Group:
    """Per-netlist bucket of one list's entries inside CircuitPair."""

    __slots__ = ("bits_counts",)

    def __init__(self) -> None:
        self.bits_counts: dict[str, int] = {}

    def add(self, bits: str) -> None:
        self.bits_counts[bits] = self.bits_counts.get(bits, 0) + 1

    def remove(self, bits: str) -> None:
        c = self.bits_counts[bits]
        if c == 1:
            del self.bits_counts[bits]
        else:
            self.bits_counts[bits] = c - 1

    def copy(self) -> "_Group":
        other = _Group.__new__(_Group)
        other.bits_counts = self.bits_counts.copy()
        return other


class CircuitPair(BaseStructure):
    """Two lists of (circuit, half-input) entries; evaluates to 1 when some
    cross pair is a satisfiability witness.

    Entries are bucketed by netlist text, since a pair can only be good when
    both sides carry byte-identical circuits. Every write rescans just the
    matching bucket on the other side, keeping the good-pair counter exact.
    """

    list_count = 2

    def __init__(
        self,
        counters: Optional[CallCounters] = None,
        max_size: int = DEFAULT_MAX_GATES,
    ) -> None:
        super().__init__(counters)
        self.max_size = max_size
        self._groups: tuple[dict, dict] = ({}, {})
        self._info: dict[str, tuple[bool, int, Circuit]] = {}
        self._memo: dict[tuple[str, str], bool] = {}
        self._nsat = 0

    def _apply(self, list_id: int, index: int, value) -> None:
        old = self._write_slot(list_id, index, value)
        side = list_id - 1
        groups = self._groups[side]
        if old is not None:
            self._nsat -= self._count_good(old, side)
            key = self._key_of(old)
            grp = groups[key]
            grp.remove(old.bits)
            if not grp.bits_counts:
                del groups[key]
        if value is not None:
            key = self._key_of(value)
            grp = groups.get(key)
            if grp is None:
                grp = _Group()
                groups[key] = grp
            grp.add(value.bits)
            self._nsat += self._count_good(value, side)

    def _key_of(self, entry: CircuitEntry) -> str:
        key = entry.circuit.to_netlist()
        if key not in self._info:
            ok = entry.circuit.well_formed() and entry.circuit.size <= self.max_size
            self._info[key] = (ok, entry.circuit.num_inputs, entry.circuit)
        return key

    def _count_good(self, entry: CircuitEntry, side: int) -> int:
        """How many entries on the other side form a good pair with `entry`."""
        key = self._key_of(entry)
        other = self._groups[1 - side].get(key)
        if other is None:
            return 0
        ok, num_inputs, circuit = self._info[key]
        if not ok:
            return 0
        want = num_inputs - len(entry.bits)
        if want < 0:
            return 0
        count = 0
        memo = self._memo
        kinds, arg_a, arg_b = circuit.packed()
        for bits2, cnt in other.bits_counts.items():
            if len(bits2) != want:
                continue
            joined = entry.bits + bits2 if side == 0 else bits2 + entry.bits
            hit = memo.get((key, joined))
            if hit is None:
                if any(ch not in "01" for ch in joined):
                    hit = False
                else:
                    hit = kernels.eval_packed(kinds, arg_a, arg_b, joined.encode("ascii")) == 1
                memo[(key, joined)] = hit
            if hit:
                count += cnt
        return count

    def good_pairs(self) -> int:
        """Current number of good (list 1, list 2) pairs."""
        return self._nsat

    def _eval(self):
        return 1 if self._nsat > 0 else 0

    def clone(self) -> "CircuitPair":
        other = CircuitPair.__new__(CircuitPair)
        self._clone_counters_into(other)
        other.max_size = self.max_size
        other._lists = tuple(d.copy() for d in self._lists)
        other._groups = tuple(
            {k: g.copy() for k, g in side.items()} for side in self._groups
        )
        other._info = self._info.copy()
        other._memo = self._memo  # shared cache: keys are pure functions of content
        other._nsat = self._nsat
        return other
