"""Partially retroactive wrapper over any compatible base structure.

The wrapper keeps, per touched (list, index) slot, the chronological history
of set-element operations, and mirrors only each slot's latest write into a
live base structure. A retroactive insert or delete therefore reaches the
live structure at most once: exactly when it changes which operation is the
slot's latest. Present-time queries go straight to the live structure.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import NamedTuple, Optional

from .errors import NotEmpty
from .timeline import RetroOp, TimeKey, Timeline


class CallCounters:
    """Shared sink for counting base-structure traffic across many instances."""

    __slots__ = ("apply_calls", "eval_calls")

    def __init__(self) -> None:
        self.apply_calls = 0
        self.eval_calls = 0

    def total(self) -> int:
        return self.apply_calls + self.eval_calls


class State(NamedTuple):
    """Snapshot of every non-empty slot, sorted by (list_id, index)."""

    entries: tuple

    @property
    def n(self) -> int:
        return len(self.entries)


class BaseStructure:
    """Contract shared by the evaluable list structures.

    Subclasses implement `_apply`, `_eval` and `clone`, and keep
    `self._lists` as one dict per list mapping index to entry. `apply_set`
    and `eval` do the counter bookkeeping so the per-instance counters and
    the optional shared sink never drift apart.
    """

    list_count = 0

    def __init__(self, counters: Optional[CallCounters] = None) -> None:
        self.applied_sets = 0
        self.evals = 0
        self._sink = counters
        self._lists: tuple[dict, ...] = tuple({} for _ in range(self.list_count))

    def apply_set(self, list_id: int, index: int, value) -> None:
        """Write `value` (None clears) into slot (list_id, index)."""
        self.applied_sets += 1
        if self._sink is not None:
            self._sink.apply_calls += 1
        self._apply(list_id, index, value)

    def eval(self):
        """Evaluate the structure's function on the current lists."""
        self.evals += 1
        if self._sink is not None:
            self._sink.eval_calls += 1
        return self._eval()

    def get(self, list_id: int, index: int):
        return self._lists[list_id - 1].get(index)

    @property
    def size(self) -> int:
        """Total number of non-empty slots across all lists."""
        return sum(len(d) for d in self._lists)

    def extract_state(self) -> State:
        entries = []
        for lid, d in enumerate(self._lists, start=1):
            for idx in sorted(d):
                entries.append((lid, idx, d[idx]))
        return State(tuple(entries))

    def load_state(self, state: State) -> None:
        """Replay a snapshot into an empty instance, one apply_set per entry."""
        if self.size != 0:
            raise NotEmpty(f"load_state needs an empty structure, have {self.size} slots")
        for lid, idx, value in state.entries:
            self.apply_set(lid, idx, value)

    def _write_slot(self, list_id: int, index: int, value):
        """Shared slot bookkeeping; returns the previous value (None if empty)."""
        if not 1 <= list_id <= self.list_count:
            raise ValueError(f"list_id must be in 1..{self.list_count}, got {list_id}")
        if index < 0:
            raise ValueError(f"index must be nonnegative, got {index}")
        d = self._lists[list_id - 1]
        old = d.get(index)
        if value is None:
            d.pop(index, None)
        else:
            d[index] = value
        return old

    def _apply(self, list_id: int, index: int, value) -> None:
        raise NotImplementedError

    def _eval(self):
        raise NotImplementedError

    def clone(self) -> "BaseStructure":
        raise NotImplementedError

    def _clone_counters_into(self, other: "BaseStructure") -> None:
        other.applied_sets = self.applied_sets
        other.evals = self.evals
        other._sink = self._sink


class PartialRetro:
    """Retroactively editable operation sequence with present-time queries."""

    __slots__ = ("timeline", "live", "pr_calls", "_hist")

    def __init__(self, live: BaseStructure) -> None:
        self.timeline = Timeline()
        self.live = live
        self.pr_calls = 0
        # (list_id, index) -> parallel sorted (times, values) for that slot
        self._hist: dict[tuple[int, int], tuple[list, list]] = {}

    @property
    def m(self) -> int:
        return self.timeline.m

    def pr_insert(self, t: TimeKey, op: RetroOp) -> None:
        """Add `op` at time `t`; touches the live structure only if `op`
        becomes its slot's latest write."""
        self.timeline.insert_op(t, op)
        self.pr_calls += 1
        key = (op.list_id, op.index)
        hist = self._hist.get(key)
        if hist is None:
            hist = ([], [])
            self._hist[key] = hist
        times, values = hist
        pos = bisect_right(times, t)
        times.insert(pos, t)
        values.insert(pos, op.value)
        if pos == len(times) - 1:
            self.live.apply_set(op.list_id, op.index, op.value)

    def pr_delete(self, t: TimeKey) -> RetroOp:
        """Remove the op at time `t`; touches the live structure only if that
        op was its slot's latest write."""
        op = self.timeline.delete_op(t)
        self.pr_calls += 1
        key = (op.list_id, op.index)
        times, values = self._hist[key]
        pos = bisect_left(times, t)
        was_latest = pos == len(times) - 1
        times.pop(pos)
        values.pop(pos)
        if was_latest:
            if times:
                self.live.apply_set(op.list_id, op.index, values[-1])
            else:
                del self._hist[key]
                self.live.apply_set(op.list_id, op.index, None)
        return op

    def pr_query_present(self):
        self.pr_calls += 1
        return self.live.eval()

    def pr_extract_state(self) -> State:
        self.pr_calls += 1
        return self.live.extract_state()

    def slot_history(self, list_id: int, index: int) -> list[tuple[TimeKey, object]]:
        """Chronological (time, value) writes recorded for one slot."""
        hist = self._hist.get((list_id, index))
        if hist is None:
            return []
        return list(zip(hist[0], hist[1]))

    def clone(self) -> "PartialRetro":
        other = PartialRetro.__new__(PartialRetro)
        other.timeline = self.timeline.clone()
        other.live = self.live.clone()
        other.pr_calls = self.pr_calls
        other._hist = {
            key: (times.copy(), values.copy()) for key, (times, values) in self._hist.items()
        }
        return other
