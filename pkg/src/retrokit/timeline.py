"""Ordered operation timeline keyed by signed 64-bit times.

Time keys are caller-supplied and unique. Nonnegative keys carry user
operations; negative keys are reserved for internally injected prologue
operations, so user-facing layers reject them. Callers that need room
"between" two existing times must leave gaps themselves.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Iterator, NamedTuple, Optional

from .errors import DuplicateTime, NoSuchTime

TimeKey = int

_MIN_KEY = -(2**63)
_MAX_KEY = 2**63 - 1


class RetroOp(NamedTuple):
    """A single set-element operation: write `value` into list `list_id` at `index`.

    `value is None` clears the slot.
    """

    list_id: int
    index: int
    value: object | None


class Timeline:
    """Ordered map from TimeKey to RetroOp, backed by sorted parallel arrays.

    Array inserts cost a memmove rather than O(log m), which at the sizes
    this toolkit targets is faster than a pointer-based tree and clones in
    one pass.
    """

    __slots__ = ("_times", "_ops")

    def __init__(self) -> None:
        self._times: list[TimeKey] = []
        self._ops: list[RetroOp] = []

    @property
    def m(self) -> int:
        """Number of operations currently on the timeline."""
        return len(self._times)

    def __len__(self) -> int:
        return len(self._times)

    def insert_op(self, t: TimeKey, op: RetroOp) -> None:
        """Place `op` at time `t`; raises DuplicateTime if `t` is taken."""
        if not (_MIN_KEY <= t <= _MAX_KEY):
            raise ValueError(f"time key out of 64-bit range: {t}")
        pos = bisect_left(self._times, t)
        if pos < len(self._times) and self._times[pos] == t:
            raise DuplicateTime(f"operation already present at time {t}")
        self._times.insert(pos, t)
        self._ops.insert(pos, op)

    def delete_op(self, t: TimeKey) -> RetroOp:
        """Remove and return the op at time `t`; raises NoSuchTime if absent."""
        pos = bisect_left(self._times, t)
        if pos >= len(self._times) or self._times[pos] != t:
            raise NoSuchTime(f"no operation at time {t}")
        self._times.pop(pos)
        return self._ops.pop(pos)

    def contains(self, t: TimeKey) -> bool:
        pos = bisect_left(self._times, t)
        return pos < len(self._times) and self._times[pos] == t

    def op_at(self, t: TimeKey) -> RetroOp:
        pos = bisect_left(self._times, t)
        if pos >= len(self._times) or self._times[pos] != t:
            raise NoSuchTime(f"no operation at time {t}")
        return self._ops[pos]

    def prefix_ops(self, t: TimeKey) -> list[tuple[TimeKey, RetroOp]]:
        """All (time, op) entries with time <= t, in increasing time order."""
        hi = bisect_right(self._times, t)
        return list(zip(self._times[:hi], self._ops[:hi]))

    def ops_in_range(self, lo: TimeKey, hi: TimeKey) -> list[tuple[TimeKey, RetroOp]]:
        """Entries with lo < time <= hi, in increasing time order."""
        a = bisect_right(self._times, lo)
        b = bisect_right(self._times, hi)
        return list(zip(self._times[a:b], self._ops[a:b]))

    def count_until(self, t: TimeKey) -> int:
        """Number of ops with time <= t."""
        return bisect_right(self._times, t)

    def time_at_rank(self, r: int) -> TimeKey:
        """Time of the r-th op (0-based, increasing time order)."""
        return self._times[r]

    def max_time(self) -> Optional[TimeKey]:
        return self._times[-1] if self._times else None

    def min_time(self) -> Optional[TimeKey]:
        return self._times[0] if self._times else None

    def items(self) -> Iterator[tuple[TimeKey, RetroOp]]:
        return zip(self._times, self._ops)

    def __iter__(self) -> Iterator[tuple[TimeKey, RetroOp]]:
        return zip(self._times, self._ops)

    def clone(self) -> "Timeline":
        other = Timeline.__new__(Timeline)
        other._times = self._times.copy()
        other._ops = self._ops.copy()
        return other
