"""Fully retroactive structures built from the partially retroactive wrapper.

Two real strategies plus a replay oracle:

* CheckpointFull keeps one partially retroactive structure per checkpoint
  boundary (the last one covering the whole timeline). A historical query
  patches the nearest checkpoint at or below the queried time with the few
  operations in between, reads the answer, and removes the patch again.
  Per-query overhead tracks the square root of the timeline length.

* WbtFull keeps the operations as leaves of a weight-balanced tree where
  every node owns a partially retroactive structure over its subtree's
  operations. A historical query covers the queried prefix with
  logarithmically many maximal subtrees and threads the evolving state
  through them: the incoming state is injected as negative-time prologue
  writes, the outgoing state extracted, and the prologue removed. Per-query
  overhead tracks (state size) x log(timeline length).

* AutoFull maintains both and routes each query to whichever is predicted
  cheaper, by default after calibrating the prediction on a measured query.

All user operations live at nonnegative times; negative times are the
reserved prologue band, so the public entry points reject them.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional

from .errors import DuplicateTime, NoSuchTime, NotEmpty, RetroError
from .partial import BaseStructure, CallCounters, PartialRetro, State
from .timeline import RetroOp, TimeKey, Timeline

BaseFactory = Callable[[], BaseStructure]

STRATEGY_NAMES = ("checkpoint", "wbt", "oracle", "auto")


def ceil_sqrt(m: int) -> int:
    return isqrt(m - 1) + 1 if m > 0 else 0


def ceil_log2(x: int) -> int:
    return (x - 1).bit_length() if x >= 1 else 0


def predicted_cost(strategy: str, n: int, m: int) -> int:
    """Predicted per-query base-structure call count.

    ceil(sqrt(m)) for the checkpoint strategy; n * ceil(log2(m + 2)) for the
    tree strategy.
    """
    if n < 0 or m < 0:
        raise ValueError("n and m must be nonnegative")
    if strategy == "checkpoint":
        return ceil_sqrt(m)
    if strategy == "wbt":
        return n * ceil_log2(m + 2)
    raise ValueError(f"predicted_cost knows checkpoint|wbt, got {strategy!r}")


def _as_alpha(value) -> Fraction:
    alpha = value if isinstance(value, Fraction) else Fraction(value).limit_denominator(1024)
    if not Fraction(2, 3) <= alpha < 1:
        raise ValueError(f"alpha must lie in [2/3, 1), got {value!r}")
    return alpha


@dataclass(frozen=True)
class StrategyConfig:
    """How to build a fully retroactive structure.

    block: fixed checkpoint block size, or None for ceil(sqrt(m)) with
    global rebuilds. routing: how AutoFull picks a side per query
    ("measured" calibrates the prediction once, "predicted" trusts the
    formulas as-is).
    """

    strategy: str = "auto"
    alpha: Fraction = Fraction(2, 3)
    block: Optional[int] = None
    routing: str = "measured"

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGY_NAMES:
            raise ValueError(f"strategy must be one of {STRATEGY_NAMES}, got {self.strategy!r}")
        if self.routing not in ("measured", "predicted"):
            raise ValueError(f"routing must be measured|predicted, got {self.routing!r}")
        object.__setattr__(self, "alpha", _as_alpha(self.alpha))


def _check_user_time(t: TimeKey) -> None:
    if t < 0:
        raise ValueError(f"negative times are reserved for internal prologue ops, got {t}")


def _check_bulk_items(items) -> None:
    prev = None
    for t, _ in items:
        _check_user_time(t)
        if prev is not None and t <= prev:
            raise ValueError("bulk items must have strictly increasing times")
        prev = t


class ReplayOracle:
    """Ground truth: answers every query by replaying the prefix from scratch."""

    def __init__(self, factory: BaseFactory) -> None:
        self.timeline = Timeline()
        self._factory = factory

    @property
    def m(self) -> int:
        return self.timeline.m

    def fr_insert(self, t: TimeKey, op: RetroOp) -> None:
        _check_user_time(t)
        self.timeline.insert_op(t, op)

    def fr_delete(self, t: TimeKey) -> RetroOp:
        return self.timeline.delete_op(t)

    def fr_query(self, t: TimeKey):
        base = self._factory()
        for _, op in self.timeline.prefix_ops(t):
            base.apply_set(op.list_id, op.index, op.value)
        return base.eval()

    def bulk_load(self, items) -> None:
        if self.timeline.m:
            raise NotEmpty("bulk_load needs an empty structure")
        _check_bulk_items(items)
        for t, op in items:
            self.timeline.insert_op(t, op)


class CheckpointFull:
    """Square-root checkpointing over the operation timeline."""

    def __init__(self, factory: BaseFactory, block: Optional[int] = None) -> None:
        self.timeline = Timeline()
        self._factory = factory
        self._fixed_block = block
        if block is not None and block < 1:
            raise ValueError("block must be positive")
        self.block = block or 1
        self._bounds: list[TimeKey] = []
        # one more part than bounds; the extra last part covers everything
        self._parts: list[PartialRetro] = [PartialRetro(factory())]
        self._m0 = 0

    @property
    def m(self) -> int:
        return self.timeline.m

    def present_size(self) -> int:
        return self._parts[-1].live.size

    def fr_insert(self, t: TimeKey, op: RetroOp) -> None:
        _check_user_time(t)
        self.timeline.insert_op(t, op)
        i = bisect_left(self._bounds, t)
        for part in self._parts[i:]:
            part.pr_insert(t, op)
        if not self._maybe_rebuild():
            self._maybe_split(i)

    def fr_delete(self, t: TimeKey) -> RetroOp:
        op = self.timeline.delete_op(t)
        i = bisect_left(self._bounds, t)
        for part in self._parts[i:]:
            part.pr_delete(t)
        self._maybe_rebuild()
        return op

    def fr_query(self, t: TimeKey):
        last = self.timeline.max_time()
        if last is not None and t >= last:
            return self._parts[-1].pr_query_present()
        i = bisect_right(self._bounds, t) - 1
        if i >= 0:
            part = self._parts[i]
            lo = self._bounds[i]
        else:
            part = PartialRetro(self._factory())
            lo = -1
        patch = self.timeline.ops_in_range(lo, t)
        for tt, op in patch:
            part.pr_insert(tt, op)
        answer = part.pr_query_present()
        for tt, _ in reversed(patch):
            part.pr_delete(tt)
        return answer

    def bulk_load(self, items) -> None:
        if self.timeline.m:
            raise NotEmpty("bulk_load needs an empty structure")
        _check_bulk_items(items)
        for t, op in items:
            self.timeline.insert_op(t, op)
        self._rebuild()

    # ---- maintenance ----

    def _maybe_rebuild(self) -> bool:
        m = self.timeline.m
        if 2 * m >= self._m0 and m <= 2 * self._m0:
            return False
        self._rebuild()
        return True

    def _rebuild(self) -> None:
        """Re-segment the whole timeline: a boundary after every `block` ops."""
        m = self.timeline.m
        self._m0 = m
        self.block = self._fixed_block or max(1, ceil_sqrt(m))
        block = self.block
        bounds = [self.timeline.time_at_rank(r - 1) for r in range(block, m, block)]
        parts: list[PartialRetro] = []
        running = PartialRetro(self._factory())
        next_cut = 0
        for rank, (t, op) in enumerate(self.timeline.items()):
            running.pr_insert(t, op)
            if next_cut < len(bounds) and rank == (next_cut + 1) * block - 1:
                parts.append(running.clone())
                next_cut += 1
        parts.append(running)
        self._bounds = bounds
        self._parts = parts

    def _maybe_split(self, i: int) -> None:
        """Split segment i (ops strictly after bound i-1, up to bound i) when
        it exceeds twice the block size."""
        lo_rank = self.timeline.count_until(self._bounds[i - 1]) if i > 0 else 0
        hi_rank = (
            self.timeline.count_until(self._bounds[i])
            if i < len(self._bounds)
            else self.timeline.m
        )
        length = hi_rank - lo_rank
        if length <= 2 * self.block:
            return
        cut = self.timeline.time_at_rank(lo_rank + length // 2 - 1)
        if i > 0:
            part = self._parts[i - 1].clone()
            lo_key = self._bounds[i - 1]
        else:
            part = PartialRetro(self._factory())
            lo_key = -1
        for tt, op in self.timeline.ops_in_range(lo_key, cut):
            part.pr_insert(tt, op)
        self._bounds.insert(i, cut)
        self._parts.insert(i, part)

    # ---- introspection for tests ----

    def boundaries(self) -> list[TimeKey]:
        return self._bounds.copy()

    def part_sizes(self) -> list[int]:
        return [p.m for p in self._parts]

    def segment_sizes(self) -> list[int]:
        cuts = [self.timeline.count_until(b) for b in self._bounds]
        edges = [0, *cuts, self.timeline.m]
        return [edges[i + 1] - edges[i] for i in range(len(edges) - 1)]

    def internal_parts(self) -> list[PartialRetro]:
        return list(self._parts)


class _Node:
    __slots__ = ("left", "right", "weight", "maxtime", "part", "t", "op")

    def __init__(self) -> None:
        self.left: Optional[_Node] = None
        self.right: Optional[_Node] = None
        self.weight = 1
        self.maxtime: TimeKey = 0
        self.part: Optional[PartialRetro] = None
        self.t: Optional[TimeKey] = None
        self.op: Optional[RetroOp] = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


class WbtFull:
    """Weight-balanced tree of operations with per-node retroactive cores."""

    def __init__(self, factory: BaseFactory, alpha=Fraction(2, 3)) -> None:
        self._factory = factory
        self.alpha = _as_alpha(alpha)
        self._root: Optional[_Node] = None

    @property
    def m(self) -> int:
        return self._root.weight if self._root is not None else 0

    def present_size(self) -> int:
        return self._root.part.live.size if self._root is not None else 0

    # ---- updates ----

    def fr_insert(self, t: TimeKey, op: RetroOp) -> None:
        _check_user_time(t)
        if self._root is None:
            self._root = self._make_leaf(t, op)
            return
        path = self._path_to(t)
        leaf = path[-1][0]
        if leaf.t == t:
            raise DuplicateTime(f"operation already present at time {t}")
        joint = _Node()
        new_leaf = self._make_leaf(t, op)
        if t < leaf.t:
            joint.left, joint.right = new_leaf, leaf
        else:
            joint.left, joint.right = leaf, new_leaf
        joint.weight = 2
        joint.maxtime = max(t, leaf.t)
        joint.part = PartialRetro(self._factory())
        for node in (joint.left, joint.right):
            joint.part.pr_insert(node.t, node.op)
        self._replace_child(path, len(path) - 1, joint)
        for node, _ in path[:-1]:
            node.weight += 1
            if t > node.maxtime:
                node.maxtime = t
            node.part.pr_insert(t, op)
        self._rebalance_along(path, len(path) - 1)

    def fr_delete(self, t: TimeKey) -> RetroOp:
        path = self._path_to(t)
        if path is None or path[-1][0].t != t:
            raise NoSuchTime(f"no operation at time {t}")
        leaf = path[-1][0]
        op = leaf.op
        if len(path) == 1:
            self._root = None
            return op
        parent, parent_side = path[-2]
        sibling = parent.right if parent_side == "L" else parent.left
        # splice: the parent joint disappears, the sibling takes its slot
        self._replace_child(path, len(path) - 2, sibling)
        # deepest first, so each maxtime reads an already-updated right child
        for node, _ in reversed(path[:-2]):
            node.weight -= 1
            node.part.pr_delete(t)
            node.maxtime = node.right.maxtime
        self._rebalance_along(path, len(path) - 2)
        return op

    def bulk_load(self, items) -> None:
        if self._root is not None:
            raise NotEmpty("bulk_load needs an empty structure")
        items = list(items)
        _check_bulk_items(items)
        if not items:
            return
        leaves = [self._make_leaf(t, op) for t, op in items]
        self._root = self._build(leaves, 0, len(leaves), None)

    # ---- queries ----

    def fr_query(self, t: TimeKey):
        nodes = self._canonical(t)
        if not nodes:
            return self._factory().eval()
        state: Optional[State] = None
        neg = -1
        answer = None
        last = len(nodes) - 1
        for i, node in enumerate(nodes):
            injected: list[TimeKey] = []
            if state is not None:
                for lid, idx, value in state.entries:
                    node.part.pr_insert(neg, RetroOp(lid, idx, value))
                    injected.append(neg)
                    neg -= 1
            if i < last:
                state = node.part.pr_extract_state()
            else:
                answer = node.part.pr_query_present()
            for tkey in reversed(injected):
                node.part.pr_delete(tkey)
        return answer

    def _canonical(self, t: TimeKey) -> list[_Node]:
        """Maximal subtrees whose operations all have time <= t, left to right."""
        nodes: list[_Node] = []
        cursor = self._root
        while cursor is not None:
            if cursor.maxtime <= t:
                nodes.append(cursor)
                break
            if cursor.is_leaf:
                break
            if cursor.left.maxtime <= t:
                nodes.append(cursor.left)
                cursor = cursor.right
            else:
                cursor = cursor.left
        return nodes

    # ---- tree plumbing ----

    def _make_leaf(self, t: TimeKey, op: RetroOp) -> _Node:
        leaf = _Node()
        leaf.t = t
        leaf.op = op
        leaf.maxtime = t
        leaf.part = PartialRetro(self._factory())
        leaf.part.pr_insert(t, op)
        return leaf

    def _path_to(self, t: TimeKey):
        """Root-to-leaf path as (node, side-taken) pairs; side of the leaf is ''."""
        if self._root is None:
            return None
        path = []
        node = self._root
        while not node.is_leaf:
            if t <= node.left.maxtime:
                path.append((node, "L"))
                node = node.left
            else:
                path.append((node, "R"))
                node = node.right
        path.append((node, ""))
        return path

    def _replace_child(self, path, depth: int, new_node: _Node) -> None:
        if depth == 0:
            self._root = new_node
        else:
            parent, side = path[depth - 1]
            if side == "L":
                parent.left = new_node
            else:
                parent.right = new_node

    def _violates(self, node: _Node) -> bool:
        if node.is_leaf:
            return False
        num, den = self.alpha.numerator, self.alpha.denominator
        return (
            node.left.weight * den > num * node.weight
            or node.right.weight * den > num * node.weight
        )

    def _rebalance_along(self, path, limit: int) -> None:
        """Rebuild the highest weight-balance violator among path[:limit]."""
        for depth in range(limit):
            node = path[depth][0]
            if self._violates(node):
                leaves = self._collect_leaves(node)
                rebuilt = self._build(leaves, 0, len(leaves), node.part)
                self._replace_child(path, depth, rebuilt)
                return

    def _collect_leaves(self, node: _Node) -> list[_Node]:
        out: list[_Node] = []
        stack = [node]
        while stack:
            cur = stack.pop()
            if cur.is_leaf:
                out.append(cur)
            else:
                stack.append(cur.right)
                stack.append(cur.left)
        return out

    def _build(self, leaves, lo: int, hi: int, reuse_part) -> _Node:
        """Perfectly balanced subtree over leaves[lo:hi].

        Interior structures are built by cloning the left child's and
        appending the right half's ops (all later than the left's, so each
        lands as its slot's latest write). The top node can reuse an
        existing structure whose op set is unchanged.
        """
        n = hi - lo
        if n == 1:
            return leaves[lo]
        mid = lo + (n + 1) // 2
        node = _Node()
        node.left = self._build(leaves, lo, mid, None)
        node.right = self._build(leaves, mid, hi, None)
        node.weight = n
        node.maxtime = node.right.maxtime
        if reuse_part is not None:
            node.part = reuse_part
        else:
            node.part = node.left.part.clone()
            for leaf in leaves[mid:hi]:
                node.part.pr_insert(leaf.t, leaf.op)
        return node

    # ---- introspection for tests ----

    def balance_violations(self) -> list[tuple[int, int]]:
        """(child weight, node weight) pairs breaking the alpha bound."""
        out = []
        num, den = self.alpha.numerator, self.alpha.denominator
        stack = [self._root] if self._root is not None else []
        while stack:
            node = stack.pop()
            if node.is_leaf:
                continue
            for child in (node.left, node.right):
                if child.weight * den > num * node.weight:
                    out.append((child.weight, node.weight))
            stack.append(node.left)
            stack.append(node.right)
        return out

    def depth(self) -> int:
        def go(node):
            if node is None or node.is_leaf:
                return 1
            return 1 + max(go(node.left), go(node.right))

        return go(self._root) if self._root is not None else 0

    def internal_parts(self) -> list[PartialRetro]:
        out = []
        stack = [self._root] if self._root is not None else []
        while stack:
            node = stack.pop()
            out.append(node.part)
            if not node.is_leaf:
                stack.append(node.left)
                stack.append(node.right)
        return out

    def check_structure(self) -> None:
        """Verify weights, max-times and per-node op sets; raises on drift."""

        def go(node) -> tuple[int, TimeKey, list]:
            if node.is_leaf:
                if node.part.m != 1:
                    raise AssertionError("leaf core must hold exactly its op")
                return 1, node.t, [(node.t, node.op)]
            lw, lmax, lops = go(node.left)
            rw, rmax, rops = go(node.right)
            if lmax >= min(tt for tt, _ in rops):
                raise AssertionError("subtrees out of time order")
            if node.weight != lw + rw:
                raise AssertionError("weight drift")
            if node.maxtime != rmax:
                raise AssertionError("maxtime drift")
            ops = lops + rops
            if node.part.m != len(ops) or [tt for tt, _ in node.part.timeline.items()] != [
                tt for tt, _ in ops
            ]:
                raise AssertionError("node core op set drift")
            return node.weight, node.maxtime, ops

        if self._root is not None:
            go(self._root)


class AutoFull:
    """Maintains both strategies; routes each query to the predicted cheaper one.

    With routing="measured" the first query (and the first after the
    timeline doubles or halves) runs on both sides, compares actual
    base-structure traffic through the shared counters, and pins the winner;
    the prediction formulas are the fallback when no counters are available.
    """

    def __init__(
        self,
        factory: BaseFactory,
        counters: Optional[CallCounters] = None,
        alpha=Fraction(2, 3),
        block: Optional[int] = None,
        routing: str = "measured",
    ) -> None:
        self.checkpoint = CheckpointFull(factory, block=block)
        self.wbt = WbtFull(factory, alpha=alpha)
        self._counters = counters
        self._routing = routing
        self._choice: Optional[str] = None
        self._cal_m = -1

    @property
    def m(self) -> int:
        return self.checkpoint.m

    @property
    def timeline(self) -> Timeline:
        return self.checkpoint.timeline

    def fr_insert(self, t: TimeKey, op: RetroOp) -> None:
        self.checkpoint.fr_insert(t, op)
        self.wbt.fr_insert(t, op)

    def fr_delete(self, t: TimeKey) -> RetroOp:
        op = self.checkpoint.fr_delete(t)
        self.wbt.fr_delete(t)
        return op

    def bulk_load(self, items) -> None:
        items = list(items)
        self.checkpoint.bulk_load(items)
        self.wbt.bulk_load(items)

    def fr_query(self, t: TimeKey):
        return getattr(self, self._route()).fr_query(t)

    def last_route(self) -> Optional[str]:
        return self._choice

    def _route(self) -> str:
        m = self.m
        if self._routing == "measured" and self._counters is not None:
            if self._choice is None or not (self._cal_m / 2 <= m <= self._cal_m * 2):
                self._calibrate()
            return self._choice
        n = self.checkpoint.present_size()
        cp = predicted_cost("checkpoint", n, m)
        wb = predicted_cost("wbt", n, m)
        self._choice = "checkpoint" if cp <= wb else "wbt"
        return self._choice

    def _calibrate(self) -> None:
        """Probe both sides at a few spread-out times and pin the cheaper one."""
        t = self.timeline.max_time()
        if t is None:
            self._choice = "wbt"
            self._cal_m = 0
            return
        counters = self._counters
        probes = sorted({t // 4, t // 2, (3 * t) // 4, t - 1, t})
        cost_cp = cost_wb = 0
        for probe in probes:
            before = counters.total()
            a = self.checkpoint.fr_query(probe)
            cost_cp += counters.total() - before
            before = counters.total()
            b = self.wbt.fr_query(probe)
            cost_wb += counters.total() - before
            if a != b:
                raise RetroError(f"strategies disagree at time {probe}: {a!r} vs {b!r}")
        self._choice = "checkpoint" if cost_cp <= cost_wb else "wbt"
        self._cal_m = self.m


def make_strategy(
    config: StrategyConfig,
    factory: BaseFactory,
    counters: Optional[CallCounters] = None,
):
    """Build the fully retroactive structure described by `config`."""
    name = config.strategy
    if name == "checkpoint":
        return CheckpointFull(factory, block=config.block)
    if name == "wbt":
        return WbtFull(factory, alpha=config.alpha)
    if name == "oracle":
        return ReplayOracle(factory)
    return AutoFull(
        factory,
        counters=counters,
        alpha=config.alpha,
        block=config.block,
        routing=config.routing,
    )
