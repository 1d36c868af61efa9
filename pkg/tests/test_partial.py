"""Partially retroactive wrapper: masking semantics, frugality, replay law.

The central law: after any edit sequence, the live structure must equal a
fresh base that replays the timeline in time order. Frugality: each
pr_insert / pr_delete issues at most one apply_set.
"""

import random

import pytest

from retrokit.errors import DuplicateTime, NoSuchTime, NotEmpty
from retrokit.harness import FAMILIES
from retrokit.partial import CallCounters, PartialRetro, State
from retrokit.structures import MinPlusSum
from retrokit.timeline import RetroOp


def make_pr(family="minplus"):
    counters = CallCounters()
    return counters, PartialRetro(FAMILIES[family].make_base(counters))


def replayed_state(family, timeline) -> State:
    base = FAMILIES[family].make_base(CallCounters())
    for _, op in timeline.items():
        base.apply_set(op.list_id, op.index, op.value)
    return base.extract_state()


def test_only_latest_write_lands():
    counters, pr = make_pr()
    pr.pr_insert(10, RetroOp(1, 0, 5))
    assert pr.live.get(1, 0) == 5
    before = counters.apply_calls
    pr.pr_insert(4, RetroOp(1, 0, 9))  # earlier write, masked by the one at 10
    assert counters.apply_calls == before
    assert pr.live.get(1, 0) == 5
    pr.pr_insert(12, RetroOp(1, 0, None))  # new latest: clears the slot
    assert pr.live.get(1, 0) is None
    assert pr.slot_history(1, 0) == [(4, 9), (10, 5), (12, None)]


def test_delete_falls_back_to_previous_write():
    counters, pr = make_pr()
    pr.pr_insert(4, RetroOp(1, 0, 9))
    pr.pr_insert(10, RetroOp(1, 0, 5))
    pr.pr_delete(10)
    assert pr.live.get(1, 0) == 9
    before = counters.apply_calls
    pr.pr_insert(7, RetroOp(1, 0, 3))  # latest again after the delete above
    assert pr.live.get(1, 0) == 3
    assert counters.apply_calls == before + 1
    pr.pr_delete(7)
    assert pr.live.get(1, 0) == 9
    pr.pr_delete(4)
    assert pr.live.get(1, 0) is None
    assert pr.slot_history(1, 0) == []


def test_delete_of_masked_op_is_free():
    counters, pr = make_pr()
    pr.pr_insert(4, RetroOp(1, 0, 9))
    pr.pr_insert(10, RetroOp(1, 0, 5))
    before = counters.apply_calls
    op = pr.pr_delete(4)
    assert op == RetroOp(1, 0, 9)
    assert counters.apply_calls == before
    assert pr.live.get(1, 0) == 5


def test_masking_affects_eval():
    _, pr = make_pr()
    pr.pr_insert(1, RetroOp(1, 0, 0))
    pr.pr_insert(2, RetroOp(1, 1, 0))
    pr.pr_insert(3, RetroOp(2, 0, 3))
    pr.pr_insert(4, RetroOp(2, 1, 5))
    assert pr.pr_query_present() == 3
    pr.pr_insert(9, RetroOp(2, 0, None))  # retroactively mask the 3
    assert pr.pr_query_present() == 5
    pr.pr_delete(9)
    assert pr.pr_query_present() == 3


def test_timeline_errors_pass_through():
    _, pr = make_pr()
    pr.pr_insert(5, RetroOp(1, 0, 1))
    with pytest.raises(DuplicateTime):
        pr.pr_insert(5, RetroOp(1, 0, 2))
    with pytest.raises(NoSuchTime):
        pr.pr_delete(6)
    # failed calls still leave a consistent wrapper
    assert replayed_state("minplus", pr.timeline) == pr.pr_extract_state()


def test_query_present_touches_only_eval_counter():
    counters, pr = make_pr()
    pr.pr_insert(1, RetroOp(1, 0, 2))
    pr.pr_insert(2, RetroOp(2, 0, 2))
    applies, evals = counters.apply_calls, counters.eval_calls
    assert pr.pr_query_present() == 4
    assert counters.apply_calls == applies
    assert counters.eval_calls == evals + 1


def test_pr_calls_counts_every_public_call():
    _, pr = make_pr()
    pr.pr_insert(1, RetroOp(1, 0, 2))
    pr.pr_insert(2, RetroOp(2, 0, 2))
    pr.pr_delete(1)
    pr.pr_query_present()
    pr.pr_extract_state()
    assert pr.pr_calls == 5


def test_extract_load_round_trip():
    counters, pr = make_pr()
    pr.pr_insert(1, RetroOp(1, 0, 4))
    pr.pr_insert(2, RetroOp(1, 2, 1))
    pr.pr_insert(3, RetroOp(2, 0, 6))
    state = pr.pr_extract_state()
    assert state.n == 3

    fresh = MinPlusSum(counters)
    before = counters.apply_calls
    fresh.load_state(state)
    assert counters.apply_calls == before + state.n  # one apply per entry
    assert fresh.extract_state() == state
    assert fresh.eval() == 10
    with pytest.raises(NotEmpty):
        fresh.load_state(state)


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_frugality_and_replay_law_fuzz(family):
    fam = FAMILIES[family]
    counters, pr = make_pr(family)
    rng = random.Random(97)
    sample = fam.make_sampler(rng, fam.default_span, 0.3)
    times: list[int] = []
    for step in range(1200):
        before = counters.apply_calls
        if times and rng.random() < 0.4:
            t = times.pop(rng.randrange(len(times)))
            pr.pr_delete(t)
        else:
            t = rng.randrange(1 << 30)
            if pr.timeline.contains(t):
                continue
            lid, idx, value = sample()
            pr.pr_insert(t, RetroOp(lid, idx, value))
            times.append(t)
        assert counters.apply_calls - before <= 1  # frugality
        if step % 60 == 0:
            assert pr.pr_extract_state() == replayed_state(family, pr.timeline)
    assert pr.pr_extract_state() == replayed_state(family, pr.timeline)


def test_clone_is_independent():
    _, pr = make_pr()
    pr.pr_insert(1, RetroOp(1, 0, 4))
    pr.pr_insert(2, RetroOp(2, 0, 2))
    twin = pr.clone()
    pr.pr_insert(3, RetroOp(2, 0, 7))
    twin.pr_delete(2)
    assert pr.pr_query_present() == 11
    assert twin.pr_query_present() is None
    assert twin.slot_history(2, 0) == []
