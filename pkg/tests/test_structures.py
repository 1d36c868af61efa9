"""The three base structures against from-scratch recounts.

Each structure keeps its aggregate incrementally; the tests recompute the
same aggregate from shadow slot dicts after every single write (the
recount helpers live in oracles.py and never look inside the structures).
"""

import random

import pytest

from oracles import (
    audit_structure,
    ref_good_pairs,
    ref_min_sum,
    ref_threesum_eval,
    ref_views,
    ref_zero_triples,
)
from retrokit.circuits import Circuit, CircuitEntry, and_, inp
from retrokit.harness import FAMILIES
from retrokit.partial import CallCounters
from retrokit.structures import CircuitPair, MinPlusSum, ThreeSum


def test_minplus_example():
    s = MinPlusSum(CallCounters())
    assert s.eval() is None
    s.apply_set(1, 3, 4)
    assert s.eval() is None  # no shared index yet
    s.apply_set(2, 3, 6)
    assert s.eval() == 10
    s.apply_set(1, 0, -2)
    assert s.eval() == 10  # index 0 unmatched on list 2
    s.apply_set(2, 0, 1)
    assert s.eval() == -1
    s.apply_set(1, 0, None)
    assert s.eval() == 10
    assert s.get(1, 3) == 4
    assert s.get(1, 0) is None
    assert s.size == 3


def test_minplus_handles_duplicate_sums():
    s = MinPlusSum(CallCounters())
    for idx in range(3):
        s.apply_set(1, idx, 5)
        s.apply_set(2, idx, 5)
    assert s.eval() == 10
    s.apply_set(1, 0, None)
    assert s.eval() == 10  # two copies of 10 remain
    s.apply_set(2, 1, None)
    s.apply_set(1, 2, None)
    assert s.eval() is None


def test_threesum_singleton_example():
    s = ThreeSum(CallCounters())
    s.apply_set(1, 0, -3)
    s.apply_set(2, 0, 1)
    s.apply_set(3, 0, 2)
    assert s.zero_triples() == 1
    assert s.eval() == 1  # 1x1 views, gate 1*1 <= 1 holds
    s.apply_set(3, 0, 5)
    assert s.zero_triples() == 0
    assert s.eval() == 0


def test_threesum_gate_blocks_eval():
    s = ThreeSum(CallCounters())
    s.apply_set(1, 0, -2)
    s.apply_set(2, 0, 1)
    s.apply_set(2, 1, 1)  # |L2| = 2, |L2|^2 > |L1| = 1
    s.apply_set(3, 0, 1)
    assert s.eval() == 0
    # grow list 1 until the gate opens; the triple was there all along
    for idx in range(1, 4):
        s.apply_set(1, idx, 100 + idx)
    assert s.eval() == 1


def test_threesum_views_track_first_sqrt_slots():
    s = ThreeSum(CallCounters())
    shadow = {1: {}, 2: {}, 3: {}}

    def put(lid, idx, value):
        s.apply_set(lid, idx, value)
        if value is None:
            shadow[lid].pop(idx, None)
        else:
            shadow[lid][idx] = value
        assert s.views() == ref_views(shadow[1], shadow[2], shadow[3])
        assert s.zero_triples() == ref_zero_triples(shadow[1], shadow[2], shadow[3])

    for idx in range(9):
        put(1, idx, idx - 4)
    for idx in range(5):
        put(2, idx, idx)
    for idx in range(5):
        put(3, idx, -idx)
    put(2, 0, None)  # view boundary shifts right
    put(1, 8, None)  # cap drops from 3 to 2
    put(3, 1, 7)  # in-view rewrite
    put(2, 9, 0)  # beyond the view: counter must not move


def test_circuitpair_witness_example():
    c = Circuit(2, (inp(0), inp(1), and_(0, 1)))
    s = CircuitPair(CallCounters())
    s.apply_set(1, 0, CircuitEntry(c, "1"))
    assert s.eval() == 0
    s.apply_set(2, 0, CircuitEntry(c, "1"))
    assert s.good_pairs() == 1
    assert s.eval() == 1
    s.apply_set(2, 0, CircuitEntry(c, "0"))
    assert s.good_pairs() == 0
    assert s.eval() == 0


def test_circuitpair_respects_size_cap():
    c = Circuit(2, (inp(0), inp(1), and_(0, 1)))
    s = CircuitPair(CallCounters(), max_size=2)
    s.apply_set(1, 0, CircuitEntry(c, "1"))
    s.apply_set(2, 0, CircuitEntry(c, "1"))
    assert s.good_pairs() == 0  # 3 gates > cap 2


def test_empty_structures_evaluate_to_nothing():
    assert MinPlusSum(CallCounters()).eval() is None
    assert ThreeSum(CallCounters()).eval() == 0
    assert CircuitPair(CallCounters()).eval() == 0


def test_slot_validation():
    s = MinPlusSum(CallCounters())
    with pytest.raises(ValueError):
        s.apply_set(3, 0, 1)
    with pytest.raises(ValueError):
        s.apply_set(0, 0, 1)
    with pytest.raises(ValueError):
        s.apply_set(1, -1, 1)


def test_instance_counters_and_sink_agree():
    sink = CallCounters()
    s = ThreeSum(sink)
    for idx in range(5):
        s.apply_set(1, idx, idx)
        s.eval()
    assert (s.applied_sets, s.evals) == (5, 5)
    assert (sink.apply_calls, sink.eval_calls) == (5, 5)


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_clone_is_deep(family):
    fam = FAMILIES[family]
    rng = random.Random(3)
    sample = fam.make_sampler(rng, fam.default_span, 0.2)
    s = fam.make_base(CallCounters())
    for _ in range(40):
        s.apply_set(*sample())
    twin = s.clone()
    snapshot = twin.extract_state()
    answer = twin.eval()
    for _ in range(40):
        s.apply_set(*sample())
    assert twin.extract_state() == snapshot
    assert twin.eval() == answer


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_aggregates_match_recounts_on_random_stream(family):
    # one from-scratch recount after every apply_set
    assert audit_structure(family, 1000, seed=5) == 0
    assert audit_structure(family, 400, seed=6) == 0
