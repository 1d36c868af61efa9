"""Pure and compiled kernels must be observably identical.

Every test drives the same operation stream at both implementations and
compares outputs step by step. When the compiled module is unavailable the
comparisons are skipped; the pure kernel is still exercised against simple
shadow models.
"""

import os
import random
import subprocess
import sys

import pytest

from retrokit.circuits import random_circuit
from retrokit.kernels import pure

try:
    from retrokit.kernels import _speedups as compiled
except ImportError:
    compiled = None

both = pytest.mark.skipif(compiled is None, reason="compiled kernel not built")


def test_sum_multiset_shadow_model():
    rng = random.Random(1)
    ms = pure.SumMultiset()
    shadow: list[int] = []
    for _ in range(4000):
        if shadow and rng.random() < 0.45:
            v = shadow.pop(rng.randrange(len(shadow)))
            ms.remove(v)
        else:
            v = rng.randrange(-50, 50)
            ms.add(v)
            shadow.append(v)
        assert len(ms) == len(shadow)
        assert ms.min() == (min(shadow) if shadow else None)


def test_sum_multiset_duplicates_and_errors():
    ms = pure.SumMultiset()
    ms.add(5)
    ms.add(5)
    ms.remove(5)
    assert ms.min() == 5
    ms.remove(5)
    assert ms.min() is None
    with pytest.raises(KeyError):
        ms.remove(5)


def test_triple_table_shadow_model():
    rng = random.Random(2)
    tt = pure.TripleTable()
    values: list[int] = []
    pair_sums: list[int] = []
    for _ in range(3000):
        roll = rng.random()
        if roll < 0.3 and values:
            tt.remove_value(values.pop(rng.randrange(len(values))))
        elif roll < 0.55:
            v = rng.randrange(-6, 7)
            tt.add_value(v)
            values.append(v)
        elif roll < 0.75 and pair_sums:
            tt.remove_pair(pair_sums.pop(rng.randrange(len(pair_sums))))
        else:
            s = rng.randrange(-10, 11)
            tt.add_pair(s)
            pair_sums.append(s)
        want = sum(1 for v in values for s in pair_sums if v + s == 0)
        assert tt.triples == want


def test_triple_table_bulk_pairs():
    tt = pure.TripleTable()
    tt.add_value(-3)
    tt.add_value(0)
    tt.add_pairs(1, [2, -1, 3])  # sums 3, 0, 4
    assert tt.triples == 2  # -3+3 and 0+0
    tt.remove_pairs(1, [2, 3])
    assert tt.triples == 1


@both
def test_kernels_agree_on_sum_multiset():
    rng = random.Random(7)
    a, b = pure.SumMultiset(), compiled.SumMultiset()
    live: list[int] = []
    for step in range(5000):
        if live and rng.random() < 0.45:
            v = live.pop(rng.randrange(len(live)))
            a.remove(v)
            b.remove(v)
        else:
            v = rng.randrange(-10**6, 10**6)
            a.add(v)
            b.add(v)
            live.append(v)
        assert a.min() == b.min()
        assert len(a) == len(b)
        if step == 2500:
            a, b = a.clone(), b.clone()  # keep going on the clones


@both
def test_kernels_agree_on_triple_table():
    rng = random.Random(8)
    a, b = pure.TripleTable(), compiled.TripleTable()
    values: list[int] = []
    pair_sums: list[tuple[int, int]] = []
    for _ in range(3000):
        roll = rng.random()
        if roll < 0.25 and values:
            v = values.pop(rng.randrange(len(values)))
            a.remove_value(v)
            b.remove_value(v)
        elif roll < 0.5:
            v = rng.randrange(-8, 9)
            a.add_value(v)
            b.add_value(v)
            values.append(v)
        elif roll < 0.7 and pair_sums:
            x, c = pair_sums.pop(rng.randrange(len(pair_sums)))
            a.remove_pairs(x, [c])
            b.remove_pairs(x, [c])
        else:
            x, c = rng.randrange(-8, 9), rng.randrange(-8, 9)
            a.add_pairs(x, [c])
            b.add_pairs(x, [c])
            pair_sums.append((x, c))
        assert a.triples == b.triples


@both
def test_kernels_agree_on_eval_packed():
    rng = random.Random(9)
    for _ in range(500):
        u = rng.randrange(5)
        circuit = random_circuit(rng, u, rng.randrange(1, 12))
        kinds, arg_a, arg_b = circuit.packed()
        bits = bytes(rng.choice(b"01") for _ in range(u))
        assert pure.eval_packed(kinds, arg_a, arg_b, bits) == compiled.eval_packed(
            kinds, arg_a, arg_b, bits
        )


@both
def test_clones_do_not_share_state():
    for mod in (pure, compiled):
        ms = mod.SumMultiset()
        ms.add(4)
        twin = ms.clone()
        twin.add(1)
        assert ms.min() == 4
        assert twin.min() == 1
        tt = mod.TripleTable()
        tt.add_value(0)
        other = tt.clone()
        other.add_pair(0)
        assert tt.triples == 0
        assert other.triples == 1


def _selected(env_value: str) -> tuple[int, str, str]:
    code = "from retrokit import kernels; print(kernels.IMPLEMENTATION)"
    env = dict(os.environ, RETRO_KERNEL=env_value)
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    return (out.returncode, out.stdout.strip(), out.stderr)


def test_kernel_selection_env_var():
    rc, picked, _ = _selected("pure")
    assert (rc, picked) == (0, "pure")
    rc, picked, _ = _selected("auto")
    assert rc == 0
    assert picked in ("pure", "compiled")
    if compiled is not None:
        rc, picked, _ = _selected("compiled")
        assert (rc, picked) == (0, "compiled")
    rc, _, err = _selected("turbo")
    assert rc != 0
    assert "turbo" in err
