"""Boolean circuits as gate lists, their netlist text form, and pair checks.

A circuit is a topologically ordered gate list over a declared input count;
the last gate is the output. The netlist text is the canonical identity:
two circuits are "the same" exactly when their netlist bytes are equal.

Netlist format, one gate per line after the header::

    INPUTS <u>
    IN <i>          read input bit i
    CONST <0|1>     constant
    NOT <g>         negate gate g
    AND <g> <h>
    OR <g> <h>

Gate operands refer to strictly earlier lines (0-indexed from the first
gate line).
"""

from __future__ import annotations

import random
from array import array
from typing import NamedTuple

from . import kernels
from .errors import ArityMismatch, MalformedCircuit, NetlistParseError
from .kernels import OP_AND, OP_CONST, OP_IN, OP_NOT, OP_OR

DEFAULT_MAX_GATES = 64

_KIND_NAMES = {OP_IN: "IN", OP_CONST: "CONST", OP_NOT: "NOT", OP_AND: "AND", OP_OR: "OR"}
_NAME_KINDS = {v: k for k, v in _KIND_NAMES.items()}
_UNARY = (OP_IN, OP_CONST, OP_NOT)


def inp(i: int) -> tuple[int, int, int]:
    return (OP_IN, i, 0)


def const(b: int) -> tuple[int, int, int]:
    return (OP_CONST, b, 0)


def not_(g: int) -> tuple[int, int, int]:
    return (OP_NOT, g, 0)


def and_(g: int, h: int) -> tuple[int, int, int]:
    return (OP_AND, g, h)


def or_(g: int, h: int) -> tuple[int, int, int]:
    return (OP_OR, g, h)


class Circuit:
    """Immutable gate-list circuit.

    Construction never validates: malformed circuits are representable on
    purpose (pair checks must classify them as not-good rather than raise).
    """

    __slots__ = ("gates", "num_inputs", "_text", "_packed", "_wf")

    def __init__(self, num_inputs: int, gates) -> None:
        self.num_inputs = int(num_inputs)
        self.gates = tuple((int(k), int(a), int(b)) for (k, a, b) in gates)
        self._text: str | None = None
        self._packed = None
        self._wf: bool | None = None

    @property
    def size(self) -> int:
        return len(self.gates)

    def well_formed(self) -> bool:
        """Gate list is nonempty, kinds are known, operands refer backward."""
        if self._wf is None:
            self._wf = self._check()
        return self._wf

    def _check(self) -> bool:
        if self.num_inputs < 0 or not self.gates:
            return False
        for i, (k, a, b) in enumerate(self.gates):
            if k == OP_IN:
                if not 0 <= a < self.num_inputs:
                    return False
            elif k == OP_CONST:
                if a not in (0, 1):
                    return False
            elif k == OP_NOT:
                if not 0 <= a < i:
                    return False
            elif k in (OP_AND, OP_OR):
                if not (0 <= a < i and 0 <= b < i):
                    return False
            else:
                return False
        return True

    def to_netlist(self) -> str:
        """Canonical text form; byte equality of this is circuit identity."""
        if self._text is None:
            lines = [f"INPUTS {self.num_inputs}"]
            for k, a, b in self.gates:
                name = _KIND_NAMES.get(k, f"?{k}")
                if k in _UNARY:
                    lines.append(f"{name} {a}")
                else:
                    lines.append(f"{name} {a} {b}")
            self._text = "\n".join(lines)
        return self._text

    @classmethod
    def from_netlist(cls, text: str) -> "Circuit":
        """Parse netlist text; raises NetlistParseError on any violation."""
        lines = [ln.strip() for ln in text.strip().splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise NetlistParseError("empty netlist")
        head = lines[0].split()
        if len(head) != 2 or head[0] != "INPUTS":
            raise NetlistParseError(f"bad header line: {lines[0]!r}")
        try:
            num_inputs = int(head[1])
        except ValueError:
            raise NetlistParseError(f"bad input count: {head[1]!r}") from None
        if num_inputs < 0:
            raise NetlistParseError("negative input count")
        gates: list[tuple[int, int, int]] = []
        for lineno, ln in enumerate(lines[1:]):
            toks = ln.split()
            kind = _NAME_KINDS.get(toks[0])
            if kind is None:
                raise NetlistParseError(f"unknown gate {toks[0]!r} on line {lineno + 2}")
            want = 2 if kind in _UNARY else 3
            if len(toks) != want:
                raise NetlistParseError(f"wrong operand count on line {lineno + 2}")
            try:
                ops = [int(tk) for tk in toks[1:]]
            except ValueError:
                raise NetlistParseError(f"non-integer operand on line {lineno + 2}") from None
            a = ops[0]
            b = ops[1] if len(ops) == 2 else 0
            if kind == OP_IN and not 0 <= a < num_inputs:
                raise NetlistParseError(f"input index out of range on line {lineno + 2}")
            if kind == OP_CONST and a not in (0, 1):
                raise NetlistParseError(f"constant must be 0 or 1 on line {lineno + 2}")
            if kind == OP_NOT and not 0 <= a < lineno:
                raise NetlistParseError(f"operand must refer backward on line {lineno + 2}")
            if kind in (OP_AND, OP_OR) and not (0 <= a < lineno and 0 <= b < lineno):
                raise NetlistParseError(f"operand must refer backward on line {lineno + 2}")
            gates.append((kind, a, b))
        if not gates:
            raise NetlistParseError("netlist has no gates")
        return cls(num_inputs, gates)

    def packed(self):
        """Parallel opcode/operand arrays for the evaluation kernel."""
        if self._packed is None:
            kinds = array("q", (g[0] for g in self.gates))
            arg_a = array("q", (g[1] for g in self.gates))
            arg_b = array("q", (g[2] for g in self.gates))
            self._packed = (kinds, arg_a, arg_b)
        return self._packed

    def __eq__(self, other) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.num_inputs == other.num_inputs and self.gates == other.gates

    def __hash__(self) -> int:
        return hash((self.num_inputs, self.gates))

    def __repr__(self) -> str:
        return f"Circuit(inputs={self.num_inputs}, size={self.size})"


def eval_circuit(circuit: Circuit, bits: str) -> int:
    """Evaluate `circuit` on the bit string `bits`; returns 0 or 1.

    Raises MalformedCircuit for ill-formed gate lists and ArityMismatch when
    len(bits) differs from the declared input count.
    """
    if not circuit.well_formed():
        raise MalformedCircuit(f"cannot evaluate ill-formed circuit {circuit!r}")
    if len(bits) != circuit.num_inputs:
        raise ArityMismatch(
            f"circuit wants {circuit.num_inputs} input bits, got {len(bits)}"
        )
    encoded = bits.encode("ascii")
    if any(ch not in (48, 49) for ch in encoded):
        raise ValueError(f"input bits must be '0'/'1', got {bits!r}")
    kinds, arg_a, arg_b = circuit.packed()
    return kernels.eval_packed(kinds, arg_a, arg_b, encoded)


class CircuitEntry(NamedTuple):
    """List element of the circuit-pair structure: a circuit plus a half-input."""

    circuit: Circuit
    bits: str


def is_good_pair(e1: CircuitEntry, e2: CircuitEntry, max_size: int = DEFAULT_MAX_GATES) -> bool:
    """Whether (e1, e2) witnesses satisfiability.

    Requires identical netlist bytes, a well-formed circuit of size at most
    `max_size` whose input count is exactly len(e1.bits) + len(e2.bits), and
    the circuit accepting e1.bits followed by e2.bits. Malformed descriptions
    simply fail the check; nothing raises.
    """
    if e1.circuit.to_netlist() != e2.circuit.to_netlist():
        return False
    c = e2.circuit
    if not c.well_formed() or c.size > max_size:
        return False
    joined = e1.bits + e2.bits
    if c.num_inputs != len(joined):
        return False
    if any(ch not in "01" for ch in joined):
        return False
    kinds, arg_a, arg_b = c.packed()
    return kernels.eval_packed(kinds, arg_a, arg_b, joined.encode("ascii")) == 1


def random_circuit(rng: random.Random, num_inputs: int, size: int) -> Circuit:
    """Uniformly messy well-formed circuit with exactly `size` gates."""
    gates: list[tuple[int, int, int]] = []
    for i in range(size):
        choices = ["const"]
        if num_inputs > 0:
            choices.append("in")
        if i > 0:
            choices += ["not", "and", "or", "and", "or"]
        kind = rng.choice(choices)
        if kind == "in":
            gates.append(inp(rng.randrange(num_inputs)))
        elif kind == "const":
            gates.append(const(rng.randint(0, 1)))
        elif kind == "not":
            gates.append(not_(rng.randrange(i)))
        elif kind == "and":
            gates.append(and_(rng.randrange(i), rng.randrange(i)))
        else:
            gates.append(or_(rng.randrange(i), rng.randrange(i)))
    return Circuit(num_inputs, gates)
