"""Retroactive data structures over slot-list states.

A timeline of set-element operations can be edited at any past time; the
partially retroactive wrapper answers present-time queries, and two
transformations (checkpointing and a weight-balanced operation tree) lift
it to queries at arbitrary historical times. Ships three base structures
(min-plus sums, zero-sum triples, circuit-pair satisfiability witnesses),
drivers that solve the matching classic problems through retroactive
timelines, and a CLI for verification and benchmarking.
"""

from .circuits import Circuit, CircuitEntry, eval_circuit, is_good_pair, random_circuit
from .errors import (
    ArityMismatch,
    DimensionMismatch,
    DuplicateTime,
    MalformedCircuit,
    NetlistParseError,
    NoSuchTime,
    NotEmpty,
    OddInputCount,
    RetroError,
)
from .full import (
    AutoFull,
    CheckpointFull,
    ReplayOracle,
    StrategyConfig,
    WbtFull,
    make_strategy,
    predicted_cost,
)
from .partial import BaseStructure, CallCounters, PartialRetro, State
from .reductions import (
    CsatInstance,
    MinPlusInstance,
    ThreeSumInstance,
    brute_3sum,
    brute_csat,
    brute_minplus,
    solve_3sum_retro,
    solve_csat_retro,
    solve_online_minplus,
)
from .structures import CircuitPair, MinPlusSum, ThreeSum
from .timeline import RetroOp, TimeKey, Timeline

__version__ = "0.1.0"

__all__ = [
    "ArityMismatch",
    "AutoFull",
    "BaseStructure",
    "CallCounters",
    "CheckpointFull",
    "Circuit",
    "CircuitEntry",
    "CircuitPair",
    "CsatInstance",
    "DimensionMismatch",
    "DuplicateTime",
    "MalformedCircuit",
    "MinPlusInstance",
    "MinPlusSum",
    "NetlistParseError",
    "NoSuchTime",
    "NotEmpty",
    "OddInputCount",
    "PartialRetro",
    "ReplayOracle",
    "RetroError",
    "RetroOp",
    "State",
    "StrategyConfig",
    "ThreeSum",
    "ThreeSumInstance",
    "TimeKey",
    "Timeline",
    "WbtFull",
    "brute_3sum",
    "brute_csat",
    "brute_minplus",
    "eval_circuit",
    "is_good_pair",
    "make_strategy",
    "predicted_cost",
    "random_circuit",
    "solve_3sum_retro",
    "solve_csat_retro",
    "solve_online_minplus",
]
