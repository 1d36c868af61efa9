"""Kernel selection: compiled extension when available, pure Python otherwise.

Set RETRO_KERNEL=pure or RETRO_KERNEL=compiled to force a choice; the default
("auto") prefers the compiled module and falls back silently.
"""

from __future__ import annotations

import os

from . import pure

_choice = os.environ.get("RETRO_KERNEL", "auto")
if _choice not in ("auto", "pure", "compiled"):
    raise ValueError(f"RETRO_KERNEL must be auto|pure|compiled, got {_choice!r}")

compiled = None
if _choice != "pure":
    try:
        from . import _speedups as compiled  # type: ignore[no-redef]
    except ImportError:
        if _choice == "compiled":
            raise
        compiled = None

_active = compiled if compiled is not None else pure

IMPLEMENTATION: str = _active.IMPLEMENTATION
SumMultiset = _active.SumMultiset
TripleTable = _active.TripleTable
eval_packed = _active.eval_packed

OP_IN = pure.OP_IN
OP_CONST = pure.OP_CONST
OP_NOT = pure.OP_NOT
OP_AND = pure.OP_AND
OP_OR = pure.OP_OR
