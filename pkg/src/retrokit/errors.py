"""Exception types shared across the toolkit."""


class RetroError(Exception):
    """Base class for all toolkit errors."""


class DuplicateTime(RetroError):
    """An operation already exists at the requested time key."""


class NoSuchTime(RetroError):
    """No operation exists at the requested time key."""


class NotEmpty(RetroError):
    """Bulk state loading requires an empty structure."""


class MalformedCircuit(RetroError):
    """Circuit description violates well-formedness (bad refs, empty, ...)."""


class ArityMismatch(RetroError):
    """Input bit string length differs from the circuit's declared inputs."""


class NetlistParseError(RetroError):
    """Netlist text does not follow the line format."""


class OddInputCount(RetroError):
    """Satisfiability driver requires an even number of circuit inputs."""


class DimensionMismatch(RetroError):
    """Instance components disagree on their common dimension."""
