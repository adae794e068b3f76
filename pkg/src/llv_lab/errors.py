"""Exception hierarchy.

Rule of thumb: malformed inputs and violated preconditions raise; failed
mathematical verifications on well-formed inputs are returned inside report
objects instead, so a pipeline can record them and keep going.
"""


class LlvLabError(Exception):
    """Base class for all llv-lab errors."""


class MalformedAlgebraError(LlvLabError):
    """Structurally invalid algebra data (bad shapes, failed invariants)."""


class SchemaError(LlvLabError):
    """Algebra JSON that does not conform to the canonical schema."""


class BuilderError(LlvLabError):
    """A fixture builder could not complete (bad parameters, saturation failure)."""


class NoSl2Error(LlvLabError):
    """Requested sl2-partner for a class without the Lefschetz property."""


class StabilityError(LlvLabError):
    """A subspace was not stable under an operator that must preserve it."""


class ClosureDivergenceError(LlvLabError):
    """Lie closure exceeded its iteration cap; the input is pathological."""
