"""Shared exception types."""


class DimensionMismatchError(ValueError):
    """Operands disagree on the ambient dimension."""


class IterationCapError(RuntimeError):
    """The feasibility solver ran past its pivot budget."""


class CapExceededError(RuntimeError):
    """A tree or clause expansion grew beyond its configured bound."""


class ExhausterKindError(ValueError):
    """A family of the wrong kind (upper vs lower) was supplied."""
