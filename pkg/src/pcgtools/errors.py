"""Exception hierarchy shared by every module."""


class PCGError(Exception):
    """Base class for all errors raised by pcgtools."""


class DisconnectedGraph(PCGError):
    pass


class InvalidPartition(PCGError):
    pass


class InvalidGraph(PCGError):
    pass


class InvalidTree(PCGError):
    pass


class UnmappedVertex(PCGError):
    pass


class InvalidBounds(PCGError):
    pass


class PreconditionViolated(PCGError):
    pass


class ParseError(PCGError):
    """Malformed input text; ``position`` is a character offset or line number."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)


class RecognitionError(PCGError):
    """Input graph is not in the family a constructor expects."""


class NotThreshold(RecognitionError):
    pass


class NotSplitMatching(RecognitionError):
    pass


class NotSplitAntimatching(RecognitionError):
    pass


class UnsupportedComponent(PCGError):
    pass


class OrderViolation(PCGError):
    pass


class ConstructionError(PCGError):
    """A constructed witness failed its own round-trip check."""


class CapExceeded(PCGError):
    pass


class CaseSplitCapExceeded(CapExceeded):
    pass


class LabelMismatch(PCGError):
    pass


class UnsupportedCombination(PCGError):
    """Family/class pair with no construction (often a known negative result)."""
