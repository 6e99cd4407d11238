"""Exception hierarchy for coarsequot.

Library code raises these; only the experiment layer turns them into console errors and
exit codes.
"""


class CoarsequotError(Exception):
    """Base class for all coarsequot errors."""


class UnknownVertexError(CoarsequotError, IndexError):
    """A vertex id lies outside the graph."""


class InvalidGraphError(CoarsequotError, ValueError):
    """A graph violates the simple, connected, unit-edge invariants."""


class InvalidPathError(CoarsequotError, ValueError):
    """Consecutive vertices of a path are not adjacent."""


class EmptySubspaceError(CoarsequotError, ValueError):
    """A subspace has no members."""


class BudgetExceededError(CoarsequotError):
    """A configured enumeration cap was exceeded."""


class FamilyTooSmallError(CoarsequotError, ValueError):
    """A family has fewer than two members or repeats a member."""


class NegativeInputError(CoarsequotError, ValueError):
    """A base constant is negative."""


class InsufficientSamplesError(CoarsequotError, ValueError):
    """Too few samples or trials were requested."""


class MissingRhoError(CoarsequotError, KeyError):
    """A relative projection required by a construction is undefined."""


class DanglingConeVertexError(CoarsequotError, ValueError):
    """A path ends at a cone vertex."""


class SelfProjectionError(CoarsequotError, ValueError):
    """A subspace was asked to project its own cone vertex."""


class PreconditionBrokenError(CoarsequotError, ValueError):
    """A stated precondition on the constants does not hold."""


class NotCoboundedlyCoveredError(CoarsequotError, ValueError):
    """Some vertex has no nearest subspace within R."""


class NotSmallCancellationError(CoarsequotError, ValueError):
    """Dehn reduction was requested for a presentation that is not C'(1/6)."""


class ElementaryMeasureError(CoarsequotError, ValueError):
    """The support of a measure generates a cyclic subgroup."""


class InvalidMeasureError(CoarsequotError, ValueError):
    """Probabilities are not positive or do not sum to one."""


class TranslationTooSmallError(CoarsequotError, ValueError):
    """An element translates too little for a quasi-axis."""


class SearchExhaustedError(CoarsequotError):
    """No shortening pair was found inside the family."""


class NotThroughConeError(CoarsequotError, ValueError):
    """A path does not pass through the cone vertex in its interior."""


class OracleMismatchError(CoarsequotError):
    """Orbit saturation disagrees with the word-problem oracle."""


class NotApplicableError(CoarsequotError, ValueError):
    """A check's hypothesis does not hold for the given input."""


class RelationConflictError(CoarsequotError):
    """Two minimal pairs assign different relations to one pair of classes."""


class ConfigError(CoarsequotError, ValueError):
    """An experiment configuration is invalid."""


class ParseError(CoarsequotError, ValueError):
    """An input file could not be parsed.

    Attributes:
        line: 1-based line number of the offending line, if known.
    """

    def __init__(self, message: str, line: int | None = None) -> None:
        """Initialize the error with an optional line number."""
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StageError(CoarsequotError):
    """Wraps an error raised inside a named pipeline stage.

    Attributes:
        stage: Name of the stage that failed.
        cause: The original error.
    """

    def __init__(self, stage: str, cause: Exception) -> None:
        """Initialize the error with the failing stage and its cause."""
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")
