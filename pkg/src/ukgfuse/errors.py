"""Exception types shared across the package."""


class UKGError(Exception):
    """Base class for every error raised by this package."""


class DomainMismatchError(UKGError):
    """Object value does not belong to the predicate's value domain."""


class InvariantViolationError(UKGError):
    """A structural invariant of the data model would be broken."""


class UnknownIdError(UKGError):
    """A referenced id (triple, source, node, predicate, ...) does not exist."""


class DuplicateNodeError(UKGError):
    """Node is already present in the taxonomy."""


class SecondRootError(UKGError):
    """Taxonomy already has a root node."""


class NotAnAncestorError(UKGError):
    """Ancestor distance requested between unrelated nodes."""


class CredibilityRangeError(UKGError):
    """A stated credibility lies outside [0, 1]."""


class NonTerminationError(UKGError):
    """Forward chaining failed to reach a fixpoint within the iteration guard."""


class IntegrityError(UKGError):
    """Referential integrity of a graph state or archive is broken."""


class ParseError(UKGError):
    """Input file could not be parsed."""


class VersionMismatchError(UKGError):
    """Archive format version is not supported."""


class VerdictNotActionableError(UKGError):
    """Feedback propagation requires a confirmed or infirmed verdict."""
