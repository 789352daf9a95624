"""Exception hierarchy shared across the toolkit.

Every error raised by the public API derives from :class:`BddlError` so
callers can catch one type at the boundary.  The CLI maps the families
onto distinct exit codes.
"""

from __future__ import annotations


class BddlError(Exception):
    """Base class for all toolkit errors."""


class BddlParseError(BddlError):
    """Lexical, syntactic, or semantic error in a BDDL source text.

    Carries the 1-based line and column of the offending token when the
    location is known.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        self.bare_message = message
        if line is not None:
            where = f"line {line}" if column is None else f"line {line}, column {column}"
            message = f"{where}: {message}"
        super().__init__(message)


class TaxonomyError(BddlError):
    """Malformed taxonomy file: unknown parent, cycle, bad schema."""


class WorldError(BddlError):
    """Invalid world-state operation: unknown object, malformed scene."""


class InapplicablePredicateError(WorldError):
    """A predicate was evaluated on a category that lacks the required property.

    Deliberately distinct from the predicate simply being false.
    """


class PrimitiveFailure(WorldError):
    """A motor primitive's precondition was not met.

    ``code`` is a short stable identifier (e.g. ``hand-occupied``,
    ``out-of-reach``) suitable for tests and machine consumers.  The
    input state is never modified by a failed primitive.
    """

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"{code}: {message}")


class InstantiationError(BddlError):
    """An activity definition could not be realised in a scene."""


class FeasibilityError(BddlError):
    """Raised by operations that require at least one consistent goal option."""


class LogError(BddlError):
    """Malformed trajectory log.  Names the offending record where possible."""


class ScoringError(BddlError):
    """Scoring-time failure: empty options, missing baselines, or bad metrics."""
