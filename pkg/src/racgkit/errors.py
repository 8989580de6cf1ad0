"""Exception hierarchy shared by all modules.

The CLI maps :class:`PreconditionError` to exit code 2 and
:class:`LemmaViolation` to exit code 3.
"""


class RacgError(Exception):
    """Base class for every error raised by racgkit."""


class PreconditionError(RacgError, ValueError):
    """An input does not satisfy an operation's precondition."""


class NotFlagError(PreconditionError):
    pass


class NotSphereError(PreconditionError):
    pass


class NotPureError(PreconditionError):
    """The complex is not pure, so codimension-based tests are undefined."""


class NotConvexError(PreconditionError):
    """A union of chambers is not convex; ``witness`` is a violated wall."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ResourceLimitError(RacgError):
    """A construction would exceed a configured size guard."""


class LemmaViolation(RacgError):
    """A combinatorial fact that the theory guarantees failed to hold.

    Seeing this means either the input violated an unchecked assumption
    or there is a bug; it must never fire on valid input.
    """


class ParseError(RacgError, ValueError):
    """Malformed JSON complex, word or expression."""
