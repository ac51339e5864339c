"""Exception types shared across modules; the CLI maps them to exit codes."""

from .geometry import GeneralPositionError  # noqa: F401  (re-export)


class ParseError(ValueError):
    """Malformed input file or argument."""


class PreconditionError(ValueError):
    """An operation's stated precondition does not hold for this input."""


class InstanceTooLargeError(PreconditionError):
    pass


class ResampleLimitError(RuntimeError):
    """The point generator kept producing degenerate sets (grid too coarse)."""


class QuadratureError(RuntimeError):
    pass


class InternalCheckError(AssertionError):
    """A postcondition that a proof guarantees did not hold.

    Always a bug, or an input worth archiving as a counterexample.
    """


class CertificationError(InternalCheckError):
    pass


class SubadditivityError(InternalCheckError):
    pass


class OrderLemmaError(InternalCheckError):
    pass
