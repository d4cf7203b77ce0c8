"""Exception hierarchy shared by all ordercraft modules.

Every exception carries an ``exit_code`` so the command line front end can map
failures onto stable process exit statuses without a lookup table.
"""


class OrdercraftError(Exception):
    exit_code = 1


class ParseError(OrdercraftError, ValueError):
    exit_code = 2


class InvariantViolation(OrdercraftError):
    """A structure failed one of the laws it is supposed to satisfy."""

    exit_code = 3


class CycleDetected(InvariantViolation, ValueError):
    pass


class SizeLimitExceeded(OrdercraftError):
    exit_code = 4


class PreconditionError(OrdercraftError, ValueError):
    """Arguments are well formed but violate an operation's precondition."""

    exit_code = 6


class UnknownElement(PreconditionError, LookupError):
    pass


class MissingPart(PreconditionError):
    pass


class BaseMismatch(PreconditionError):
    pass


class NotMinimal(PreconditionError):
    pass


class NotAntichain(PreconditionError):
    pass


class LengthExceeded(PreconditionError):
    pass


class FamilyMismatch(PreconditionError):
    pass


class IndexNotLinear(PreconditionError):
    pass


class InvalidBarrier(PreconditionError):
    pass


class EmptyLeftOperand(PreconditionError):
    pass


class RankTooLarge(PreconditionError):
    pass


class NotASquareBlock(PreconditionError):
    pass


class NotSeparated(PreconditionError):
    pass


class DimensionMismatch(PreconditionError):
    pass


class SearchExhausted(OrdercraftError):
    """A bounded search ran out of room before producing an answer."""

    exit_code = 7


class BlocksMissing(SearchExhausted):
    pass


class BaseExhausted(SearchExhausted):
    pass


class BaseTooSmall(SearchExhausted):
    pass


class IterationCapExceeded(SearchExhausted):
    pass
