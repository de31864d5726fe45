class PermPolyError(Exception):
    """Base class for every error raised by permpoly."""


class ParseError(PermPolyError):
    """Malformed coefficient list, linearized term list, field or instance file."""


class NotPrime(PermPolyError):
    pass


class Reducible(PermPolyError):
    pass


class SizeLimitExceeded(PermPolyError):
    pass


class MixedTowers(PermPolyError):
    pass


class DivisionByZero(PermPolyError, ZeroDivisionError):
    pass


class NotInSubfield(PermPolyError):
    pass


class NotInvertible(PermPolyError):
    pass


class ImageEscape(PermPolyError):
    """A map sent an element of its domain subset outside that subset."""


class InvalidInstance(PermPolyError):
    """Degenerate or inconsistent construction data (e.g. an empty sum)."""


class HypothesisError(PermPolyError):
    """
    A construction's hypotheses do not hold.

    The message names the failing clause. The CLI maps every subclass to exit 65.
    """


class HypothesisViolation(HypothesisError):
    pass


class IndexOutOfRange(HypothesisError):
    pass


class GcdViolation(HypothesisError):
    pass


class ZeroAlpha(HypothesisError):
    pass


class NotPermutationL1(HypothesisError):
    pass


class NotPermutationL(HypothesisError):
    pass


class NotSurjectiveF(HypothesisError):
    pass


class NotTranslator(HypothesisError):
    pass


class InternalError(PermPolyError):
    """Two independent computations of the same quantity disagreed. The CLI maps it to exit 70."""
