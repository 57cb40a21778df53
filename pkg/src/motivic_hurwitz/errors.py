"""Exception hierarchy shared by every module.

Each error name is part of the public contract: the CLI prints the class
name on stderr when a computation fails.
"""


class MotivicError(Exception):
    """Base class for all library errors."""


class NotInvertible(MotivicError):
    pass


class PoleAtQ(MotivicError):
    pass


class Divergent(MotivicError):
    pass


class InsufficientOrder(MotivicError):
    pass


class MarginViolated(MotivicError):
    pass


class NegativeCoefficient(MotivicError):
    pass


class DegreeMismatch(MotivicError):
    pass


class WedgeRankExceeded(MotivicError):
    pass


class ConstraintViolation(MotivicError):
    pass


class OutOfRange(MotivicError):
    pass


class Mismatch(MotivicError):
    pass


class Unsupported(MotivicError):
    pass


class TooLarge(MotivicError):
    pass


class BadCharacteristic(MotivicError):
    pass
