"""Exception hierarchy shared by every confmat module."""


class ConfmatError(Exception):
    """Base class; the CLI maps it to exit code 2."""


class FieldMismatch(ConfmatError):
    pass


class DivisionByZero(ConfmatError, ZeroDivisionError):
    pass


class ZeroInput(ConfmatError):
    pass


class NotSquare(ConfmatError):
    pass


class VarSetMismatch(ConfmatError):
    pass


class UnknownLabel(ConfmatError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class MissingAssignment(ConfmatError):
    pass


class ParseError(ConfmatError, ValueError):
    pass


class ResourceLimit(ConfmatError):
    """A Groebner computation exceeded its pair-reduction budget (exit code 3)."""


class ExactDivisionFailure(ConfmatError):
    pass


class TooLarge(ConfmatError):
    pass


class Disconnected(ConfmatError):
    pass


class InternalInvariantViolation(ConfmatError, AssertionError):
    pass


class NotABasis(ConfmatError):
    pass


class NotAHandle(ConfmatError):
    pass


class NotA2Separation(ConfmatError):
    pass


class NotMultilinear(ConfmatError):
    pass


class ZeroCovector(ConfmatError):
    pass


class LabelCollision(ConfmatError):
    pass


class BadParameter(ConfmatError, ValueError):
    pass


class GenericityFailure(ConfmatError):
    pass


class InvalidMomentum(ConfmatError):
    pass


class EmptyBases(ConfmatError):
    pass


class NotAWheelRealization(ConfmatError):
    pass
