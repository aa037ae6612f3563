"""Exception hierarchy shared by all modules."""


class BKSError(Exception):
    """Base class for every error raised by bksbench."""


class ZeroVector(BKSError, ValueError):
    pass


class DimensionMismatch(BKSError, ValueError):
    pass


class UnknownRayId(BKSError, KeyError):
    pass


class TooManyRays(BKSError, ValueError):
    pass


class UnknownKey(BKSError, KeyError):
    pass


class ImpossiblePostselection(BKSError, ValueError):
    """Pre- and postselected states are orthogonal."""


class NotFactorizable(BKSError, ValueError):
    pass


class ConditionHasZeroProbability(BKSError, ZeroDivisionError):
    pass


class ParseError(BKSError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateRay(ParseError):
    def __init__(self, first_line: int, second_line: int, ray):
        self.first_line = first_line
        self.second_line = second_line
        super().__init__(
            f"ray {ray} duplicates line {first_line}", line=second_line
        )


class MixedDimension(ParseError):
    pass
