"""Exception hierarchy; every error carries a short machine-readable code."""


class MotzetaError(Exception):
    code = "error"


class PoleAtQ(MotzetaError):
    code = "PoleAtQ"


class NotInvertible(MotzetaError):
    code = "NotInvertible"


class NonvanishingPolyPart(MotzetaError):
    code = "NonvanishingPolyPart"


class UnsupportedShape(MotzetaError):
    code = "UnsupportedShape"


class Inconsistent(MotzetaError):
    code = "Inconsistent"


class Underdetermined(MotzetaError):
    code = "Underdetermined"


class Unbounded(MotzetaError):
    code = "Unbounded"


class InfiniteGrading(MotzetaError):
    code = "InfiniteGrading"


class DimensionTooLarge(MotzetaError):
    code = "DimensionTooLarge"


class OverlappingPieces(MotzetaError):
    code = "OverlappingPieces"


class BudgetExceeded(MotzetaError):
    code = "BudgetExceeded"


class WeightCheckFailed(MotzetaError):
    code = "WeightCheckFailed"


class ParseError(MotzetaError):
    code = "ParseError"

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: " if column is not None else f"line {line}: "
        super().__init__(where + message)


class ValidationError(MotzetaError):
    code = "ValidationError"

    def __init__(self, message, task=None, field=None):
        self.message = message
        self.task = task
        self.field = field
        where = ""
        if task is not None:
            where = f"task {task!r}" + (f", field {field!r}" if field else "") + ": "
        super().__init__(where + message)
