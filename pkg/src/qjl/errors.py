"""Exception hierarchy shared by every qjl module."""


class QJLError(Exception):
    """Base class for all library errors."""


class WeightError(QJLError):
    pass


class NotUnitError(QJLError):
    pass


class SqrtError(QJLError):
    pass


class DomainError(QJLError):
    pass


class ShiftError(QJLError):
    pass


class PoleError(QJLError):
    pass


class PrecisionError(QJLError):
    """Truncation order too small for the requested result; raise N."""


class OffsetError(QJLError):
    """q-offsets of two operands do not differ by an integer."""


class NotInAlgebraError(QJLError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ModelError(QJLError):
    pass


class DegenerateDivisorError(QJLError):
    pass


class NormalizationError(QJLError):
    pass


class RangeError(QJLError):
    pass


class FitError(QJLError):
    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class ExprSyntaxError(QJLError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column
