"""Exception hierarchy shared by every module."""


class TritError(Exception):
    """Base class for all errors raised by tritassert."""


class InputError(TritError, ValueError):
    """Bad argument: index out of range, malformed circuit, unknown label."""


class NumericalError(TritError, ArithmeticError):
    """The state vector has degenerated (zero norm, NaN/Inf amplitudes)."""


class ResourceError(TritError):
    """The requested operation would exceed the desk-scale size limits."""


class ParseError(InputError):
    """A syntax or validation error in circuit source text.

    ``line`` is 1-based; ``column`` is 1-based and points at the offending
    token (1 when the whole line is at fault).
    """

    def __init__(self, message: str, line: int, column: int = 1, expected: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected
        text = f"line {line}, column {column}: {message}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)
