"""Exception types shared across the package."""


class JtoError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(JtoError, SyntaxError):
    """Malformed formula or file text."""

    def __init__(self, message: str, line: int = 1, column: int = 1, expected: frozenset[str] = frozenset()):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f"; expected one of: {', '.join(sorted(self.expected))}"
        super().__init__(detail)


class SortError(JtoError, ValueError):
    """A justification operator carries a term of the wrong sort."""


class BadInterval(JtoError, ValueError):
    pass


class TooManyAtoms(JtoError, ValueError):
    pass


class OutOfRange(JtoError, ValueError):
    pass


class PositionDependence(JtoError):
    """A state's truth value differs between two of its occurrences on the runs."""

    def __init__(self, state: str, formula):
        self.state = state
        self.formula = formula
        super().__init__(f"truth of {formula} differs across occurrences of state {state}")


class HorizonExceeded(JtoError, ValueError):
    pass


class UniverseTooSmall(JtoError, ValueError):
    pass


class BoundsTooLarge(JtoError, ValueError):
    pass


class NotUnsat(JtoError, ValueError):
    pass


class UnknownCase(JtoError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ModelFormatError(JtoError, ValueError):
    pass
