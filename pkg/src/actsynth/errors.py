"""Exception hierarchy shared by the whole package."""

from __future__ import annotations


class ActSynthError(Exception):
    """Base class for every error raised by actsynth."""


class UnknownType(ActSynthError):
    pass


class NotApplicable(ActSynthError):
    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class UnknownAction(ActSynthError):
    pass


class ParseError(ActSynthError):
    """Malformed input text. Carries a 1-based line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class UnsupportedFeature(ParseError):
    pass


class UnknownPredicate(ParseError):
    pass


class UnknownObject(ParseError):
    pass


class ArityMismatch(ParseError):
    pass


class InconsistentDelta(ParseError):
    pass


class UnregisteredVar(ActSynthError):
    pass


class NoCandidateObjects(ActSynthError):
    pass


class TimeLimit(ActSynthError):
    pass


class ParamBudgetExceeded(ActSynthError):
    def __init__(self, label: str, max_k: int):
        super().__init__(f"action {label!r}: no explanation with up to {max_k} parameters")
        self.label = label
        self.max_k = max_k

    def __reduce__(self):
        return (type(self), (self.label, self.max_k))


class NodeCountMismatch(ActSynthError):
    pass


class IsolatedVertexPresent(ActSynthError):
    pass


class TooLarge(ActSynthError):
    pass
