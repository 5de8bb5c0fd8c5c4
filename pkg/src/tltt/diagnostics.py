"""Machine-readable diagnostics with stable codes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from tltt.syntax import Span

UNBOUND_VARIABLE = "UnboundVariable"
SYNTAX_ERROR = "SyntaxError"
CONVERSION_FAILURE = "ConversionFailure"
UNIVERSE_ERROR = "UniverseError"
FIBRANCY_VIOLATION = "FibrancyViolation"
NON_FIBRANT_MOTIVE = "NonFibrantMotive"
NON_FIBRANT_EQUALITY_FORMATION = "NonFibrantEqualityFormation"
INFERENCE_FAILURE = "InferenceFailure"
DUPLICATE_NAME = "DuplicateName"

ALL_CODES = frozenset({
    UNBOUND_VARIABLE, SYNTAX_ERROR, CONVERSION_FAILURE, UNIVERSE_ERROR,
    FIBRANCY_VIOLATION, NON_FIBRANT_MOTIVE, NON_FIBRANT_EQUALITY_FORMATION,
    INFERENCE_FAILURE, DUPLICATE_NAME,
})


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    span: Optional[Span] = None
    severity: str = "error"
    expected: Optional[str] = None
    actual: Optional[str] = None

    def __str__(self) -> str:
        where = str(self.span) if self.span else "<unknown>"
        text = f"{where}: {self.severity}[{self.code}]: {self.message}"
        if self.expected is not None:
            text += f"\n  expected: {self.expected}"
        if self.actual is not None:
            text += f"\n  actual:   {self.actual}"
        return text


class CheckError(Exception):
    """Carrier for a Diagnostic raised during parsing or checking."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


def fail(code: str, message: str, span: Optional[Span] = None, *,
         expected: Optional[str] = None, actual: Optional[str] = None) -> "CheckError":
    return CheckError(Diagnostic(code, message, span,
                                 expected=expected, actual=actual))
