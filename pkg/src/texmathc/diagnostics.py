"""Validation findings and the error codes shared across the pipeline."""

from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"

# Stable machine identifiers. Tools match on these, not on message text.
E_UNKNOWN_COMMAND = "E_UNKNOWN_COMMAND"
E_UNBALANCED_BRACE = "E_UNBALANCED_BRACE"
E_BAD_DELIM = "E_BAD_DELIM"
E_BAD_ENV = "E_BAD_ENV"
E_EMPTY_ARG = "E_EMPTY_ARG"
E_DOUBLE_SCRIPT = "E_DOUBLE_SCRIPT"
E_AMBIGUOUS_INFIX = "E_AMBIGUOUS_INFIX"
E_TOO_DEEP = "E_TOO_DEEP"
E_CHEM_SYNTAX = "E_CHEM_SYNTAX"
E_INTENT_SYNTAX = "E_INTENT_SYNTAX"
E_INTENT_UNBOUND_REF = "E_INTENT_UNBOUND_REF"
E_INTENT_AMBIGUOUS_REF = "E_INTENT_AMBIGUOUS_REF"
W_DEPRECATED = "W_DEPRECATED"

ALL_CODES = frozenset(
    name for name, value in list(globals().items())
    if isinstance(value, str) and (name.startswith("E_") or name.startswith("W_"))
)


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding, located by byte span in the source formula."""

    severity: str  # ERROR or WARNING
    code: str
    message: str
    span: tuple[int, int]  # byte offsets, start inclusive, end exclusive

    def __post_init__(self) -> None:
        if self.severity not in (ERROR, WARNING):
            raise ValueError(f"bad severity {self.severity!r}")
        if self.span[0] > self.span[1] or self.span[0] < 0:
            raise ValueError(f"bad span {self.span!r}")

    def format_line(self) -> str:
        start, end = self.span
        return f"{self.severity}:{self.code}:{start}-{end}:{self.message}"

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
            "span": [self.span[0], self.span[1]],
        }


def error(code: str, message: str, span: tuple[int, int]) -> Diagnostic:
    return Diagnostic(ERROR, code, message, span)


def warning(code: str, message: str, span: tuple[int, int]) -> Diagnostic:
    return Diagnostic(WARNING, code, message, span)


class DiagnosticError(Exception):
    """Raised by the single-finding stages (mhchem, intent) instead of a list."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.format_line())
        self.diagnostic = diagnostic


class ChemError(DiagnosticError):
    pass


class IntentError(DiagnosticError):
    pass


def byte_offsets(text: str) -> list[int]:
    """Map each codepoint index of `text` (plus the end) to its UTF-8 byte offset.

    Diagnostic spans are byte-based so they stay meaningful to non-Python
    consumers of the CLI output.
    """
    offsets = [0]
    total = 0
    for ch in text:
        total += len(ch.encode("utf-8"))
        offsets.append(total)
    return offsets
