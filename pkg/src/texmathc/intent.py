"""Accessibility intent expressions: grammar validation and MathML injection.

The expression language is small: concepts, numbers, ``$name`` references,
``:kind`` structure markers, and applications with an optional ``@hint``.
Annotated formulas carry the raw expression through to the output's
``intent`` attribute unchanged; references additionally pin ``arg``
attributes onto the identifier tokens they name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .diagnostics import (
    E_INTENT_AMBIGUOUS_REF,
    E_INTENT_SYNTAX,
    E_INTENT_UNBOUND_REF,
    ERROR,
    Diagnostic,
    IntentError,
    byte_offsets,
)
from .mathml import MathMLNode

HINTS = frozenset({
    "prefix", "infix", "postfix", "function", "silent",
    "decimal-comma", "thousands-comma",
})
STRUCTURE_KINDS = frozenset({"common", "structure", "chemistry", "matrix"})

# Pragmatic ASCII subset of the XML NCName production: no colon, no leading
# digit; hyphen, dot, and underscore allowed after the first character.
_NCNAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*")
_DIGITS = re.compile(r"[0-9]+")

IntentExpr = Union["Concept", "Number", "Reference", "Structure", "Application"]


@dataclass(frozen=True)
class Concept:
    name: str


@dataclass(frozen=True)
class Number:
    value: str
    negative: bool


@dataclass(frozen=True)
class Reference:
    name: str


@dataclass(frozen=True)
class Structure:
    kind: str


@dataclass(frozen=True)
class Application:
    head: IntentExpr
    hint: str | None
    args: tuple[IntentExpr, ...]


def references(expr: IntentExpr) -> list[str]:
    """Reference names in document order, de-duplicated."""
    seen: list[str] = []

    def visit(node: IntentExpr) -> None:
        if isinstance(node, Reference):
            if node.name not in seen:
                seen.append(node.name)
        elif isinstance(node, Application):
            visit(node.head)
            for arg in node.args:
                visit(arg)

    visit(expr)
    return seen


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.offsets = byte_offsets(text)

    def fail(self, message: str, start: int | None = None) -> None:
        at = self.pos if start is None else start
        end = min(max(at + 1, self.pos), len(self.text))
        at = min(at, max(0, len(self.text) - 1)) if self.text else 0
        span = (self.offsets[at], self.offsets[end]) if self.text else (0, 1)
        raise IntentError(Diagnostic(ERROR, E_INTENT_SYNTAX, message, span))

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def ncname(self, what: str) -> str:
        m = _NCNAME.match(self.text, self.pos)
        if not m:
            self.fail(f"expected {what}")
        assert m is not None
        self.pos = m.end()
        return m.group(0)


def parse_intent(text: str) -> IntentExpr:
    """Parse a full intent expression; the whole input must match."""
    scanner = _Scanner(text)
    scanner.skip_ws()
    expr = _parse_intent(scanner)
    scanner.skip_ws()
    if scanner.pos != len(text):
        scanner.fail("trailing input after intent expression")
    return expr


def _parse_intent(s: _Scanner) -> IntentExpr:
    expr = _parse_primary(s)
    # application := intent hint? '(' arguments? ')'   (may chain: f(x)(y))
    while True:
        s.skip_ws()
        hint: str | None = None
        if s.peek() == "@":
            s.pos += 1
            start = s.pos
            name = s.ncname("hint name")
            if name not in HINTS:
                s.fail(f"unknown hint {name!r}", start - 1)
            hint = name
            s.skip_ws()
            if s.peek() != "(":
                s.fail("hint must be followed by an argument list")
        if s.peek() != "(":
            return expr
        s.pos += 1
        args: list[IntentExpr] = []
        s.skip_ws()
        if s.peek() != ")":
            while True:
                args.append(_parse_intent(s))
                s.skip_ws()
                if s.take(","):
                    s.skip_ws()
                    continue
                break
        if not s.take(")"):
            s.fail("expected ')'")
        expr = Application(expr, hint, tuple(args))


def _parse_primary(s: _Scanner) -> IntentExpr:
    ch = s.peek()
    if ch == "$":
        s.pos += 1
        return Reference(s.ncname("reference name after '$'"))
    if ch == ":":
        s.pos += 1
        start = s.pos
        name = s.ncname("structure kind after ':'")
        if name not in STRUCTURE_KINDS:
            s.fail(f"unknown structure kind {name!r}", start - 1)
        return Structure(name)
    if ch == "-" or ch.isdigit():
        return _parse_number(s)
    if _NCNAME.match(s.text, s.pos):
        return Concept(s.ncname("concept"))
    s.fail("expected an intent expression")
    raise AssertionError


def _parse_number(s: _Scanner) -> Number:
    negative = s.take("-")
    m = _DIGITS.match(s.text, s.pos)
    if not m:
        s.fail("expected digits")
    assert m is not None
    s.pos = m.end()
    value = m.group(0)
    if s.peek() == ".":
        s.pos += 1
        frac = _DIGITS.match(s.text, s.pos)
        if not frac:
            s.fail("expected digits after '.'")
        assert frac is not None
        s.pos = frac.end()
        value += "." + frac.group(0)
    return Number(value, negative)


# -- the \intent macro's option block -----------------------------------


def parse_macro_options(raw: str) -> tuple[str, tuple[tuple[str, str], ...]]:
    """Parse ``intent='...'[, arg='a=x,b=y']`` from the macro's second argument.

    ``\\$`` inside the quoted value is normalized to ``$`` (both spellings
    appear in the wild).
    """
    scanner = _Scanner(raw)
    intent_value: str | None = None
    arg_value: str | None = None
    scanner.skip_ws()
    while scanner.pos < len(raw):
        key_start = scanner.pos
        key = scanner.ncname("option name")
        if key not in ("intent", "arg"):
            scanner.fail(f"unknown option {key!r}", key_start)
        scanner.skip_ws()
        if not scanner.take("="):
            scanner.fail("expected '=' after option name")
        scanner.skip_ws()
        value = _quoted(scanner)
        if key == "intent":
            if intent_value is not None:
                scanner.fail("duplicate intent option", key_start)
            intent_value = value
        else:
            if arg_value is not None:
                scanner.fail("duplicate arg option", key_start)
            arg_value = value
        scanner.skip_ws()
        if scanner.take(","):
            scanner.skip_ws()
            continue
        break
    if scanner.pos != len(raw):
        scanner.fail("trailing input in intent options")
    if intent_value is None:
        scanner.fail("missing intent='...' option", 0)
    assert intent_value is not None
    return intent_value, _parse_arg_binding(arg_value or "")


def _quoted(s: _Scanner) -> str:
    if not s.take("'"):
        s.fail("expected single-quoted value")
    chars: list[str] = []
    while True:
        ch = s.peek()
        if ch == "":
            s.fail("unterminated quoted value")
        if ch == "'":
            s.pos += 1
            return "".join(chars)
        if ch == "\\" and s.pos + 1 < len(s.text) and s.text[s.pos + 1] == "$":
            chars.append("$")
            s.pos += 2
            continue
        chars.append(ch)
        s.pos += 1


def _parse_arg_binding(text: str) -> tuple[tuple[str, str], ...]:
    if not text.strip():
        return ()
    scanner = _Scanner(text)
    pairs: list[tuple[str, str]] = []
    seen: set[str] = set()
    scanner.skip_ws()
    while True:
        formula = scanner.ncname("formula identifier")
        if formula in seen:
            scanner.fail(f"duplicate formula identifier {formula!r}")
        seen.add(formula)
        scanner.skip_ws()
        if not scanner.take("="):
            scanner.fail("expected '=' in arg binding")
        scanner.skip_ws()
        intent_name = scanner.ncname("intent identifier")
        pairs.append((formula, intent_name))
        scanner.skip_ws()
        if scanner.take(","):
            scanner.skip_ws()
            continue
        break
    if scanner.pos != len(text):
        scanner.fail("trailing input in arg binding")
    return tuple(pairs)


# -- attribute injection --------------------------------------------------


_REF_TARGET_ELEMENTS = ("mi", "mn")


def apply_intent(node, subtree: MathMLNode,
                 binding: tuple[tuple[str, str], ...] = ()) -> MathMLNode:
    """Attach ``intent``/``arg`` attributes to a generated MathML subtree.

    `node` is the annotation macro's AST node, or just its raw intent text.
    The raw expression lands on the subtree root verbatim (token roots get
    an mrow to host it).  Every ``$name`` reference must resolve to exactly
    one identifier token, by text, left-to-right depth-first; the binding
    maps formula identifiers to intent identifiers when they differ.
    """
    if isinstance(node, str):
        intent_raw = node
    else:  # an IntentWrap AST node
        intent_raw = node.intent_raw
        binding = binding or node.arg_map
    expr = parse_intent(intent_raw)
    root = subtree
    if root.is_token():
        root = MathMLNode("mrow", {}, [subtree])
    root.attributes["intent"] = intent_raw

    by_intent_name: dict[str, list[str]] = {}
    for formula_ident, intent_ident in binding:
        by_intent_name.setdefault(intent_ident, []).append(formula_ident)

    raw_span = (0, len(intent_raw.encode("utf-8")) or 1)
    for name in references(expr):
        targets = by_intent_name.get(name, [name])
        matches = [
            node for node in root.iter()
            if node.element in _REF_TARGET_ELEMENTS and node.text in targets
        ]
        if not matches:
            raise IntentError(Diagnostic(
                ERROR, E_INTENT_UNBOUND_REF,
                f"intent reference ${name} matches no identifier in the formula",
                raw_span))
        if len(matches) > 1:
            raise IntentError(Diagnostic(
                ERROR, E_INTENT_AMBIGUOUS_REF,
                f"intent reference ${name} matches {len(matches)} identifiers",
                raw_span))
        matches[0].attributes["arg"] = name
    return root
