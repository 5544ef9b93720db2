"""Whitelist validation of LaTeX math and corrected-TeX output.

The grammar is realized as recursive descent with ordered choice and no
backtracking across brace groups, so every failure can point at the exact
offending token.  One successful parse yields the tree used both for
validation verdicts and for MathML generation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import intent as intent_mod
from .diagnostics import (
    E_AMBIGUOUS_INFIX,
    E_BAD_DELIM,
    E_BAD_ENV,
    E_DOUBLE_SCRIPT,
    E_EMPTY_ARG,
    E_TOO_DEEP,
    E_UNBALANCED_BRACE,
    E_UNKNOWN_COMMAND,
    ERROR,
    W_DEPRECATED,
    Diagnostic,
    IntentError,
    byte_offsets,
    warning,
)
from .nodes import (
    AstNode,
    Curly,
    Delimited,
    Fun1,
    Fun2,
    Infix,
    IntentWrap,
    Literal,
    Matrix,
    Sequence,
    Sub,
    SubSup,
    Sup,
    Text,
)
from .registry import CommandSpec, Registry

MAX_DEPTH = 128

# Single characters accepted as \left / \right delimiters without a backslash.
CHAR_DELIMS = frozenset("()[]|/.")

# Arity-0 commands with these translation functions act as infix operators.
INFIX_FNS = frozenset({"fraction", "binom", "atop"})

# Commands whose argument is raw text rather than math.
RAW_ARG_FNS = frozenset({"text", "operatorname"})

_LETTERS = re.compile(r"[A-Za-z]+")
_CMD_TAIL = re.compile(r"\\[A-Za-z]+$")


@dataclass(frozen=True)
class Token:
    kind: str  # cmd, char, lbrace, rbrace, sup, sub, amp, newrow, eof
    value: str
    start: int  # codepoint offsets into the source
    end: int


@dataclass(frozen=True)
class ParseResult:
    """Either an AST (root Sequence) or a non-empty error list; warnings ride along."""

    ast: Sequence | None
    errors: tuple[Diagnostic, ...]
    warnings: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.ast is not None

    @property
    def diagnostics(self) -> tuple[Diagnostic, ...]:
        return self.errors + self.warnings


class _Fail(Exception):
    def __init__(self, code: str, message: str, span: tuple[int, int],
                 ready: Diagnostic | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.span = span  # codepoint span unless `ready` is set
        self.ready = ready


def _collapse_arg(node: AstNode) -> AstNode:
    """Arguments written as {x}, {{x}}, ... are the same argument."""
    while isinstance(node, Curly) and len(node.children) == 1:
        node = node.children[0]
    return node


def tokenize(source: str) -> list[Token]:
    """Total tokenization: any input yields a token list ending in eof."""
    toks: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "\\":
            if i + 1 < n and source[i + 1] == "\\":
                toks.append(Token("newrow", "\\\\", i, i + 2))
                i += 2
                continue
            m = _LETTERS.match(source, i + 1)
            if m:
                toks.append(Token("cmd", m.group(0), i, m.end()))
                i = m.end()
            elif i + 1 < n:
                toks.append(Token("cmd", source[i + 1], i, i + 2))
                i += 2
            else:
                toks.append(Token("cmd", "", i, i + 1))
                i += 1
            continue
        kind = {
            "{": "lbrace", "}": "rbrace", "^": "sup", "_": "sub", "&": "amp",
        }.get(ch, "char")
        toks.append(Token(kind, ch, i, i + 1))
        i += 1
    toks.append(Token("eof", "", n, n))
    return toks


class _Parser:
    def __init__(self, source: str, registry: Registry, allow_chem: bool):
        self.source = source
        self.registry = registry
        self.allow_chem = allow_chem
        self.toks = tokenize(source)
        self.i = 0
        self.depth = 0
        self.warnings: list[Diagnostic] = []
        self.offsets = byte_offsets(source)

    # -- token plumbing ------------------------------------------------

    def peek(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def fail(self, code: str, message: str, tok: Token) -> None:
        span = (tok.start, max(tok.end, tok.start + 1))
        raise _Fail(code, message, span)

    def bspan(self, tok: Token) -> tuple[int, int]:
        end = max(tok.end, min(tok.start + 1, len(self.source)))
        if end <= tok.start:
            end = tok.start + 1
        return (self.offsets[tok.start], self.offsets[min(end, len(self.source))])

    def enter(self, tok: Token) -> None:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.fail(E_TOO_DEEP, f"nesting exceeds {MAX_DEPTH} levels", tok)

    def leave(self) -> None:
        self.depth -= 1

    # -- grammar -------------------------------------------------------

    def parse_formula(self) -> Sequence:
        items = self.sequence(stop=frozenset(), eof_ok=True)
        tok = self.peek()
        if tok.kind != "eof":  # pragma: no cover - sequence consumes to eof
            self.fail(E_UNBALANCED_BRACE, "unexpected trailing input", tok)
        return Sequence(tuple(items))

    def sequence(self, stop: frozenset[str], eof_ok: bool,
                 in_infix: bool = False) -> list[AstNode]:
        items: list[AstNode] = []
        while True:
            tok = self.peek()
            kind = tok.kind
            if kind == "cmd" and tok.value in ("right", "end"):
                kind = tok.value
            if kind == "eof":
                if eof_ok:
                    return items
                if "right" in stop:
                    self.fail(E_BAD_DELIM, "\\left without matching \\right", tok)
                if "end" in stop:
                    self.fail(E_BAD_ENV, "\\begin without matching \\end", tok)
                self.fail(E_UNBALANCED_BRACE, "missing closing brace", tok)
            if kind in ("rbrace", "amp", "newrow", "right", "end"):
                if kind in stop:
                    return items
                if kind == "rbrace":
                    if "right" in stop:
                        self.fail(E_BAD_DELIM, "missing \\right before closing brace", tok)
                    self.fail(E_UNBALANCED_BRACE, "unexpected closing brace", tok)
                if kind in ("amp", "newrow"):
                    self.fail(E_BAD_ENV, "alignment token outside environment", tok)
                if kind == "right":
                    self.fail(E_BAD_DELIM, "\\right without matching \\left", tok)
                self.fail(E_BAD_ENV, "\\end without matching \\begin", tok)
            if kind == "cmd":
                spec = self.registry.lookup(tok.value)
                if spec is not None and spec.arity == 0 and spec.translation_fn in INFIX_FNS:
                    if in_infix:
                        self.fail(E_AMBIGUOUS_INFIX,
                                  f"multiple infix commands in one group: \\{tok.value}", tok)
                    self.advance()
                    self.note_deprecated(spec, tok)
                    right = self.sequence(stop, eof_ok, in_infix=True)
                    return [Infix(tok.value, Sequence(tuple(items)), Sequence(tuple(right)))]
            items.append(self.item())

    def item(self) -> AstNode:
        node = self.atom()
        sub: AstNode | None = None
        sup: AstNode | None = None
        while True:
            tok = self.peek()
            if tok.kind == "sup":
                if sup is not None:
                    self.fail(E_DOUBLE_SCRIPT, "double superscript", tok)
                self.advance()
                sup = self.argument(tok, "superscript")
            elif tok.kind == "sub":
                if sub is not None:
                    self.fail(E_DOUBLE_SCRIPT, "double subscript", tok)
                self.advance()
                sub = self.argument(tok, "subscript")
            else:
                break
        if sub is not None and sup is not None:
            return SubSup(node, sub, sup)
        if sub is not None:
            return Sub(node, sub)
        if sup is not None:
            return Sup(node, sup)
        return node

    def atom(self) -> AstNode:
        tok = self.peek()
        if tok.kind == "lbrace":
            return self.group()
        if tok.kind == "char":
            return self.char_literal()
        if tok.kind == "cmd":
            return self.command()
        if tok.kind in ("sup", "sub"):
            self.fail(E_EMPTY_ARG, "script without a base", tok)
        self.fail(E_UNKNOWN_COMMAND, f"unexpected token {tok.value!r}", tok)
        raise AssertionError  # unreachable

    def group(self) -> Curly:
        open_tok = self.advance()
        self.enter(open_tok)
        items = self.sequence(stop=frozenset({"rbrace"}), eof_ok=False)
        self.advance()  # rbrace, guaranteed by sequence()
        self.leave()
        return Curly(tuple(items))

    def char_literal(self) -> Literal:
        tok = self.advance()
        ch = tok.value
        if ch.isascii() and (ch.isalpha() or ch.isdigit()):
            return Literal(ch)
        if self.registry.operator(ch) is not None:
            return Literal(ch)
        self.fail(E_UNKNOWN_COMMAND, f"character {ch!r} is not whitelisted", tok)
        raise AssertionError

    def note_deprecated(self, spec: CommandSpec, tok: Token) -> None:
        if spec.deprecated:
            self.warnings.append(
                warning(W_DEPRECATED, f"\\{spec.name} is deprecated", self.bspan(tok))
            )

    def command(self) -> AstNode:
        tok = self.advance()
        name = tok.value
        if name == "left":
            return self.delimited(tok)
        if name == "begin":
            return self.environment(tok)
        if name == "intent":
            return self.intent_macro(tok)
        spec = self.registry.lookup(name)
        if spec is None:
            self.fail(E_UNKNOWN_COMMAND, f"\\{name} is not a whitelisted command", tok)
        assert spec is not None
        if spec.category == "chem-only":
            if name in ("ce", "pu"):
                self.fail(E_UNKNOWN_COMMAND,
                          f"\\{name} requires chemistry preprocessing", tok)
            if not self.allow_chem:
                self.fail(E_UNKNOWN_COMMAND,
                          f"\\{name} is only available after chemistry preprocessing", tok)
        if spec.category == "environment":
            self.fail(E_BAD_ENV, f"{name} is an environment; use \\begin{{{name}}}", tok)
        self.note_deprecated(spec, tok)
        if spec.arity == 0:
            return Literal("\\" + name)
        if spec.translation_fn in RAW_ARG_FNS:
            content = self.raw_group(tok)
            return Fun1(name, Text(content))
        if spec.translation_fn == "radical" and self.peek().kind == "char" \
                and self.peek().value == "[":
            return self.radical_with_index(tok)
        args = [self.argument(tok, f"argument {k + 1} of \\{name}")
                for k in range(spec.arity)]
        if spec.arity == 1:
            return Fun1(name, args[0])
        if spec.arity == 2:
            return Fun2(name, args[0], args[1])
        self.fail(E_UNKNOWN_COMMAND, f"\\{name}: arity {spec.arity} unsupported", tok)
        raise AssertionError

    def argument(self, owner: Token, what: str) -> AstNode:
        tok = self.peek()
        if tok.kind == "lbrace":
            return _collapse_arg(self.group())
        if tok.kind == "char":
            return self.char_literal()
        if tok.kind == "cmd" and tok.value not in ("right", "end"):
            return self.command()
        self.fail(E_EMPTY_ARG, f"missing {what}", tok if tok.kind != "eof" else owner)
        raise AssertionError

    def radical_with_index(self, cmd_tok: Token) -> AstNode:
        self.advance()  # consume "["
        items: list[AstNode] = []
        while True:
            tok = self.peek()
            if tok.kind == "char" and tok.value == "]":
                self.advance()
                break
            if tok.kind == "eof":
                self.fail(E_EMPTY_ARG, "unterminated root index", cmd_tok)
            items.append(self.item())
        radicand = self.argument(cmd_tok, "argument of \\sqrt")
        if not items:
            return Fun1("sqrt", radicand)
        index = _collapse_arg(items[0]) if len(items) == 1 else Curly(tuple(items))
        return Fun2("root", index, radicand)

    def delimited(self, left_tok: Token) -> Delimited:
        self.enter(left_tok)
        open_tok = self.read_delimiter(left_tok)
        items = self.sequence(stop=frozenset({"right"}), eof_ok=False)
        right_tok = self.advance()  # the \right command
        close_tok = self.read_delimiter(right_tok)
        self.leave()
        return Delimited(open_tok, close_tok, Sequence(tuple(items)))

    def read_delimiter(self, owner: Token) -> str:
        tok = self.peek()
        if tok.kind == "char" and tok.value in CHAR_DELIMS:
            self.advance()
            return tok.value
        if tok.kind == "lbrace" or tok.kind == "rbrace":
            self.fail(E_BAD_DELIM, "braces must be escaped as delimiters (\\{, \\})", tok)
        if tok.kind == "cmd":
            spec = self.registry.lookup(tok.value)
            if spec is not None and spec.category == "delimiter":
                self.advance()
                return "\\" + tok.value
        self.fail(E_BAD_DELIM, f"{tok.value!r} is not a registered delimiter",
                  tok if tok.kind != "eof" else owner)
        raise AssertionError

    def environment(self, begin_tok: Token) -> Matrix:
        name = self.env_name(begin_tok)
        spec = self.registry.lookup(name)
        if spec is None or spec.category != "environment":
            self.fail(E_BAD_ENV, f"unknown environment {name!r}", begin_tok)
        if name == "array":
            self.maybe_column_spec()
        self.enter(begin_tok)
        rows: list[tuple[AstNode, ...]] = []
        row: list[AstNode] = []
        saw_newrow = False
        while True:
            items = self.sequence(stop=frozenset({"amp", "newrow", "end"}), eof_ok=False)
            cell: AstNode = items[0] if len(items) == 1 else Sequence(tuple(items))
            tok = self.advance()
            if tok.kind == "amp":
                row.append(cell)
                saw_newrow = False
                continue
            if tok.kind == "newrow":
                row.append(cell)
                rows.append(tuple(row))
                row = []
                saw_newrow = True
                continue
            # \end
            end_name = self.env_name(tok)
            if end_name != name:
                self.fail(E_BAD_ENV,
                          f"\\end{{{end_name}}} does not match \\begin{{{name}}}", tok)
            is_empty_cell = isinstance(cell, Sequence) and not cell.children
            if not (saw_newrow and not row and is_empty_cell):
                row.append(cell)
                rows.append(tuple(row))
            break
        self.leave()
        if not rows:
            rows = [(Sequence(()),)]
        return Matrix(name, tuple(rows))

    def env_name(self, owner: Token) -> str:
        tok = self.peek()
        if tok.kind != "lbrace":
            self.fail(E_BAD_ENV, "expected {environment-name}", tok if tok.kind != "eof" else owner)
        self.advance()
        letters: list[str] = []
        while True:
            tok = self.peek()
            if tok.kind == "rbrace":
                self.advance()
                break
            if tok.kind == "char" and tok.value.isascii() and (tok.value.isalpha()
                                                               or tok.value == "*"):
                letters.append(tok.value)
                self.advance()
                continue
            self.fail(E_BAD_ENV, "malformed environment name",
                      tok if tok.kind != "eof" else owner)
        return "".join(letters)

    def maybe_column_spec(self) -> None:
        # `\begin{array}{c|c}` — the alignment spec is accepted and discarded.
        tok = self.peek()
        if tok.kind != "lbrace":
            return
        j = self.i + 1
        while j < len(self.toks):
            t = self.toks[j]
            if t.kind == "rbrace":
                self.i = j + 1
                return
            if t.kind == "char" and t.value in "clr|":
                j += 1
                continue
            return  # not a column spec; leave it to be parsed as content

    def raw_group(self, owner: Token) -> str:
        """Scan a brace-balanced raw argument directly from the source."""
        tok = self.peek()
        if tok.kind == "char":
            self.advance()
            return tok.value
        if tok.kind != "lbrace":
            self.fail(E_EMPTY_ARG, f"missing argument of \\{owner.value}",
                      tok if tok.kind != "eof" else owner)
        start = tok.start
        pos = start
        depth = 0
        n = len(self.source)
        while pos < n:
            ch = self.source[pos]
            if ch == "\\":
                pos += 2
                continue
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    break
            pos += 1
        if pos >= n:
            self.fail(E_UNBALANCED_BRACE, "unterminated argument", tok)
        content = self.source[start + 1:pos]
        while self.peek().kind != "eof" and self.peek().start < pos:
            self.advance()
        self.advance()  # the closing brace token at `pos`
        return content

    def intent_macro(self, tok: Token) -> IntentWrap:
        body = self.argument(tok, "argument 1 of \\intent")
        spec_start_tok = self.peek()
        raw = self.raw_group(tok)
        base = self.offsets[min(spec_start_tok.start + 1, len(self.source))]
        try:
            intent_raw, arg_map = intent_mod.parse_macro_options(raw)
            intent_mod.parse_intent(intent_raw)
        except IntentError as exc:
            d = exc.diagnostic
            span = (base + d.span[0], base + d.span[1])
            raise _Fail(d.code, d.message, (0, 0),
                        ready=Diagnostic(ERROR, d.code, d.message, span)) from None
        return IntentWrap(body, intent_raw, arg_map)


def parse(source: str, registry: Registry, *, allow_chem: bool = False) -> ParseResult:
    """Validate `source` against the whitelist grammar and build the AST."""
    parser = _Parser(source, registry, allow_chem)
    try:
        ast = parser.parse_formula()
    except _Fail as exc:
        if exc.ready is not None:
            diag = exc.ready
        else:
            start, end = exc.span
            start = min(start, len(source))
            end = min(max(end, start + 1), len(source)) if len(source) else 0
            if end <= start:
                start, end = max(0, len(source) - 1), len(source)
            span = (parser.offsets[start], parser.offsets[end]) if source else (0, 1)
            diag = Diagnostic(ERROR, exc.code, exc.message, span)
        return ParseResult(None, (diag,), tuple(parser.warnings))
    except RecursionError:
        diag = Diagnostic(ERROR, E_TOO_DEEP, "input too deeply nested", (0, max(1, len(source.encode('utf-8')))))
        return ParseResult(None, (diag,), tuple(parser.warnings))
    return ParseResult(ast, (), tuple(parser.warnings))


def validate(source: str, registry: Registry, *, allow_chem: bool = False) -> list[Diagnostic]:
    """Parse minus AST retention: empty result means valid with no warnings."""
    result = parse(source, registry, allow_chem=allow_chem)
    return list(result.errors + result.warnings)


# -- corrected TeX ------------------------------------------------------


def render_tex(ast: AstNode) -> str:
    """Emit normalized TeX: canonical braces, canonical whitespace.

    The output re-parses to a structurally identical tree.
    """
    pieces: list[str] = []
    _emit(ast, pieces)
    out: list[str] = []
    for piece in pieces:
        if not piece:
            continue
        if out and piece[0].isalpha() and _CMD_TAIL.search(out[-1]):
            out.append(" ")
        out.append(piece)
    return "".join(out)


def _emit(node: AstNode, out: list[str]) -> None:
    if isinstance(node, Literal):
        out.append(node.token)
    elif isinstance(node, Text):
        out.append("{" + node.content + "}")
    elif isinstance(node, Fun1):
        out.append("\\" + node.command)
        _emit_braced(node.arg, out)
    elif isinstance(node, Fun2):
        out.append("\\" + node.command)
        _emit_braced(node.arg1, out)
        _emit_braced(node.arg2, out)
    elif isinstance(node, Curly):
        out.append("{")
        for child in node.children:
            _emit(child, out)
        out.append("}")
    elif isinstance(node, Sequence):
        for child in node.children:
            _emit(child, out)
    elif isinstance(node, Sub):
        _emit(node.base, out)
        out.append("_")
        _emit_braced(node.sub, out)
    elif isinstance(node, Sup):
        _emit(node.base, out)
        out.append("^")
        _emit_braced(node.sup, out)
    elif isinstance(node, SubSup):
        _emit(node.base, out)
        out.append("_")
        _emit_braced(node.sub, out)
        out.append("^")
        _emit_braced(node.sup, out)
    elif isinstance(node, Infix):
        _emit(node.left, out)
        out.append(" \\" + node.command + " ")
        _emit(node.right, out)
    elif isinstance(node, Matrix):
        out.append("\\begin{" + node.env + "}")
        for r, row in enumerate(node.rows):
            if r:
                out.append(" \\\\ ")
            for c, cell in enumerate(row):
                if c:
                    out.append(" & ")
                _emit(cell, out)
        out.append("\\end{" + node.env + "}")
    elif isinstance(node, Delimited):
        out.append("\\left" + node.open)
        _emit(node.body, out)
        out.append("\\right" + node.close)
    elif isinstance(node, IntentWrap):
        out.append("\\intent")
        _emit_braced(node.body, out)
        spec = "intent='" + node.intent_raw + "'"
        if node.arg_map:
            spec += ", arg='" + ",".join(f"{a}={b}" for a, b in node.arg_map) + "'"
        out.append("{" + spec + "}")
    else:  # pragma: no cover
        raise TypeError(f"unknown AST node {node!r}")


def _emit_braced(arg: AstNode, out: list[str]) -> None:
    if isinstance(arg, Text):
        out.append("{" + arg.content + "}")
        return
    out.append("{")
    if isinstance(arg, Curly):
        for child in arg.children:
            _emit(child, out)
    else:
        _emit(arg, out)
    out.append("}")
