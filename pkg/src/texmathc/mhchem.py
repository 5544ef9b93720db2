"""Chemistry preprocessing: rewrites ``\\ce{...}`` and ``\\pu{...}`` to plain math.

This is a pure string rewriter that runs before validation.  The implemented
subset covers elements, numeric subscripts, charges, stoichiometric
coefficients (integer, decimal, and a/b fractions), isotope prescripts,
aggregate states, single/double/triple bonds, reaction arrows, ``+``
separators, hydrate dots (``*``), and the number-unit forms of ``\\pu``.
Everything outside the subset is rejected with a positioned diagnostic
rather than guessed at.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagnostics import (
    E_CHEM_SYNTAX,
    E_UNBALANCED_BRACE,
    ERROR,
    ChemError,
    Diagnostic,
    byte_offsets,
)

_ELEMENT = re.compile(r"[A-Z][a-z]?")
_DIGITS = re.compile(r"[0-9]+")
_NUMBER = re.compile(r"[0-9]+(?:\.[0-9]+)?")
_PU_NUMBER = re.compile(r"-?[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?")
_UNIT_ATOM = re.compile(r"[A-Za-z]+[0-9]*")

ARROWS = (
    ("<=>", "\\longrightleftharpoons"),
    ("<->", "\\longleftrightarrow"),
    ("->", "\\longrightarrow"),
    ("<-", "\\longleftarrow"),
)
STATES = ("aq", "s", "l", "g")


@dataclass(frozen=True)
class ChemToken:
    kind: str  # element, count, charge, arrow, plus, state, bond, stoich_coeff, isotope, text
    payload: str


def _err(message: str, offsets: list[int], start: int, end: int) -> ChemError:
    end = max(end, start + 1)
    b = (offsets[min(start, len(offsets) - 1)], offsets[min(end, len(offsets) - 1)])
    if b[1] <= b[0]:
        b = (b[0], b[0] + 1)
    return ChemError(Diagnostic(ERROR, E_CHEM_SYNTAX, message, b))


def preprocess(source: str) -> str:
    """Expand every chemistry environment; all other bytes pass through untouched."""
    out: list[str] = []
    offsets = byte_offsets(source)
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        m = re.match(r"\\([a-zA-Z]+)", source[i:])
        name = m.group(1) if m else ""
        if name not in ("ce", "pu"):
            out.append(source[i:i + (m.end() if m else 2)])
            i += (m.end() if m else min(2, n - i))
            continue
        j = i + 1 + len(name)
        while j < n and source[j].isspace():
            j += 1
        if j >= n or source[j] != "{":
            raise _err(f"\\{name} requires a braced argument", offsets, i, j)
        body_start = j + 1
        depth = 0
        k = j
        while k < n:
            c = source[k]
            if c == "\\":
                k += 2
                continue
            if c == "{":
                depth += 1
            elif c == "}":
                depth -= 1
                if depth == 0:
                    break
            k += 1
        if k >= n:
            raise ChemError(Diagnostic(
                ERROR, E_UNBALANCED_BRACE, f"unterminated \\{name} argument",
                (offsets[i], offsets[n])))
        body = source[body_start:k]
        try:
            expansion = expand_ce(body) if name == "ce" else expand_pu(body)
        except ChemError as exc:
            d = exc.diagnostic
            base = offsets[body_start]
            raise ChemError(Diagnostic(
                ERROR, d.code, d.message, (base + d.span[0], base + d.span[1]))) from None
        out.append(expansion)
        i = k + 1
    return "".join(out)


# -- \ce ------------------------------------------------------------------


def tokenize_ce(body: str) -> list[ChemToken]:
    """Scan a ``\\ce`` body into chemistry tokens, enforcing the subset."""
    offsets = byte_offsets(body)
    toks: list[ChemToken] = []
    i = 0
    n = len(body)
    # Kinds after which a ^/-/+ reads as charge rather than prescript/bond logic.
    chargeable = ("element", "count", "state", "close")

    def prev_kind() -> str:
        return toks[-1].kind if toks else "start"

    def at_species_start() -> bool:
        return prev_kind() in ("start", "arrow", "plus", "bond", "open", "stoich_coeff")

    pending_space = False
    while i < n:
        ch = body[i]
        if ch.isspace():
            pending_space = True
            i += 1
            continue
        spaced = pending_space
        pending_space = False
        matched_arrow = False
        for text, _ in ARROWS:
            if body.startswith(text, i):
                toks.append(ChemToken("arrow", text))
                i += len(text)
                matched_arrow = True
                break
        if matched_arrow:
            continue
        if ch == "$":
            raise _err("nested math inside \\ce is not supported", offsets, i, i + 1)
        if ch == "+":
            nxt = body[i + 1] if i + 1 < n else ""
            # A charge sign touches its species; a separator is spaced or
            # stands between species starts.
            if (not spaced and prev_kind() in chargeable
                    and not (nxt.isalnum() or nxt == "(")):
                toks.append(ChemToken("charge", "+"))
            else:
                toks.append(ChemToken("plus", "+"))
            i += 1
            continue
        if ch == "-":
            j = i + 1
            while j < n and body[j].isspace():
                j += 1
            after = body[j] if j < n else ""
            bonds_to_group = after == "(" and not _match_state(body, j)
            if prev_kind() in chargeable:
                if after.isupper() or bonds_to_group:
                    toks.append(ChemToken("bond", "-"))
                elif not spaced:
                    toks.append(ChemToken("charge", "-"))
                else:
                    raise _err("'-' must bond two species or trail as a charge",
                               offsets, i, i + 1)
                i += 1
                continue
            raise _err("'-' must follow an element or count", offsets, i, i + 1)
        if ch == "=":
            if prev_kind() not in chargeable:
                raise _err("'=' bond must follow an element", offsets, i, i + 1)
            toks.append(ChemToken("bond", "="))
            i += 1
            continue
        if ch == "#":
            if prev_kind() not in chargeable:
                raise _err("'#' bond must follow an element", offsets, i, i + 1)
            toks.append(ChemToken("bond", "#"))
            i += 1
            continue
        if ch == "*":
            toks.append(ChemToken("bond", "*"))
            i += 1
            continue
        if ch == "(":
            state = _match_state(body, i)
            if state and prev_kind() in ("element", "count", "close", "charge"):
                toks.append(ChemToken("state", state))
                i += len(state) + 2
                continue
            toks.append(ChemToken("open", "("))
            i += 1
            continue
        if ch == ")":
            toks.append(ChemToken("close", ")"))
            i += 1
            continue
        if ch == "^":
            i = _scan_caret(body, i, toks, offsets, at_species_start())
            continue
        if ch == "_":
            count, i = _scan_script_digits(body, i + 1, offsets, "subscript")
            toks.append(ChemToken("count", count))
            continue
        if ch.isdigit():
            m = _NUMBER.match(body, i)
            assert m is not None
            text = m.group(0)
            end = m.end()
            if at_species_start():
                if end < n and body[end] == "/" and _DIGITS.match(body, end + 1):
                    m2 = _DIGITS.match(body, end + 1)
                    assert m2 is not None
                    toks.append(ChemToken("stoich_coeff", f"{text}/{m2.group(0)}"))
                    i = m2.end()
                else:
                    toks.append(ChemToken("stoich_coeff", text))
                    i = end
            elif prev_kind() in ("element", "close"):
                toks.append(ChemToken("count", text))
                i = end
            else:
                raise _err("unexpected number", offsets, i, end)
            continue
        m = _ELEMENT.match(body, i)
        if m:
            toks.append(ChemToken("element", m.group(0)))
            i = m.end()
            continue
        raise _err(f"unsupported character {ch!r} in \\ce", offsets, i, i + 1)
    _check_sequence(toks, offsets, n)
    return toks


def _match_state(body: str, i: int) -> str | None:
    for state in STATES:
        if body.startswith("(" + state + ")", i):
            return state
    return None


def _scan_script_digits(body: str, i: int, offsets: list[int], what: str) -> tuple[str, int]:
    if i < len(body) and body[i] == "{":
        m = _DIGITS.match(body, i + 1)
        if m and m.end() < len(body) and body[m.end()] == "}":
            return m.group(0), m.end() + 1
        raise _err(f"malformed {what}", offsets, i, i + 1)
    m = _DIGITS.match(body, i)
    if not m:
        raise _err(f"expected digits in {what}", offsets, i, i + 1)
    return m.group(0), m.end()


_CHARGE_BODY = re.compile(r"([0-9]+)?([+-])")


def _scan_caret(body: str, i: int, toks: list[ChemToken],
                offsets: list[int], species_start: bool) -> int:
    if species_start:
        # Isotope prescripts: ^{227}_{90}Th or ^227_90Th.
        mass, j = _scan_script_digits(body, i + 1, offsets, "isotope mass")
        number = ""
        if j < len(body) and body[j] == "_":
            number, j = _scan_script_digits(body, j + 1, offsets, "atomic number")
        if not (j < len(body) and body[j].isupper()):
            raise _err("isotope prescript must precede an element", offsets, i, j)
        payload = mass + ("/" + number if number else "")
        toks.append(ChemToken("isotope", payload))
        return j
    j = i + 1
    braced = j < len(body) and body[j] == "{"
    if braced:
        end = body.find("}", j)
        if end < 0:
            raise _err("unterminated charge", offsets, i, j)
        content = body[j + 1:end]
        if not re.fullmatch(r"[0-9]*[+-]", content):
            raise _err(f"malformed charge {content!r}", offsets, i, end)
        toks.append(ChemToken("charge", content))
        return end + 1
    m = _CHARGE_BODY.match(body, j)
    if not m:
        raise _err("malformed charge", offsets, i, j + 1)
    toks.append(ChemToken("charge", (m.group(1) or "") + m.group(2)))
    return m.end()


def _check_sequence(toks: list[ChemToken], offsets: list[int], length: int) -> None:
    depth = 0
    for tok in toks:
        if tok.kind == "open":
            depth += 1
        elif tok.kind == "close":
            depth -= 1
            if depth < 0:
                raise _err("unbalanced ')'", offsets, 0, length)
    if depth != 0:
        raise _err("unbalanced '(' grouping", offsets, 0, length)


def expand_ce(body: str) -> str:
    """Expand one ``\\ce`` body to whitelisted LaTeX."""
    toks = tokenize_ce(body)
    chunks: list[str] = []
    i = 0
    while i < len(toks):
        tok = toks[i]
        if tok.kind == "element":
            run = [tok.payload]
            while i + 1 < len(toks) and toks[i + 1].kind == "element":
                i += 1
                run.append(toks[i].payload)
            chunks.append("\\mathrm{" + "".join(run) + "}")
        elif tok.kind == "count":
            chunks.append("{}_{" + tok.payload + "}")
        elif tok.kind == "charge":
            chunks.append("{}^{" + tok.payload + "}")
        elif tok.kind == "isotope":
            mass, _, number = tok.payload.partition("/")
            if number:
                chunks.append("{}_{" + number + "}^{" + mass + "}")
            else:
                chunks.append("{}^{" + mass + "}")
        elif tok.kind == "arrow":
            chunks.append(dict(ARROWS)[tok.payload])
        elif tok.kind == "plus":
            chunks.append("+")
        elif tok.kind == "bond":
            chunks.append({"-": "-", "=": "=", "#": "\\equiv", "*": "\\cdot"}[tok.payload])
        elif tok.kind == "state":
            chunks.append("(\\mathrm{" + tok.payload + "})")
        elif tok.kind == "stoich_coeff":
            num, _, den = tok.payload.partition("/")
            if den:
                chunks.append("\\frac{" + num + "}{" + den + "}\\,")
            else:
                chunks.append(tok.payload)
        elif tok.kind == "open":
            chunks.append("(")
        elif tok.kind == "close":
            chunks.append(")")
        i += 1
    return " ".join(chunks)


# -- \pu ------------------------------------------------------------------


def expand_pu(body: str) -> str:
    """Expand one ``\\pu`` body: number, optional power-of-ten, upright units.

    Quotients keep the solidus form (``m/s`` stays a slash, not a fraction).
    """
    offsets = byte_offsets(body)
    text = body.strip()
    if not text:
        return ""
    shift = body.find(text[0]) if text else 0
    chunks: list[str] = []
    i = 0
    m = _PU_NUMBER.match(text)
    if m:
        number = m.group(0)
        i = m.end()
        if "e" in number or "E" in number:
            mantissa, exponent = re.split(r"[eE]", number)
            chunks.append(mantissa + "\\times{10}^{" + str(int(exponent)) + "}")
        else:
            chunks.append(number)
    while i < len(text) and text[i].isspace():
        i += 1
    unit = text[i:]
    if unit:
        if chunks:
            chunks.append("\\,")
        chunks.append(_expand_unit(unit, offsets, shift + i))
    return "".join(chunks)


def _expand_unit(unit: str, offsets: list[int], base: int) -> str:
    out: list[str] = []
    i = 0
    expect_atom = True
    while i < len(unit):
        ch = unit[i]
        if expect_atom:
            m = _UNIT_ATOM.match(unit, i)
            if not m:
                raise _err(f"expected a unit symbol at {unit[i:]!r}", offsets,
                           base + i, base + i + 1)
            atom = m.group(0)
            letters = atom.rstrip("0123456789")
            power = atom[len(letters):]
            out.append("\\mathrm{" + letters + "}")
            if power:
                out.append("^{" + power + "}")
            i = m.end()
            expect_atom = False
            continue
        if ch in ".*":
            out.append("\\cdot")
        elif ch == "/":
            out.append("/")
        else:
            raise _err(f"unsupported unit separator {ch!r}", offsets,
                       base + i, base + i + 1)
        i += 1
        expect_atom = True
    if expect_atom:
        raise _err("dangling unit separator", offsets, base + len(unit) - 1,
                   base + len(unit))
    return "".join(out)
