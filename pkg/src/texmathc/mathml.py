"""Presentation-MathML tree: node type, serializer, and XML reader."""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

# The supported presentation element set (27 members; fences are expressed
# as mrow + stretchy mo rather than mfenced).
SUPPORTED_ELEMENTS = frozenset({
    "math", "mrow", "mi", "mo", "mn", "mtext", "mspace", "ms",
    "mfrac", "msqrt", "mroot", "msub", "msup", "msubsup",
    "munder", "mover", "munderover", "mmultiscripts",
    "mtable", "mtr", "mtd",
    "mstyle", "mpadded", "mphantom", "menclose",
    "semantics", "annotation",
})

TOKEN_ELEMENTS = frozenset({"mi", "mo", "mn", "mtext", "ms", "annotation"})


@dataclass
class MathMLNode:
    """Element name, ordered attributes, and either children or text."""

    element: str
    attributes: dict[str, str] = field(default_factory=dict)
    children: list["MathMLNode"] = field(default_factory=list)
    text: str | None = None

    def __post_init__(self) -> None:
        if self.text is not None and self.children:
            raise ValueError(f"<{self.element}> cannot carry both text and children")

    def is_token(self) -> bool:
        return self.text is not None

    def copy(self) -> "MathMLNode":
        return MathMLNode(
            self.element,
            dict(self.attributes),
            [child.copy() for child in self.children],
            self.text,
        )

    def iter(self):
        yield self
        for child in self.children:
            yield from child.iter()


def token(element: str, text: str, **attributes: str) -> MathMLNode:
    return MathMLNode(element, dict(attributes), [], text)


def elem(element: str, children: list[MathMLNode] | None = None,
         **attributes: str) -> MathMLNode:
    return MathMLNode(element, dict(attributes), list(children or []))


@dataclass(frozen=True)
class GenOptions:
    """Output options: display mode, optional semantics/annotation wrapping."""

    display: str = "inline"  # "inline" or "block"
    wrap_semantics: bool = False
    annotate_tex: bool = False

    def __post_init__(self) -> None:
        if self.display not in ("inline", "block"):
            raise ValueError(f"display must be inline or block, got {self.display!r}")
        if self.annotate_tex and not self.wrap_semantics:
            raise ValueError("annotate_tex requires wrap_semantics")

    def fingerprint(self) -> str:
        return f"display={self.display};semantics={self.wrap_semantics};annotate={self.annotate_tex}"


def _escape_text(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _escape_attr(text: str) -> str:
    return _escape_text(text).replace('"', "&quot;")


def serialize(tree: MathMLNode) -> str:
    """Deterministic UTF-8 XML: insertion-ordered attributes, literal non-ASCII,
    no whitespace between elements."""
    out: list[str] = []
    _write(tree, out)
    return "".join(out)


def _write(node: MathMLNode, out: list[str]) -> None:
    out.append("<" + node.element)
    for name, value in node.attributes.items():
        out.append(f' {name}="{_escape_attr(value)}"')
    out.append(">")
    if node.text is not None:
        out.append(_escape_text(node.text))
    else:
        for child in node.children:
            _write(child, out)
    out.append("</" + node.element + ">")


_NS = re.compile(r"^\{[^}]*\}")


def from_xml(text: str) -> MathMLNode:
    """Read any MathML document into a MathMLNode tree.

    Lenient by design: reference renderers emit elements and attributes
    outside our generated subset, and comparison must still work.
    Namespace prefixes are stripped; pure-whitespace text is ignored;
    token text is whitespace-trimmed.
    """
    root = ET.fromstring(text)
    return _convert(root)


def from_xml_file(path) -> MathMLNode:
    with open(path, "r", encoding="utf-8") as handle:
        return from_xml(handle.read())


def _convert(element: ET.Element) -> MathMLNode:
    name = _NS.sub("", element.tag)
    attributes = {_NS.sub("", k): v for k, v in element.attrib.items()}
    children = [_convert(child) for child in element]
    if children:
        return MathMLNode(name, attributes, children)
    text = (element.text or "").strip()
    if text:
        return MathMLNode(name, attributes, [], text)
    # Empty element: layout node with no children (e.g. an empty mrow).
    return MathMLNode(name, attributes, [])
