"""Data-driven whitelist of supported commands and literal operator tokens.

The registry is loaded from a tab-separated text file (see ``data/registry.txt``
for the shipped default).  New macros are added by editing the table, not the
code: each record names the generator function that renders it plus the
parameters that function needs (codepoints as uppercase hex, fences and
widths literally).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

CATEGORIES = frozenset(
    {"literal", "function", "environment", "delimiter", "style", "chem-only", "intent-only"}
)
MAX_ARITY = 3

_HEX_PARAM = re.compile(r"^[0-9A-F]{4,6}$")


class RegistryError(ValueError):
    """Malformed registry data; loading fails atomically."""


@dataclass(frozen=True)
class CommandSpec:
    """One whitelisted command: a row of the translation mapping table."""

    name: str
    arity: int
    translation_fn: str
    params: tuple[str, ...]
    category: str
    deprecated: bool = False

    def __post_init__(self) -> None:
        if not 0 <= self.arity <= MAX_ARITY:
            raise RegistryError(f"command {self.name!r}: arity {self.arity} out of range")
        if self.category not in CATEGORIES:
            raise RegistryError(f"command {self.name!r}: unknown category {self.category!r}")


@dataclass(frozen=True)
class OperatorSpec:
    """Mapping of a literal source token to its MathML token element."""

    token: str
    element: str  # mo, mi, or mn
    codepoint: str  # uppercase hex of the emitted character(s)
    attributes: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        if self.element not in ("mo", "mi", "mn"):
            raise RegistryError(f"operator {self.token!r}: element must be mo/mi/mn")

    @property
    def text(self) -> str:
        return decode_param(self.codepoint)


@dataclass(frozen=True)
class Registry:
    """Immutable after load; shared freely between concurrent parses."""

    version: str
    commands: dict[str, CommandSpec] = field(default_factory=dict)
    operators: dict[str, OperatorSpec] = field(default_factory=dict)

    def lookup(self, name: str) -> CommandSpec | None:
        """Exact-match command lookup; None means not whitelisted."""
        return self.commands.get(name)

    def operator(self, token: str) -> OperatorSpec | None:
        return self.operators.get(token)

    def delimiters(self) -> frozenset[str]:
        return frozenset(
            name for name, spec in self.commands.items() if spec.category == "delimiter"
        )


def lookup(registry: Registry, name: str) -> CommandSpec | None:
    return registry.lookup(name)


def decode_param(param: str) -> str:
    """Decode a table parameter: uppercase-hex codepoints become characters,
    anything else is taken literally."""
    if _HEX_PARAM.match(param):
        return chr(int(param, 16))
    return param


def _split_params(text: str) -> tuple[str, ...]:
    if text == "-":
        return ()
    return tuple(text.split(","))


def _split_attrs(text: str, where: str) -> tuple[tuple[str, str], ...]:
    if text == "-":
        return ()
    pairs = []
    for chunk in text.split(";"):
        if "=" not in chunk:
            raise RegistryError(f"{where}: attribute {chunk!r} is not key=value")
        key, _, value = chunk.partition("=")
        pairs.append((key, value))
    return tuple(pairs)


def parse_registry_text(text: str) -> Registry:
    """Parse registry file content.  Raises RegistryError naming the bad line."""
    version: str | None = None
    commands: dict[str, CommandSpec] = {}
    operators: dict[str, OperatorSpec] = {}
    section = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line.startswith("version"):
            version = line.split(None, 1)[1].strip() if len(line.split(None, 1)) > 1 else ""
            if not version:
                raise RegistryError(f"line {lineno}: empty version")
            continue
        if line.strip() in ("[commands]", "[operators]"):
            section = line.strip()
            continue
        fields = line.split("\t")
        if section == "[commands]":
            if len(fields) not in (5, 6):
                raise RegistryError(f"line {lineno}: expected 5 or 6 tab-separated fields")
            name, arity_text, fn, params_text, category = fields[:5]
            flags = fields[5] if len(fields) == 6 else ""
            try:
                arity = int(arity_text)
            except ValueError:
                raise RegistryError(f"line {lineno}: arity {arity_text!r} is not an integer")
            if name in commands:
                raise RegistryError(f"line {lineno}: duplicate command {name!r}")
            deprecated = False
            if flags:
                if flags != "deprecated":
                    raise RegistryError(f"line {lineno}: unknown flag {flags!r}")
                deprecated = True
            try:
                commands[name] = CommandSpec(
                    name=name,
                    arity=arity,
                    translation_fn=fn,
                    params=_split_params(params_text),
                    category=category,
                    deprecated=deprecated,
                )
            except RegistryError as exc:
                raise RegistryError(f"line {lineno}: {exc}") from None
        elif section == "[operators]":
            if len(fields) != 4:
                raise RegistryError(f"line {lineno}: expected 4 tab-separated fields")
            token, element, codepoint, attrs_text = fields
            if token in operators:
                raise RegistryError(f"line {lineno}: duplicate operator {token!r}")
            try:
                operators[token] = OperatorSpec(
                    token=token,
                    element=element,
                    codepoint=codepoint,
                    attributes=_split_attrs(attrs_text, f"line {lineno}"),
                )
            except RegistryError as exc:
                raise RegistryError(f"line {lineno}: {exc}") from None
        else:
            raise RegistryError(f"line {lineno}: content outside any section")

    if version is None:
        raise RegistryError("missing version header")

    registry = Registry(version=version, commands=commands, operators=operators)
    _check_translation_fns(registry)
    return registry


def _check_translation_fns(registry: Registry) -> None:
    # Imported lazily: the generator imports this module for its types.
    from .generator import TRANSLATION_FNS

    for spec in registry.commands.values():
        if spec.translation_fn not in TRANSLATION_FNS:
            raise RegistryError(
                f"command {spec.name!r}: unknown translation function {spec.translation_fn!r}"
            )


def load_registry(source: str | Path | None = None) -> Registry:
    """Load a registry from `source`, or the embedded default when None."""
    if source is None:
        return default_registry()
    text = Path(source).read_text(encoding="utf-8")
    return parse_registry_text(text)


@lru_cache(maxsize=1)
def default_registry() -> Registry:
    text = resources.files("texmathc.data").joinpath("registry.txt").read_text("utf-8")
    return parse_registry_text(text)


def dump_registry(registry: Registry) -> str:
    """Serialize back to the file format; load(dump(load(x))) == load(x)."""
    lines = [f"version {registry.version}", "", "[commands]"]
    for spec in registry.commands.values():
        params = ",".join(spec.params) if spec.params else "-"
        fields = [spec.name, str(spec.arity), spec.translation_fn, params, spec.category]
        if spec.deprecated:
            fields.append("deprecated")
        lines.append("\t".join(fields))
    lines.append("")
    lines.append("[operators]")
    for op in registry.operators.values():
        attrs = ";".join(f"{k}={v}" for k, v in op.attributes) if op.attributes else "-"
        lines.append("\t".join([op.token, op.element, op.codepoint, attrs]))
    lines.append("")
    return "\n".join(lines)
