"""End-to-end orchestration: preprocess, validate, generate, serialize, cache."""

from __future__ import annotations

from typing import Callable

from . import mhchem
from .cache import RenderCache
from .diagnostics import Diagnostic, DiagnosticError
from .generator import to_mathml
from .mathml import GenOptions, serialize
from .parser import parse
from .registry import Registry, default_registry


class ConversionFailed(Exception):
    """Validation or annotation failure; carries the diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(d.format_line() for d in diagnostics))
        self.diagnostics = diagnostics


def check_formula(source: str, *, chem: bool = False,
                  registry: Registry | None = None) -> list[Diagnostic]:
    """All diagnostics for `source`; empty means valid with no warnings."""
    registry = registry or default_registry()
    if chem:
        try:
            source = mhchem.preprocess(source)
        except DiagnosticError as exc:
            return [exc.diagnostic]
    result = parse(source, registry, allow_chem=chem)
    return list(result.errors + result.warnings)


def convert_formula(source: str, *, chem: bool = False,
                    options: GenOptions | None = None,
                    registry: Registry | None = None,
                    cache: RenderCache | None = None,
                    log: Callable[[str], None] | None = None) -> str:
    """Serialized MathML for `source`; raises ConversionFailed on bad input.

    With a cache, the second identical invocation serves the stored bytes.
    """
    registry = registry or default_registry()
    options = options or GenOptions()
    key = None
    if cache is not None:
        key = RenderCache.key_for(
            f"{source}\x1fchem={chem}", options.fingerprint(), registry.version)
        hit = cache.get(key)
        if hit is not None:
            if log:
                log(f"cache hit {key[:12]}")
            return hit
        if log:
            log(f"cache miss {key[:12]}")
    plain = source
    if chem:
        try:
            plain = mhchem.preprocess(source)
        except DiagnosticError as exc:
            raise ConversionFailed([exc.diagnostic]) from None
    result = parse(plain, registry, allow_chem=chem)
    if not result.ok:
        raise ConversionFailed(list(result.errors + result.warnings))
    assert result.ast is not None
    try:
        tree = to_mathml(result.ast, registry, options)
    except DiagnosticError as exc:
        raise ConversionFailed([exc.diagnostic]) from None
    output = serialize(tree)
    if cache is not None and key is not None:
        cache.put(key, output)
    return output
