"""texmathc: whitelist-validated LaTeX math to presentation MathML."""

from .diagnostics import Diagnostic
from .generator import to_mathml, translate_node
from .intent import apply_intent, parse_intent
from .mathml import GenOptions, MathMLNode, from_xml, serialize
from .mhchem import expand_ce, expand_pu, preprocess
from .parser import ParseResult, parse, render_tex, validate
from .pipeline import ConversionFailed, check_formula, convert_formula
from .registry import CommandSpec, Registry, default_registry, load_registry, lookup
from .similarity import (
    CompareOptions,
    CorpusReport,
    FScoreReport,
    TedResult,
    batch_compare,
    element_fscore,
    normalize,
    tree_edit_distance,
)

__version__ = "0.1.0"

__all__ = [
    "CommandSpec",
    "CompareOptions",
    "ConversionFailed",
    "CorpusReport",
    "Diagnostic",
    "FScoreReport",
    "GenOptions",
    "MathMLNode",
    "ParseResult",
    "Registry",
    "TedResult",
    "apply_intent",
    "batch_compare",
    "check_formula",
    "convert_formula",
    "default_registry",
    "element_fscore",
    "expand_ce",
    "expand_pu",
    "from_xml",
    "load_registry",
    "lookup",
    "normalize",
    "parse",
    "parse_intent",
    "preprocess",
    "render_tex",
    "serialize",
    "to_mathml",
    "translate_node",
    "tree_edit_distance",
    "validate",
]
