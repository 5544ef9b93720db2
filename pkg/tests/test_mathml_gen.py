from __future__ import annotations

import json
import xml.etree.ElementTree as ET

import pytest

from conftest import FIXTURES
from texmathc import convert_formula, parse, serialize, to_mathml
from texmathc.mathml import (
    SUPPORTED_ELEMENTS,
    TOKEN_ELEMENTS,
    GenOptions,
    MathMLNode,
    from_xml,
    token,
)


def convert(registry, source, **kwargs):
    result = parse(source, registry, allow_chem=kwargs.pop("allow_chem", False))
    assert result.ok, (source, result.errors)
    return to_mathml(result.ast, registry, GenOptions(**kwargs) if kwargs else None)


def test_serialize_single_identifier():
    tree = MathMLNode("math", {"display": "inline"}, [token("mi", "x")])
    assert serialize(tree) == '<math display="inline"><mi>x</mi></math>'


def test_serialize_utf8_literal():
    out = serialize(token("mo", "¨"))
    assert out == "<mo>¨</mo>"
    assert out.encode("utf-8").count(b"\xc2\xa8") == 1  # two UTF-8 bytes, no entity


def test_serialize_escapes_text():
    assert serialize(token("mtext", "a<b")) == "<mtext>a&lt;b</mtext>"
    assert serialize(token("mtext", "a&b")) == "<mtext>a&amp;b</mtext>"


def test_serialize_escapes_attributes():
    node = MathMLNode("mrow", {"intent": 'f("x")<'}, [])
    assert 'intent="f(&quot;x&quot;)&lt;"' in serialize(node)


def test_single_token_root_has_no_mrow(registry):
    assert serialize(convert(registry, "x")) == '<math display="inline"><mi>x</mi></math>'


def test_multi_child_root_gets_mrow(registry):
    out = serialize(convert(registry, "x+y"))
    assert out == ('<math display="inline"><mrow><mi>x</mi><mo>+</mo>'
                   "<mi>y</mi></mrow></math>")


def test_ddot_accent(registry):
    out = serialize(convert(registry, "\\ddot{x}"))
    assert ('<mover accent="true"><mi>x</mi><mo>¨</mo></mover>') in out


def test_pmatrix_fences(registry):
    out = serialize(convert(registry, "\\begin{pmatrix} a \\end{pmatrix}"))
    assert "<mrow><mo>(</mo><mtable>" in out
    assert "</mtable><mo>)</mo></mrow>" in out


def test_over_is_fraction(registry):
    out = serialize(convert(registry, "a \\over b"))
    assert "<mfrac><mi>a</mi><mi>b</mi></mfrac>" in out


def test_null_delimiter_emits_one_fence(registry):
    out = serialize(convert(registry, "\\left. \\frac{A}{B} \\right\\}"))
    assert out.count("<mo>") == 1
    assert "<mo>}</mo>" in out


def test_unicode_minus(registry):
    assert "<mo>−</mo>" in serialize(convert(registry, "a-b"))


def test_digit_run_merges(registry):
    assert "<mn>12</mn>" in serialize(convert(registry, "12"))
    assert "<mn>3.14</mn>" in serialize(convert(registry, "3.14"))


def test_letters_stay_separate(registry):
    out = serialize(convert(registry, "ab"))
    assert "<mi>a</mi><mi>b</mi>" in out


def test_style_merges_letter_run(registry):
    out = serialize(convert(registry, "\\mathrm{SO}"))
    assert '<mi mathvariant="normal">SO</mi>' in out


def test_style_wraps_mixed_content(registry):
    out = serialize(convert(registry, "\\mathbf{x+y}"))
    assert '<mstyle mathvariant="bold">' in out


def test_isotope_prescript_shape(registry):
    out = serialize(convert(registry, "{}^{227}_{90} X"))
    assert ("<msubsup><mrow></mrow><mn>90</mn><mn>227</mn></msubsup>") in out


def test_bigop_scripts_use_underover(registry):
    out = serialize(convert(registry, "\\sum_{i=1}^n i"))
    assert "<munderover><mo>∑</mo>" in out


def test_plain_scripts_use_subsup(registry):
    out = serialize(convert(registry, "x_1^2"))
    assert "<msubsup><mi>x</mi><mn>1</mn><mn>2</mn></msubsup>" in out


def test_display_attribute(registry):
    assert serialize(convert(registry, "x", display="block")).startswith(
        '<math display="block">')


def test_semantics_wrapper(registry):
    out = serialize(convert(registry, "x+y", wrap_semantics=True))
    assert out.startswith('<math display="inline"><semantics><mrow>')


def test_annotation_child(registry):
    out = serialize(convert(registry, "x ^ 2", wrap_semantics=True, annotate_tex=True))
    assert '<annotation encoding="application/x-tex">x^{2}</annotation>' in out


def test_annotate_requires_semantics():
    with pytest.raises(ValueError):
        GenOptions(annotate_tex=True)


def test_bad_display_rejected():
    with pytest.raises(ValueError):
        GenOptions(display="fancy")


def test_generation_determinism(registry):
    source = "\\frac{-b \\pm \\sqrt{b^2-4ac}}{2a}"
    assert serialize(convert(registry, source)) == serialize(convert(registry, source))


WALK_SOURCES = [
    "x", "x+y", "\\frac{a}{b}", "\\sqrt{x}", "\\begin{bmatrix} 1 & 0 \\\\ 0 & 1 \\end{bmatrix}",
    "\\left\\langle x \\right\\rangle", "\\hat{y}", "\\mathbb{R}", "\\text{hi}",
    "\\sum_{k=0}^{n} \\binom{n}{k}", "\\boxed{x}", "\\phantom{x}", "a \\quad b",
    "\\operatorname{abs}(x)", "\\sqrt[3]{x}", "\\overset{a}{b}", "x \\pmod{n}",
    "\\intent{z}{intent='imaginary-part'}",
]


@pytest.mark.parametrize("source", WALK_SOURCES)
def test_element_whitelist_and_token_layout_separation(registry, source):
    tree = convert(registry, source)
    for node in tree.iter():
        assert node.element in SUPPORTED_ELEMENTS, node.element
        if node.element in TOKEN_ELEMENTS:
            assert not node.children, f"token <{node.element}> has children"
        if node.children:
            assert node.text is None


@pytest.mark.parametrize("source", WALK_SOURCES)
def test_output_is_well_formed_xml(registry, source):
    out = serialize(convert(registry, source))
    parsed = ET.fromstring(out)  # independent well-formedness check
    assert parsed.tag == "math"


def test_from_xml_round_trip(registry):
    tree = convert(registry, "\\frac{x+1}{\\sqrt{2}}")
    again = from_xml(serialize(tree))
    assert again == tree


def test_figure2_fixture_bytes(registry):
    cases = json.loads((FIXTURES / "figure2.json").read_text("utf-8"))["cases"]
    assert len(cases) == 8
    for case in cases:
        out = convert_formula(case["input"], options=GenOptions(display=case["display"]))
        assert out == case["mathml"], case["id"]
