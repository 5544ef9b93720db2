from __future__ import annotations

import json
import random

import pytest

from conftest import CORPORA
from oracles import ted_mapping_oracle, ted_recursive_oracle
from texmathc.mathml import MathMLNode, from_xml, serialize
from texmathc.similarity import (
    FULL_NORMALIZATION,
    CompareOptions,
    ComparePair,
    batch_compare,
    element_fscore,
    format_report_table,
    normalize,
    tree_edit_distance,
)


def math(*children_xml: str) -> MathMLNode:
    return from_xml("<math>" + "".join(children_xml) + "</math>")


# -- normalize ----------------------------------------------------------------


def test_single_child_mrow_unwrapped():
    tree = math("<mrow><mi>x</mi></mrow>")
    out = normalize(tree, CompareOptions(ignore_inferred_mrow=True))
    assert out == math("<mi>x</mi>")


def test_strip_semantics_and_annotation():
    tree = from_xml(
        "<math><semantics><mrow><mi>x</mi></mrow>"
        '<annotation encoding="application/x-tex">x</annotation></semantics></math>')
    out = normalize(tree, CompareOptions(
        strip_elements=frozenset({"annotation", "semantics"})))
    assert out == math("<mrow><mi>x</mi></mrow>")


def test_no_options_is_identity():
    tree = math("<mrow><mi>x</mi><mo>+</mo><mi>y</mi></mrow>")
    assert normalize(tree, CompareOptions()) == tree


def test_require_semantics_wrapper():
    tree = math("<mi>x</mi>")
    out = normalize(tree, CompareOptions(require_semantics_wrapper=True))
    assert out.children[0].element == "semantics"
    # already wrapped: unchanged
    again = normalize(out, CompareOptions(require_semantics_wrapper=True))
    assert again == out


def test_ignored_attributes():
    tree = from_xml('<math><mo stretchy="false" fence="true">(</mo></math>')
    out = normalize(tree, CompareOptions(ignored_attributes=frozenset({"stretchy"})))
    assert out.children[0].attributes == {"fence": "true"}
    out_all = normalize(tree, CompareOptions(ignored_attributes="all"))
    assert out_all.children[0].attributes == {}


def test_inferred_mrow_inside_layout_slot():
    tree = from_xml("<math><msqrt><mrow><mi>a</mi><mi>b</mi></mrow></msqrt></math>")
    out = normalize(tree, CompareOptions(ignore_inferred_mrow=True))
    assert [c.element for c in out.children[0].children] == ["mi", "mi"]


def test_mfrac_slots_not_flattened():
    # positional children of mfrac must survive mrow normalization
    tree = from_xml(
        "<math><mfrac><mrow><mi>a</mi><mi>b</mi></mrow><mi>c</mi></mfrac></math>")
    out = normalize(tree, CompareOptions(ignore_inferred_mrow=True))
    assert len(out.children[0].children) == 2


@pytest.mark.parametrize("options", [
    CompareOptions(),
    CompareOptions(ignore_inferred_mrow=True),
    FULL_NORMALIZATION,
])
def test_normalize_idempotent(options):
    tree = from_xml(
        "<math><semantics><mrow><mrow><mi>x</mi></mrow><mo>+</mo>"
        "<msqrt><mrow><mi>y</mi></mrow></msqrt></mrow>"
        "<annotation>x+sqrt(y)</annotation></semantics></math>")
    once = normalize(tree, options)
    assert normalize(once, options) == once


# -- F-score ------------------------------------------------------------------


def test_fscore_identity():
    tree = math("<mrow><mi>x</mi><mo>+</mo><mn>1</mn></mrow>")
    report = element_fscore(tree, tree)
    assert report.f1 == 1.0
    assert report.only_in_a == report.only_in_b == 0


def test_fscore_half():
    a = math("<mi>x</mi>")
    b = math("<mi>y</mi>")
    report = element_fscore(a, b)
    # multisets {math, mi:x} vs {math, mi:y}: one match out of two on each side
    assert report.precision == 0.5
    assert report.recall == 0.5
    assert report.f1 == 0.5


def test_fscore_ignore_mrow_makes_equal():
    a = math("<mrow><mi>x</mi></mrow>")
    b = math("<mi>x</mi>")
    assert element_fscore(a, b, CompareOptions(ignore_inferred_mrow=True)).f1 == 1.0
    assert element_fscore(a, b).f1 < 1.0


def test_fscore_symmetry():
    a = math("<mrow><mi>x</mi><mo>+</mo><mi>y</mi></mrow>")
    b = math("<mrow><mi>x</mi><mi>y</mi></mrow>")
    ab = element_fscore(a, b)
    ba = element_fscore(b, a)
    assert ab.f1 == ba.f1
    assert ab.precision == ba.recall
    assert ab.recall == ba.precision


def test_fscore_is_order_insensitive():
    a = math("<mrow><mi>x</mi><mo>+</mo><mi>y</mi></mrow>")
    b = math("<mrow><mi>y</mi><mo>+</mo><mi>x</mi></mrow>")
    assert element_fscore(a, b).f1 == 1.0
    # ...which is exactly where F-score and TED diverge by design
    assert tree_edit_distance(a, b).distance > 0


# -- tree edit distance --------------------------------------------------------


def test_ted_identity():
    tree = math("<mrow><mi>x</mi><mo>+</mo><mi>y</mi></mrow>")
    result = tree_edit_distance(tree, tree)
    assert result.distance == 0
    assert result.node_count_a == result.node_count_b == 5


def test_ted_single_rename():
    assert tree_edit_distance(math("<mi>x</mi>"), math("<mi>y</mi>")).distance == 1


def test_ted_single_delete_vs_oracle():
    a = math("<mrow><mi>x</mi><mo>+</mo><mi>y</mi></mrow>")
    b = math("<mrow><mi>x</mi><mi>y</mi></mrow>")
    got = tree_edit_distance(a, b).distance
    assert got == 1
    assert got == ted_mapping_oracle(a, b) == ted_recursive_oracle(a, b)


def test_ted_attributes_do_not_affect_labels():
    a = math('<mo stretchy="false">(</mo>')
    b = math("<mo>(</mo>")
    assert tree_edit_distance(a, b).distance == 0


def test_ted_bounds():
    a = math("<mi>x</mi>")
    b = math("<mrow><mi>a</mi><mi>b</mi><mi>c</mi></mrow>")
    result = tree_edit_distance(a, b)
    assert 0 < result.distance <= result.node_count_a + result.node_count_b


LABELS = [("mi", "x"), ("mi", "y"), ("mo", "+"), ("mn", "1"), ("mrow", None),
          ("mfrac", None), ("msup", None)]


def rand_tree(rng: random.Random, max_nodes: int) -> MathMLNode:
    count = rng.randint(1, max_nodes)
    nodes = []
    for _ in range(count):
        element, text = rng.choice(LABELS)
        nodes.append(MathMLNode(element, {}, [], text))
    for i in range(1, count):
        parent = nodes[rng.randrange(i)]
        parent.text = None
        parent.children.append(nodes[i])
    return nodes[0]


def test_ted_matches_oracles_on_random_trees():
    rng = random.Random(1234)
    for _ in range(120):
        a = rand_tree(rng, 6)
        b = rand_tree(rng, 6)
        got = tree_edit_distance(a, b).distance
        assert got == ted_mapping_oracle(a, b)
        assert got == ted_recursive_oracle(a, b)


def test_ted_metric_axioms():
    rng = random.Random(99)
    trees = [rand_tree(rng, 6) for _ in range(30)]
    for _ in range(300):
        a, b, c = rng.choice(trees), rng.choice(trees), rng.choice(trees)
        dab = tree_edit_distance(a, b).distance
        dba = tree_edit_distance(b, a).distance
        dac = tree_edit_distance(a, c).distance
        dbc = tree_edit_distance(b, c).distance
        assert tree_edit_distance(a, a).distance == 0
        assert dab == dba
        assert dac <= dab + dbc


def test_ted_zero_implies_f1_one():
    rng = random.Random(7)
    for _ in range(60):
        a = rand_tree(rng, 6)
        b = rand_tree(rng, 6)
        if tree_edit_distance(a, b, FULL_NORMALIZATION).distance == 0:
            assert element_fscore(a, b, FULL_NORMALIZATION).f1 == 1.0
        if element_fscore(a, b, FULL_NORMALIZATION).f1 < 1.0:
            assert tree_edit_distance(a, b, FULL_NORMALIZATION).distance > 0


# -- batch comparison -----------------------------------------------------------


def test_batch_self_pairs():
    doc = serialize(math("<mrow><mi>x</mi><mo>+</mo><mi>y</mi></mrow>"))
    pairs = [ComparePair(f"p{i}", doc, doc) for i in range(5)]
    report = batch_compare(pairs)
    assert report.formula_count == 5
    assert report.overall_ted == 0
    assert report.average_ted == 0.0


def test_batch_arithmetic():
    base = serialize(math("<mrow><mi>x</mi><mo>+</mo><mi>y</mi></mrow>"))
    one_off = serialize(math("<mrow><mi>x</mi><mo>+</mo><mi>z</mi></mrow>"))
    three_off = serialize(math("<mi>q</mi>"))
    report = batch_compare([
        ComparePair("a", base, one_off),
        ComparePair("b", base, three_off),
    ])
    assert report.overall_ted == sum(r.ted for r in report.rows)
    assert report.average_ted == report.overall_ted / 2
    assert f"{report.average_ted:.3f}" in format_report_table(report)


def test_batch_surfaces_xml_failures():
    good = serialize(math("<mi>x</mi>"))
    report = batch_compare([
        ComparePair("ok", good, good),
        ComparePair("broken", "<math><mi>x</mi>", good),
    ])
    assert report.formula_count == 1
    assert len(report.errors) == 1
    assert "broken" in report.errors[0]
    assert any(r.error for r in report.rows)
    assert format_report_table(report).startswith("!")


def test_report_table_shape():
    doc = serialize(math("<mi>x</mi>"))
    table = format_report_table(batch_compare([ComparePair("p", doc, doc)]))
    lines = table.splitlines()
    assert lines[0].startswith("Number of formulas")
    assert lines[1].startswith("Overall TED")
    assert lines[2].startswith("Average TED")
    assert lines[3].startswith("Average F1")


def test_two_renderer_corpus_against_oracle():
    data = json.loads((CORPORA / "two_renderer.json").read_text("utf-8"))
    options = CompareOptions(strip_elements=frozenset({"annotation"}),
                             require_semantics_wrapper=True)
    pairs = [ComparePair(p["id"], p["a_inline"], p["b_inline"])
             for p in data["pairs"]]
    report = batch_compare(pairs, options)
    expected = 0
    for pair in pairs:
        a = normalize(from_xml(pair.a), options)
        b = normalize(from_xml(pair.b), options)
        expected += ted_recursive_oracle(a, b)
    assert report.overall_ted == expected
    assert report.average_ted == expected / len(pairs)
