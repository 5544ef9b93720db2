from __future__ import annotations

import pytest

from texmathc.generator import TRANSLATION_FNS
from texmathc.registry import (
    Registry,
    RegistryError,
    decode_param,
    dump_registry,
    load_registry,
    lookup,
    parse_registry_text,
)

MINIMAL = """\
version 0.test
[commands]
ddot\t1\taccent\t00A8\tfunction
pmatrix\t0\tmatrix\t(,)\tenvironment
[operators]
+\tmo\t002B\t-
(\tmo\t0028\tstretchy=false
"""


def test_table1_rows_in_default(registry):
    ddot = lookup(registry, "ddot")
    assert ddot is not None
    assert ddot.translation_fn == "accent"
    assert ddot.params == ("00A8",)

    tilde = lookup(registry, "tilde")
    assert tilde.translation_fn == "accent"
    assert tilde.params == ("007E",)

    bar = lookup(registry, "bar")
    assert bar.translation_fn == "accent"
    assert bar.params == ("00AF",)

    pmatrix = lookup(registry, "pmatrix")
    assert pmatrix.translation_fn == "matrix"
    assert pmatrix.params == ("(", ")")

    matrix = lookup(registry, "matrix")
    assert matrix.translation_fn == "matrix"
    assert matrix.params == ()


def test_lookup_absent_is_none(registry):
    assert lookup(registry, "notacommand") is None


def test_default_registry_breadth(registry):
    assert len(registry.commands) >= 200
    used_fns = {spec.translation_fn for spec in registry.commands.values()}
    assert used_fns == set(TRANSLATION_FNS), (
        "every translation function must be exercised by the shipped data")


def test_every_fn_resolves(registry):
    for spec in registry.commands.values():
        assert spec.translation_fn in TRANSLATION_FNS, spec.name


def test_categories_and_arities(registry):
    for spec in registry.commands.values():
        assert 0 <= spec.arity <= 3
    assert registry.lookup("ce").category == "chem-only"
    assert registry.lookup("pu").category == "chem-only"
    assert registry.lookup("longrightleftharpoons").category == "chem-only"
    assert registry.lookup("intent").category == "intent-only"


def test_parse_minimal_registry():
    reg = parse_registry_text(MINIMAL)
    assert reg.version == "0.test"
    assert reg.lookup("ddot").params == ("00A8",)
    assert reg.operator("(").attributes == (("stretchy", "false"),)


def test_empty_command_list_is_legal():
    reg = parse_registry_text("version 1\n[commands]\n[operators]\n")
    assert isinstance(reg, Registry)
    assert reg.commands == {}


def test_unknown_translation_fn_rejected():
    bad = "version 1\n[commands]\nfoo\t0\tnosuchfn\t-\tliteral\n"
    with pytest.raises(RegistryError, match="foo"):
        parse_registry_text(bad)


def test_malformed_line_identified():
    bad = "version 1\n[commands]\nfoo\t0\n"
    with pytest.raises(RegistryError, match="line 3"):
        parse_registry_text(bad)


def test_missing_version_rejected():
    with pytest.raises(RegistryError, match="version"):
        parse_registry_text("[commands]\n")


def test_duplicate_command_rejected():
    bad = ("version 1\n[commands]\n"
           "foo\t0\tidentifier\t0041\tliteral\n"
           "foo\t0\tidentifier\t0042\tliteral\n")
    with pytest.raises(RegistryError, match="duplicate"):
        parse_registry_text(bad)


def test_dump_load_round_trip(registry):
    dumped = dump_registry(registry)
    reloaded = parse_registry_text(dumped)
    assert reloaded == registry
    assert dump_registry(reloaded) == dumped


def test_load_registry_from_file(tmp_path):
    path = tmp_path / "reg.txt"
    path.write_text(MINIMAL, encoding="utf-8")
    reg = load_registry(path)
    assert reg.lookup("ddot") is not None


def test_decode_param():
    assert decode_param("00A8") == "¨"
    assert decode_param("(") == "("
    assert decode_param("mod") == "mod"
    assert decode_param("1em") == "1em"
