import random

import pytest
from hypothesis import given, settings, strategies as st

from symgen.cdlang import TypeForm, iter_nodes, parse_cd, tokenize
from symgen.errors import DuplicateNameError, ParseError

from modelgen import random_model_text
from oracles import source_offset


def test_running_example():
    ast = parse_cd("classdiagram Shop { class Book { String title; } }", "shop.cd")
    assert ast.diagram_name == "Shop"
    assert [t.name for t in ast.types] == ["Book"]
    book = ast.types[0]
    assert book.form is TypeForm.CLASS
    assert [(f.name, f.type_name) for f in book.fields] == [("title", "String")]
    assert book.methods == [] and book.attached_templates == []


def test_empty_diagram():
    ast = parse_cd("classdiagram E { }")
    assert ast.diagram_name == "E"
    assert ast.types == []


def test_duplicate_type_reported_at_second_occurrence():
    text = "classdiagram X { class A { } class A { } }"
    with pytest.raises(DuplicateNameError) as info:
        parse_cd(text, "x.cd")
    assert info.value.name == "A"
    assert info.value.pos.col == text.rindex("A") + 1


def test_all_forms_and_members():
    ast = parse_cd("""
        classdiagram Full {
          abstract class Item { String title; int id(); }
          class Book extends Item { int pages; void sell(int qty, boolean gift); }
          interface Priced { double price(); }
          enum Format { HARDCOVER, PAPERBACK }
        }""")
    item, book, priced, fmt = ast.types
    assert item.is_abstract and not book.is_abstract
    assert book.super_name == "Item"
    assert [(p.name, p.type_name) for p in book.methods[0].params] == [("qty", "int"), ("gift", "boolean")]
    assert priced.form is TypeForm.INTERFACE and priced.methods[0].return_type_name == "double"
    assert fmt.form is TypeForm.ENUM and fmt.enum_constants == ["HARDCOVER", "PAPERBACK"]


def test_fields_and_methods_are_separate_namespaces():
    ast = parse_cd("classdiagram N { class A { int size; int size(); } }")
    assert ast.types[0].fields[0].name == ast.types[0].methods[0].name == "size"


@pytest.mark.parametrize("text, dup", [
    ("classdiagram X { class A { int a; String a; } }", "a"),
    ("classdiagram X { class A { void m(); int m(int p); } }", "m"),
    ("classdiagram X { class A { void m(int p, int p); } }", "p"),
    ("classdiagram X { enum E { ON, ON } }", "ON"),
])
def test_duplicate_members(text, dup):
    with pytest.raises(DuplicateNameError) as info:
        parse_cd(text)
    assert info.value.name == dup


@pytest.mark.parametrize("text", [
    "",
    "classdiagram",
    "classdiagram X {",
    "classdiagram X { class }",
    "classdiagram X { class A { int; } }",
    "classdiagram X { class A { int a } }",
    "classdiagram X { interface I { int a; } }",
    "classdiagram X { abstract interface I { } }",
    "classdiagram X { enum E { } }",
    "classdiagram X { class A { void v; } }",
    "classdiagram X { class A { int m(void p); } }",
    "classdiagram X { class new { } }",
    "classdiagram X { class A { int a; } } trailing",
    "classdiagram X { class A { int a#; } }",
    "classdiagram X { class A extends { } }",
])
def test_syntax_errors(text):
    with pytest.raises(ParseError):
        parse_cd(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_cd("classdiagram X {\n  class A {\n    int a\n  }\n}", "m.cd")
    pos = info.value.pos
    assert (pos.file, pos.line, pos.col) == ("m.cd", 4, 3)
    assert str(pos) == "m.cd:4:3"


def test_comments_and_crlf():
    text = "// header\r\nclassdiagram C { // open\r\n  class A { int a; } // trailing\r\n}\r\n"
    ast = parse_cd(text)
    field = ast.types[0].fields[0]
    assert (field.pos.line, field.pos.col) == (3, 17)


def test_bytes_input():
    assert parse_cd(b"classdiagram B { }").diagram_name == "B"
    with pytest.raises(ParseError):
        parse_cd(b"classdiagram \xff { }")


def test_tokens_carry_positions():
    toks = tokenize("classdiagram X {\n}", "t.cd")
    assert [(t.kind, t.value, t.pos.line, t.pos.col) for t in toks] == [
        ("kw", "classdiagram", 1, 1), ("id", "X", 1, 14), ("punct", "{", 1, 16),
        ("punct", "}", 2, 1), ("eof", "", 2, 2)]


def _check_positions(text):
    ast = parse_cd(text, "p.cd")
    for node in iter_nodes(ast):
        name = node.diagram_name if node is ast else node.name
        offset = source_offset(text, node.pos.line, node.pos.col)
        assert text[offset:offset + len(name)] == name
        assert node.pos.line >= 1 and node.pos.col >= 1


def test_positions_point_at_defining_identifiers_random():
    rng = random.Random(7)
    for _ in range(200):
        _check_positions(random_model_text(rng))


def test_parse_is_pure():
    rng = random.Random(11)
    for _ in range(50):
        text = random_model_text(rng)
        assert parse_cd(text, "a.cd") == parse_cd(text, "a.cd")


@settings(max_examples=300)
@given(st.binary(max_size=200))
def test_fuzz_bytes_never_crash(data):
    try:
        parse_cd(data)
    except (ParseError, DuplicateNameError):
        pass


_TOKENS = ["classdiagram", "class", "interface", "enum", "abstract", "extends", "{", "}",
           "(", ")", ",", ";", "A", "B", "int", "String", "x", "void", " ", "\n", "//c\n"]


@settings(max_examples=300)
@given(st.lists(st.sampled_from(_TOKENS), max_size=40))
def test_fuzz_token_soup_never_crash(parts):
    try:
        parse_cd(" ".join(parts))
    except (ParseError, DuplicateNameError):
        pass
