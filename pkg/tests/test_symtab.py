import json
import random

import pytest

from symgen.cdlang import parse_cd
from symgen.dump import dumps_symtab, scope_to_json
from symgen.errors import (CyclicInheritanceError, DuplicateNameError, InheritanceError,
                           SymbolNotFoundError, UnknownTypeError)
from symgen.symtab import (Scope, Symbol, SymbolKind, build_symbol_table, iter_symbols,
                           kind_matches, resolve, resolve_field_considering_inheritance)

from modelgen import random_model_text
from oracles import (all_scopes, brute_field_owner, brute_resolve, brute_shadows)


def table(text):
    ast = parse_cd(text, "m.cd")
    return ast, build_symbol_table(ast)


def test_book_table(book_ast):
    root = build_symbol_table(book_ast)
    assert root.name is None and root.enclosing is None
    book = resolve("Book", SymbolKind.CD_TYPE, root)
    assert book.scope is root and book.pos.line == 2
    scope = book.spanned_scope
    assert scope.name == "Book" and scope.enclosing is root and scope.owner is book
    title = resolve("title", SymbolKind.CD_FIELD, scope)
    assert title.scope is scope and title.shadows is False
    assert title.payload.type_name == "String"
    assert book_ast.types[0].fields[0].symbol is title


def test_fields_not_visible_from_global(book_ast):
    root = build_symbol_table(book_ast)
    with pytest.raises(SymbolNotFoundError) as info:
        resolve("title", SymbolKind.CD_FIELD, root)
    assert info.value.name == "title" and info.value.kind is SymbolKind.CD_FIELD


def test_inner_scope_sees_enclosing_types(book_ast):
    root = build_symbol_table(book_ast)
    book = root.symbols[0]
    assert resolve("Book", SymbolKind.CD_TYPE, book.spanned_scope) is book


def test_shadowing_flag():
    _, root = table("classdiagram S { class A { int x; int y; } class B extends A { int x; } }")
    b_x = resolve("x", SymbolKind.CD_FIELD, root.sub_scope("B"))
    a_x = resolve("x", SymbolKind.CD_FIELD, root.sub_scope("A"))
    assert b_x.shadows is True and a_x.shadows is False


def test_cycle_detected():
    with pytest.raises(CyclicInheritanceError) as info:
        table("classdiagram S { class A extends B { } class B extends A { } }")
    assert info.value.names == ["A", "B"]


def test_self_extension_is_a_cycle():
    with pytest.raises(CyclicInheritanceError) as info:
        table("classdiagram S { class A extends A { } }")
    assert info.value.names == ["A"]


@pytest.mark.parametrize("text, name", [
    ("classdiagram S { class A extends Missing { } }", "Missing"),
    ("classdiagram S { class A { Missing m; } }", "Missing"),
    ("classdiagram S { class A { Missing m(); } }", "Missing"),
    ("classdiagram S { class A { void m(Missing p); } }", "Missing"),
])
def test_unknown_types(text, name):
    with pytest.raises(UnknownTypeError) as info:
        table(text)
    assert info.value.name == name
    assert info.value.pos is not None


def test_extending_interface_is_rejected():
    with pytest.raises(InheritanceError):
        table("classdiagram S { interface I { } class A extends I { } }")


def test_builtin_and_declared_field_types_accepted():
    _, root = table("classdiagram S { class A { String s; int i; boolean b; double d; B other; } class B { } }")
    assert len(root.sub_scope("A").symbols) == 5


def test_resolve_field_considering_inheritance():
    _, root = table("classdiagram S { class A { int x; } class B extends A { } class C extends B { int y; } }")
    a_x = resolve("x", SymbolKind.CD_FIELD, root.sub_scope("A"))
    assert resolve_field_considering_inheritance("x", root.sub_scope("B")) is a_x
    assert resolve_field_considering_inheritance("x", root.sub_scope("C")) is a_x
    with pytest.raises(SymbolNotFoundError):
        resolve_field_considering_inheritance("y", root.sub_scope("B"))


def test_inherited_lookup_prefers_shadowing_field():
    _, root = table("classdiagram S { class A { int x; } class B extends A { int x; } }")
    found = resolve_field_considering_inheritance("x", root.sub_scope("B"))
    assert found.scope.name == "B"


def test_inherited_lookup_never_consults_siblings():
    _, root = table("classdiagram S { class A { int x; } class B { } }")
    with pytest.raises(SymbolNotFoundError):
        resolve_field_considering_inheritance("x", root.sub_scope("B"))


def test_java_type_query_matches_subkinds():
    assert kind_matches(SymbolKind.JAVA_TYPE, SymbolKind.JAVA_INTERFACE)
    assert not kind_matches(SymbolKind.JAVA_CLASS, SymbolKind.JAVA_ENUM)
    root = Scope()
    sym = root.add(Symbol("Foo", SymbolKind.JAVA_ENUM))
    assert resolve("Foo", SymbolKind.JAVA_TYPE, root) is sym
    with pytest.raises(SymbolNotFoundError):
        resolve("Foo", SymbolKind.JAVA_CLASS, root)


def test_namespace_uniqueness_within_scope():
    root = Scope()
    root.add(Symbol("x", SymbolKind.CD_FIELD))
    root.add(Symbol("x", SymbolKind.CD_METHOD))
    with pytest.raises(DuplicateNameError):
        root.add(Symbol("x", SymbolKind.JAVA_FIELD))


def test_frozen_table_rejects_additions(book_ast):
    root = build_symbol_table(book_ast)
    root.freeze()
    with pytest.raises(RuntimeError):
        root.sub_scope("Book").add(Symbol("z", SymbolKind.CD_FIELD))


def _random_tables(count, seed):
    rng = random.Random(seed)
    for _ in range(count):
        ast = parse_cd(random_model_text(rng), "r.cd")
        yield ast, build_symbol_table(ast)


def test_resolve_matches_brute_force_scan():
    kinds = list(SymbolKind)
    for ast, root in _random_tables(150, 3):
        scopes = all_scopes(root)
        names = {s.name for s in iter_symbols(root)} | {"absent"}
        for scope in scopes:
            for name in names:
                for kind in kinds:
                    expected = brute_resolve(root, name, kind, scope)
                    try:
                        got = resolve(name, kind, scope)
                    except SymbolNotFoundError:
                        got = None
                    assert got is expected, (name, kind, scope)


def test_inherited_field_lookup_matches_ast_walk():
    for ast, root in _random_tables(150, 5):
        field_names = {f.name for t in ast.types for f in t.fields} | {"absent"}
        for t in ast.types:
            if not t.is_class:
                continue
            for name in field_names:
                owner = brute_field_owner(ast, t.name, name)
                try:
                    got = resolve_field_considering_inheritance(name, root.sub_scope(t.name))
                except SymbolNotFoundError:
                    got = None
                if owner is None:
                    assert got is None
                else:
                    assert got.name == name and got.scope.name == owner


def test_shadowing_matches_ast_walk():
    for ast, root in _random_tables(150, 9):
        for t in ast.types:
            for f in t.fields:
                assert f.symbol.shadows == brute_shadows(ast, t.name, f.name)


def test_depth_first_walk_visits_each_symbol_once():
    for ast, root in _random_tables(50, 13):
        seen = [id(s) for s in iter_symbols(root)]
        assert len(seen) == len(set(seen))
        expected = len(ast.types) + sum(len(t.fields) + len(t.methods) for t in ast.types)
        assert len(seen) == expected
        for scope in root.walk():
            for sym in scope.symbols:
                assert sym.scope is scope
            for sub in scope.sub_scopes:
                assert sub.enclosing is scope


def test_build_is_deterministic():
    rng = random.Random(17)
    for _ in range(30):
        text = random_model_text(rng)
        first = scope_to_json(build_symbol_table(parse_cd(text, "d.cd")))
        second = scope_to_json(build_symbol_table(parse_cd(text, "d.cd")))
        assert first == second


def test_dump_schema(book_ast):
    root = build_symbol_table(book_ast)
    data = json.loads(dumps_symtab(root))
    assert list(data) == ["scopeName", "symbols", "subScopes"]
    assert data["scopeName"] is None
    assert data["symbols"] == [{"name": "Book", "kind": "CD_TYPE",
                                "pos": {"line": 2, "col": 9}, "shadows": False}]
    sub = data["subScopes"][0]
    assert sub["scopeName"] == "Book"
    assert sub["symbols"] == [{"name": "title", "kind": "CD_FIELD",
                               "pos": {"line": 2, "col": 23}, "shadows": False}]
    assert sub["subScopes"] == []
