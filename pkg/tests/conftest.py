import pytest

from symgen.cdlang import parse_cd
from symgen.genmap import GeneratorMap
from symgen.symtab import build_symbol_table

BOOK_MODEL = "classdiagram Shop {\n  class Book { String title; }\n}\n"

SHOP_MODEL = """\
classdiagram Shop {
  // the running example plus a few neighbours
  class Book { String title; boolean open; int sell(int qty); }
  class Library { Book featured; }
  interface Priced { double price(); }
  enum Format { HARDCOVER, PAPERBACK }
}
"""


@pytest.fixture
def book_ast():
    return parse_cd(BOOK_MODEL, "bookshop.cd")


@pytest.fixture
def shop_ast():
    return parse_cd(SHOP_MODEL, "shop.cd")


@pytest.fixture
def shop_table(shop_ast):
    root = build_symbol_table(shop_ast)
    return root, GeneratorMap(root)


def pytest_terminal_summary(terminalreporter):
    reports = [r for r in terminalreporter.stats.get("passed", []) + terminalreporter.stats.get("failed", [])
               if r.when == "call" and any(k == "criterion" for k, _ in r.user_properties)]
    if not reports:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(reports, key=lambda r: dict(r.user_properties)["criterion"]):
        label = dict(r.user_properties)["criterion"]
        terminalreporter.write_line(f"{'PASS' if r.passed else 'FAIL'}  criterion {label}")
