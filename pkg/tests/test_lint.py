from pathlib import Path

import pytest

from symgen.lint import lint_java

GOLDEN = Path(__file__).parent / "golden"


def kinds(content, name=None):
    return [f.kind for f in lint_java(content, name)]


@pytest.mark.parametrize("path", sorted(GOLDEN.glob("*.java")), ids=lambda p: p.name)
def test_golden_files_are_clean(path):
    assert lint_java(path.read_text(encoding="utf-8"), path.name) == []


def test_unbalanced_brace():
    (finding,) = lint_java("class A {")
    assert finding.kind == "unbalanced" and (finding.line, finding.col) == (1, 9)


def test_mismatched_and_extra_closers():
    findings = lint_java("class A { void m(] }")
    assert "unmatched ']'" in [f.message for f in findings]
    assert {f.kind for f in findings} == {"unbalanced"}
    assert kinds("class A { } }") == ["unbalanced"]


def test_template_residue():
    assert kinds("class ${name} { }") == ["template-residue"]
    assert kinds("class A {\n@foreach(f : fields)\n}") == ["template-residue"]


def test_literals_and_comments_are_ignored():
    text = 'class A { String s = "{ ${x} @end"; char c = \'}\'; /* { */ // (\n}'
    assert kinds(text) == ["template-residue"]  # unexpanded ${ is reported even inside strings
    assert kinds('class A { String s = "a\\"{"; }') == []


def test_unterminated_literal_and_comment():
    assert "unterminated-literal" in kinds('class A { String s = "abc; }')
    assert "unterminated-comment" in kinds("class A { /* }")


def test_bad_tokens():
    assert kinds("class A { int 9lives; }") == ["bad-token"]
    assert kinds("class A { int x = 0x1F + 10L + 1e5; }") == []
    assert kinds("class A { int # x; }") == ["bad-token"]


def test_file_name_must_match_public_type():
    assert kinds("public class A { }", "A.java") == []
    assert kinds("public class A { }", "B.java") == ["file-name"]
    assert kinds("class A { }", "A.java") == ["file-name"]
    assert kinds("public final class AFactory { }", "out/AFactory.java") == []


def test_findings_report_line_and_column():
    (finding,) = lint_java("public class A {\n  int x;\n  }}\n")
    assert (finding.line, finding.col) == (3, 4)
    assert str(finding).startswith("3:4: [unbalanced]")
