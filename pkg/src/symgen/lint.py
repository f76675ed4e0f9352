"""Light-weight well-formedness checks for emitted Java compilation units."""

import re
from dataclasses import dataclass
from pathlib import PurePath

_OPEN = {"(": ")", "[": "]", "{": "}"}
_CLOSE = {v: k for k, v in _OPEN.items()}
_WORD = re.compile(r"[A-Za-z0-9_$]+")
_NUMBER = re.compile(r"(0[xX][0-9a-fA-F_]+[lL]?|[0-9][0-9_]*[lLfFdD]?|[0-9][0-9_]*[eE][+-]?[0-9]+[fFdD]?)\Z")
_JAVA_PUNCT = set("(){}[];,.@=<>!~?:+-*/&|^%")
_DIRECTIVE = re.compile(r"@(foreach|if|else|end)\b")
_PUBLIC_TYPE = re.compile(
    r"\bpublic\s+(?:(?:abstract|final|static|sealed|strictfp)\s+)*(?:class|interface|enum|record)\s+([A-Za-z_$][A-Za-z0-9_$]*)")


@dataclass(frozen=True)
class LintFinding:
    kind: str
    line: int
    col: int
    message: str

    def __str__(self):
        return f"{self.line}:{self.col}: [{self.kind}] {self.message}"


def _mask(content, findings):
    """Blank out comments and literals (keeping newlines) so later checks see only code."""
    out = list(content)
    i, n = 0, len(content)

    def blank(a, b):
        for k in range(a, b):
            if out[k] != "\n":
                out[k] = " "

    while i < n:
        ch = content[i]
        if content.startswith("//", i):
            j = content.find("\n", i)
            j = n if j < 0 else j
            blank(i, j)
            i = j
        elif content.startswith("/*", i):
            j = content.find("*/", i + 2)
            if j < 0:
                findings.append(("unterminated-comment", i, "unterminated block comment"))
                blank(i, n)
                break
            blank(i, j + 2)
            i = j + 2
        elif ch in "\"'":
            j = i + 1
            while j < n and content[j] != ch and content[j] != "\n":
                j += 2 if content[j] == "\\" else 1
            if j >= n or content[j] != ch:
                findings.append(("unterminated-literal", i, "unterminated string or char literal"))
                blank(i + 1, min(j, n))
                i = min(j, n)
                continue
            blank(i + 1, j)
            i = j + 1
        else:
            i += 1
    return "".join(out)


def lint_java(content, file_name=None):
    """Return a list of :class:`LintFinding` for ``content`` (empty when clean).

    Checks balanced ``{} () []`` outside literals and comments, leftover
    template syntax, malformed tokens, and, when ``file_name`` is given,
    that the public type is named after the file.
    """
    raw = []
    code = _mask(content, raw)

    stack = []
    for i, ch in enumerate(code):
        if ch in _OPEN:
            stack.append((ch, i))
        elif ch in _CLOSE:
            if not stack or stack[-1][0] != _CLOSE[ch]:
                raw.append(("unbalanced", i, f"unmatched '{ch}'"))
            else:
                stack.pop()
    for ch, i in stack:
        raw.append(("unbalanced", i, f"'{ch}' is never closed"))

    for m in re.finditer(r"\$\{", content):
        raw.append(("template-residue", m.start(), "unexpanded '${' left in output"))
    for m in _DIRECTIVE.finditer(code):
        raw.append(("template-residue", m.start(), f"template directive '{m.group(0)}' left in output"))

    i = 0
    while i < len(code):
        ch = code[i]
        m = _WORD.match(code, i)
        if m:
            word = m.group(0)
            if word[0].isdigit() and not _NUMBER.match(word):
                raw.append(("bad-token", i, f"'{word}' is neither a number nor an identifier"))
            i = m.end()
            continue
        if not (ch.isspace() or ch in _JAVA_PUNCT or ch in "\"'"):
            raw.append(("bad-token", i, f"unexpected character {ch!r}"))
        i += 1

    if file_name is not None:
        stem = PurePath(file_name).stem
        m = _PUBLIC_TYPE.search(code)
        if m is None:
            raw.append(("file-name", 0, f"no public type found for file '{file_name}'"))
        elif m.group(1) != stem:
            raw.append(("file-name", m.start(1),
                        f"public type '{m.group(1)}' does not match file name '{file_name}'"))

    findings = []
    for kind, offset, message in sorted(raw, key=lambda r: r[1]):
        line = content.count("\n", 0, offset) + 1
        col = offset - (content.rfind("\n", 0, offset) + 1) + 1
        findings.append(LintFinding(kind, line, col, message))
    return findings
