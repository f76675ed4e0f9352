"""Textual class-diagram language: lexer, recursive-descent parser and AST.

Concrete syntax::

    classdiagram Shop {
        abstract class Item { String title; }
        class Book extends Item { int pages; String describe(String prefix); }
        interface Priced { double price(); }
        enum Format { HARDCOVER, PAPERBACK }
    }

``//`` starts a line comment.  LF and CRLF line endings are accepted.
"""

import enum
from dataclasses import dataclass, field

from .errors import DuplicateNameError, ParseError

DSL_KEYWORDS = frozenset({"classdiagram", "class", "interface", "enum", "abstract", "extends"})

# Declared names become Java names, so Java's reserved words are refused.
JAVA_RESERVED = frozenset("""
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package
    private protected public return short static strictfp super switch
    synchronized this throw throws transient try void volatile while
    true false null var record yield sealed permits
""".split())

PRIMITIVE_TYPES = frozenset({"int", "boolean", "double", "void"})

_PUNCT = "{}(),;"


@dataclass(frozen=True)
class SourcePos:
    file: str
    line: int
    col: int

    def __post_init__(self):
        if self.line < 1 or self.col < 1:
            raise ValueError(f"invalid source position {self.line}:{self.col}")

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col}"


class TypeForm(enum.Enum):
    CLASS = "class"
    INTERFACE = "interface"
    ENUM = "enum"


@dataclass
class CdParam:
    name: str
    type_name: str
    pos: SourcePos


@dataclass
class CdFieldNode:
    name: str
    type_name: str
    pos: SourcePos
    attached_templates: list = field(default_factory=list)
    # accessor/mutator method names, filled in by the add-accessors transformation
    accessor: str = None
    mutator: str = None
    symbol: object = field(default=None, compare=False, repr=False)


@dataclass
class CdMethodNode:
    name: str
    return_type_name: str
    params: list
    pos: SourcePos
    attached_templates: list = field(default_factory=list)
    symbol: object = field(default=None, compare=False, repr=False)

    @property
    def is_void(self):
        return self.return_type_name == "void"

    @property
    def default_value(self):
        if self.return_type_name in ("int", "double"):
            return "0"
        if self.return_type_name == "boolean":
            return "false"
        if self.is_void:
            return ""
        return "null"


@dataclass
class CdTypeNode:
    name: str
    form: TypeForm
    pos: SourcePos
    is_abstract: bool = False
    super_name: str = None
    fields: list = field(default_factory=list)
    methods: list = field(default_factory=list)
    enum_constants: list = field(default_factory=list)
    attached_templates: list = field(default_factory=list)
    # template fragments expanded inside the body by the default class template
    member_templates: list = field(default_factory=list)
    super_pos: SourcePos = None
    # name of the type this node was synthesized for (factories), else None
    factory_of: str = None
    symbol: object = field(default=None, compare=False, repr=False)

    @property
    def is_class(self):
        return self.form is TypeForm.CLASS

    @property
    def is_interface(self):
        return self.form is TypeForm.INTERFACE

    @property
    def is_enum(self):
        return self.form is TypeForm.ENUM


@dataclass
class CdAst:
    diagram_name: str
    types: list
    pos: SourcePos

    def type_named(self, name):
        for node in self.types:
            if node.name == name:
                return node
        return None


@dataclass(frozen=True)
class Token:
    kind: str  # "id", "kw", "punct", "eof"
    value: str
    pos: SourcePos


def _is_ident_start(ch):
    return ("a" <= ch <= "z") or ("A" <= ch <= "Z")


def _is_ident_part(ch):
    return _is_ident_start(ch) or ("0" <= ch <= "9") or ch == "_"


def tokenize(text, file_name="<input>"):
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
        elif ch in " \t\r\f":
            i, col = i + 1, col + 1
        elif ch == "/" and text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
                col += 1
        elif _is_ident_start(ch):
            start, start_col = i, col
            while i < n and _is_ident_part(text[i]):
                i += 1
                col += 1
            word = text[start:i]
            kind = "kw" if word in DSL_KEYWORDS else "id"
            tokens.append(Token(kind, word, SourcePos(file_name, line, start_col)))
        elif ch in _PUNCT:
            tokens.append(Token("punct", ch, SourcePos(file_name, line, col)))
            i, col = i + 1, col + 1
        else:
            raise ParseError(f"unexpected character {ch!r}", SourcePos(file_name, line, col))
    tokens.append(Token("eof", "", SourcePos(file_name, line, col)))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    @property
    def cur(self):
        return self.tokens[self.i]

    def at(self, kind, value=None):
        tok = self.cur
        return tok.kind == kind and (value is None or tok.value == value)

    def advance(self):
        tok = self.cur
        if tok.kind != "eof":
            self.i += 1
        return tok

    def expect(self, kind, value=None, what=None):
        if not self.at(kind, value):
            tok = self.cur
            wanted = what or (repr(value) if value else kind)
            found = "end of input" if tok.kind == "eof" else repr(tok.value)
            raise ParseError(f"expected {wanted}, found {found}", tok.pos)
        return self.advance()

    def declared_name(self, what):
        tok = self.expect("id", what=what)
        if tok.value in JAVA_RESERVED:
            raise ParseError(f"'{tok.value}' is a reserved word and cannot name a {what}", tok.pos)
        return tok

    def type_ref(self):
        tok = self.expect("id", what="type name")
        if tok.value in JAVA_RESERVED and tok.value not in PRIMITIVE_TYPES:
            raise ParseError(f"'{tok.value}' is not a type name", tok.pos)
        return tok

    # -- grammar -------------------------------------------------------------

    def diagram(self):
        self.expect("kw", "classdiagram")
        name = self.declared_name("diagram")
        self.expect("punct", "{")
        types = []
        seen = set()
        while not self.at("punct", "}"):
            if self.at("eof"):
                raise ParseError("expected '}' to close the class diagram", self.cur.pos)
            node = self.type_decl()
            if node.name in seen:
                raise DuplicateNameError(node.name, node.pos, f"duplicate type name '{node.name}'")
            seen.add(node.name)
            types.append(node)
        self.advance()
        self.expect("eof", what="end of input")
        return CdAst(name.value, types, name.pos)

    def type_decl(self):
        if self.at("kw", "abstract"):
            self.advance()
            if not self.at("kw", "class"):
                raise ParseError("'abstract' must be followed by 'class'", self.cur.pos)
            return self.class_decl(is_abstract=True)
        if self.at("kw", "class"):
            return self.class_decl(is_abstract=False)
        if self.at("kw", "interface"):
            return self.interface_decl()
        if self.at("kw", "enum"):
            return self.enum_decl()
        tok = self.cur
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        raise ParseError(f"expected a type declaration, found {found}", tok.pos)

    def class_decl(self, is_abstract):
        self.expect("kw", "class")
        name = self.declared_name("class")
        node = CdTypeNode(name.value, TypeForm.CLASS, name.pos, is_abstract=is_abstract)
        if self.at("kw", "extends"):
            self.advance()
            sup = self.declared_name("superclass")
            node.super_name, node.super_pos = sup.value, sup.pos
        self.members(node, allow_fields=True)
        return node

    def interface_decl(self):
        self.expect("kw", "interface")
        name = self.declared_name("interface")
        node = CdTypeNode(name.value, TypeForm.INTERFACE, name.pos)
        self.members(node, allow_fields=False)
        return node

    def enum_decl(self):
        self.expect("kw", "enum")
        name = self.declared_name("enum")
        node = CdTypeNode(name.value, TypeForm.ENUM, name.pos)
        self.expect("punct", "{")
        seen = set()
        while True:
            const = self.declared_name("enum constant")
            if const.value in seen:
                raise DuplicateNameError(const.value, const.pos,
                                         f"duplicate enum constant '{const.value}'")
            seen.add(const.value)
            node.enum_constants.append(const.value)
            if not self.at("punct", ","):
                break
            self.advance()
        self.expect("punct", "}")
        return node

    def members(self, node, allow_fields):
        self.expect("punct", "{")
        field_names, method_names = set(), set()
        while not self.at("punct", "}"):
            member = self.member()
            if isinstance(member, CdFieldNode):
                if not allow_fields:
                    raise ParseError("interfaces cannot declare fields", member.pos)
                if member.name in field_names:
                    raise DuplicateNameError(member.name, member.pos,
                                             f"duplicate field '{member.name}' in '{node.name}'")
                field_names.add(member.name)
                node.fields.append(member)
            else:
                if member.name in method_names:
                    raise DuplicateNameError(member.name, member.pos,
                                             f"duplicate method '{member.name}' in '{node.name}'")
                method_names.add(member.name)
                node.methods.append(member)
        self.advance()

    def member(self):
        type_tok = self.type_ref()
        name = self.declared_name("member")
        if self.at("punct", ";"):
            self.advance()
            if type_tok.value == "void":
                raise ParseError("a field cannot have type 'void'", type_tok.pos)
            return CdFieldNode(name.value, type_tok.value, name.pos)
        if not self.at("punct", "("):
            self.expect("punct", ";", what="';' or '('")
        self.advance()
        params = []
        seen = set()
        if not self.at("punct", ")"):
            while True:
                ptype = self.type_ref()
                if ptype.value == "void":
                    raise ParseError("a parameter cannot have type 'void'", ptype.pos)
                pname = self.declared_name("parameter")
                if pname.value in seen:
                    raise DuplicateNameError(pname.value, pname.pos,
                                             f"duplicate parameter '{pname.value}'")
                seen.add(pname.value)
                params.append(CdParam(pname.value, ptype.value, pname.pos))
                if not self.at("punct", ","):
                    break
                self.advance()
        self.expect("punct", ")")
        self.expect("punct", ";")
        return CdMethodNode(name.value, type_tok.value, params, name.pos)


def parse_cd(text, file_name="<input>"):
    """Parse class-diagram source into a :class:`CdAst`.

    ``text`` may be ``str`` or UTF-8 ``bytes``.  Raises :class:`ParseError`
    on malformed input and :class:`DuplicateNameError` on clashing names.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8 (byte offset {exc.start})",
                             SourcePos(file_name, 1, 1)) from None
    if text.startswith("\ufeff"):
        text = text[1:]
    return _Parser(tokenize(text, file_name)).diagram()


def iter_nodes(ast):
    """Yield every AST node in document order (root first)."""
    yield ast
    for node in ast.types:
        yield node
        yield from node.fields
        for method in node.methods:
            yield method
            yield from method.params
