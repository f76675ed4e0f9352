"""A small template language whose builtins read the extended symbol table.

Syntax
------
``${expr}``
    interpolate an expression
``@foreach(v : path) ... @end``
    iterate a list; inside the body ``v`` and ``loop`` (``index``, ``first``,
    ``last``) are bound
``@if(expr) ... [@else ...] @end``
    conditional; ``@if(!expr)`` negates
``@@`` / ``$${``
    literal ``@`` / ``${``

A directive standing alone on its line consumes that whole line.  Any other
``@`` is literal text, so Java annotations need no escaping.

Expressions are dotted paths over the current node (``name``, ``fields``,
``f.typeName``; ``this`` is the node itself), string literals, or builtin
calls::

    instantiation(Type)            how to create an instance of Type
    accessor(Type.field, recv)     read a field through its accessor
    mutator(Type.field, recv, arg) write a field through its mutator
    javaName(ref)                  generated Java name of a model element
    include(name)                  expand another template here

A builtin's reference argument is a path when its head is bound, is
``this``, or is a lower-case property of the node; otherwise the dotted text
names a model element directly (``Book``, ``Book.title``).
"""

import bisect
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from pathlib import Path as FsPath

from .errors import (InfiniteIncludeError, KindError, OrderViolationError, SymgenError,
                     TemplateError, TemplateParseError, UnknownPathError)
from .genmap import RenderMode, Role
from .symtab import BUILTIN_TYPES, Symbol, SymbolKind, resolve, resolve_member

MAX_INCLUDE_DEPTH = 64
TEMPLATE_SUFFIX = ".jt"

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


# -- template structure ------------------------------------------------------

@dataclass
class Literal:
    text: str


@dataclass
class Interp:
    expr: object
    pos: tuple


@dataclass
class Foreach:
    var: str
    source: object
    body: list
    pos: tuple


@dataclass
class If:
    cond: object
    body: list
    else_body: list
    pos: tuple


@dataclass
class PathExpr:
    parts: tuple
    pos: tuple

    @property
    def text(self):
        return ".".join(self.parts)


@dataclass
class StrExpr:
    value: str
    pos: tuple


@dataclass
class CallExpr:
    func: str
    args: list
    pos: tuple


@dataclass
class NotExpr:
    expr: object
    pos: tuple


@dataclass
class Template:
    name: str
    body: list


# builtin name -> (min args, max args)
BUILTIN_ARITY = {
    "instantiation": (1, 1),
    "accessor": (2, 2),
    "mutator": (3, 3),
    "javaName": (1, 1),
    "include": (1, 1),
}


class _TemplateParser:
    def __init__(self, text, name):
        self.text = text
        self.name = name
        self.i = 0
        self._line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def pos_of(self, index):
        line = bisect.bisect_right(self._line_starts, index)
        return (line, index - self._line_starts[line - 1] + 1)

    def error(self, message, index=None):
        return TemplateParseError(self.name, self.pos_of(self.i if index is None else index), message)

    # -- body ----------------------------------------------------------------

    def parse(self):
        body, _ = self.body(frozenset(), None)
        return Template(self.name, body)

    def body(self, terminators, opener):
        text = self.text
        segments = []
        buf = []

        def flush():
            if buf:
                segments.append(Literal("".join(buf)))
                buf.clear()

        while self.i < len(text):
            ch = text[self.i]
            if ch == "$" and text.startswith("$${", self.i):
                buf.append("${")
                self.i += 3
            elif ch == "$" and text.startswith("${", self.i):
                start = self.i
                self.i += 2
                expr = self.expression()
                self.skip_space()
                if not text.startswith("}", self.i):
                    raise self.error("expected '}' to close interpolation")
                self.i += 1
                flush()
                segments.append(Interp(expr, self.pos_of(start)))
            elif ch == "@" and text.startswith("@@", self.i):
                buf.append("@")
                self.i += 2
            elif ch == "@":
                word = _IDENT.match(text, self.i + 1)
                word = word.group(0) if word else ""
                start = self.i
                if word in ("foreach", "if"):
                    self.i += 1 + len(word)
                    if not text.startswith("(", self.i):
                        raise self.error(f"expected '(' after @{word}")
                    self.i += 1
                    if word == "foreach":
                        header = self.foreach_header()
                    else:
                        header = self.expression(allow_not=True)
                    self.skip_space()
                    if not text.startswith(")", self.i):
                        raise self.error(f"expected ')' to close @{word}")
                    self.i += 1
                    self.trim_standalone(start, buf)
                    flush()
                    inner, term = self.body(frozenset({"end"}) if word == "foreach"
                                            else frozenset({"else", "end"}), (word, start))
                    if word == "foreach":
                        var, source = header
                        segments.append(Foreach(var, source, inner, self.pos_of(start)))
                    else:
                        else_body = []
                        if term == "else":
                            else_body, _ = self.body(frozenset({"end"}), (word, start))
                        segments.append(If(header, inner, else_body, self.pos_of(start)))
                elif word in ("else", "end"):
                    if word not in terminators:
                        raise self.error(f"@{word} without matching @if/@foreach", start)
                    self.i += 1 + len(word)
                    self.trim_standalone(start, buf)
                    flush()
                    return segments, word
                else:
                    buf.append("@")
                    self.i += 1
            else:
                buf.append(ch)
                self.i += 1
        if opener is not None:
            raise self.error(f"@{opener[0]} is missing its @end", opener[1])
        flush()
        return segments, None

    def trim_standalone(self, start, buf):
        """Drop the line holding a directive when nothing else is on it."""
        text = self.text
        line_start = text.rfind("\n", 0, start) + 1
        prefix = text[line_start:start]
        if prefix.strip(" \t"):
            return
        k = self.i
        while k < len(text) and text[k] in " \t":
            k += 1
        if k == len(text):
            end = k
        elif text[k] == "\n":
            end = k + 1
        elif text.startswith("\r\n", k):
            end = k + 2
        else:
            return
        if prefix:
            if "".join(buf[-len(prefix):]) != prefix:
                return
            del buf[-len(prefix):]
        self.i = end

    # -- expressions ---------------------------------------------------------

    def skip_space(self):
        while self.i < len(self.text) and self.text[self.i] in " \t":
            self.i += 1

    def ident(self, what):
        self.skip_space()
        m = _IDENT.match(self.text, self.i)
        if not m:
            raise self.error(f"expected {what}")
        self.i = m.end()
        return m.group(0)

    def foreach_header(self):
        var = self.ident("loop variable")
        self.skip_space()
        if not self.text.startswith(":", self.i):
            raise self.error("expected ':' in @foreach")
        self.i += 1
        return var, self.expression()

    def expression(self, allow_not=False):
        self.skip_space()
        start = self.i
        text = self.text
        if allow_not and text.startswith("!", self.i):
            self.i += 1
            return NotExpr(self.expression(), self.pos_of(start))
        if text.startswith('"', self.i):
            return self.string()
        head = self.ident("expression")
        self.skip_space()
        if text.startswith("(", self.i):
            if head not in BUILTIN_ARITY:
                raise self.error(f"unknown function '{head}'", start)
            self.i += 1
            args = []
            self.skip_space()
            if not text.startswith(")", self.i):
                while True:
                    args.append(self.expression())
                    self.skip_space()
                    if text.startswith(",", self.i):
                        self.i += 1
                        continue
                    break
            self.skip_space()
            if not text.startswith(")", self.i):
                raise self.error(f"expected ')' to close call to '{head}'")
            self.i += 1
            lo, hi = BUILTIN_ARITY[head]
            if not lo <= len(args) <= hi:
                raise self.error(f"'{head}' takes {lo} argument(s), got {len(args)}", start)
            return CallExpr(head, args, self.pos_of(start))
        parts = [head]
        while text.startswith(".", self.i):
            self.i += 1
            parts.append(self.ident("name after '.'"))
        return PathExpr(tuple(parts), self.pos_of(start))

    def string(self):
        start = self.i
        self.i += 1
        out = []
        text = self.text
        while self.i < len(text):
            ch = text[self.i]
            if ch == "\\" and self.i + 1 < len(text):
                out.append(text[self.i + 1])
                self.i += 2
            elif ch == '"':
                self.i += 1
                return StrExpr("".join(out), self.pos_of(start))
            elif ch == "\n":
                break
            else:
                out.append(ch)
                self.i += 1
        raise self.error("unterminated string literal", start)


def parse_template(text, name):
    """Parse template ``text``; all expressions are checked before any evaluation."""
    return _TemplateParser(text, name).parse()


# -- template lookup ---------------------------------------------------------

class TemplateRegistry:
    """Resolves template names: explicit additions, then the template dir, then embedded defaults."""

    def __init__(self, template_dir=None):
        self.template_dir = FsPath(template_dir) if template_dir else None
        self._extra = {}
        self._cache = {}

    def add(self, name, text):
        self._extra[name] = text
        self._cache.pop(name, None)

    def source(self, name):
        if name in self._extra:
            return self._extra[name]
        if self.template_dir is not None:
            path = self.template_dir / (name + TEMPLATE_SUFFIX)
            if path.is_file():
                return path.read_text(encoding="utf-8")
        embedded = resources.files("symgen") / "templates" / (name + TEMPLATE_SUFFIX)
        if embedded.is_file():
            return embedded.read_text(encoding="utf-8")
        return None

    def exists(self, name):
        return self.source(name) is not None

    def get(self, name):
        if name not in self._cache:
            text = self.source(name)
            if text is None:
                raise TemplateError(f"no template named '{name}'")
            # a file's final newline belongs to the file, not to the expansion
            if text.endswith("\n"):
                text = text[:-2] if text.endswith("\r\n") else text[:-1]
            self._cache[name] = parse_template(text, name)
        return self._cache[name]


# -- evaluation --------------------------------------------------------------

@dataclass
class Loop:
    index: int
    first: bool
    last: bool


@dataclass
class TemplateContext:
    node: object
    generator: object
    genmap: object
    mode: RenderMode = RenderMode.STRICT
    bindings: dict = field(default_factory=dict)
    templates: TemplateRegistry = None
    depth: int = 0
    # builtin calls made during expansion, as dicts (shared across nested contexts)
    trace: list = field(default_factory=list)


def _attr_name(part):
    return re.sub(r"(?<!^)([A-Z])", r"_\1", part).lower()


def _has_property(obj, part):
    if isinstance(obj, dict):
        return part in obj
    name = _attr_name(part)
    return not name.startswith("_") and hasattr(obj, name)


def _get_property(obj, part, pos):
    if isinstance(obj, dict):
        if part in obj:
            return obj[part]
    elif obj is not None:
        name = _attr_name(part)
        if not name.startswith("_") and hasattr(obj, name):
            return getattr(obj, name)
    raise UnknownPathError(f"'{part}' is not a property of {_describe(obj)}")


def _describe(obj):
    name = getattr(obj, "name", None)
    kind = type(obj).__name__
    return f"{kind} '{name}'" if isinstance(name, str) else kind


def _render_value(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (str, int, float)):
        return str(value)
    name = getattr(value, "name", None)
    if isinstance(name, str):
        return name
    raise TemplateError(f"cannot interpolate a {type(value).__name__}")


class _Evaluator:
    def __init__(self, template, ctx):
        self.template = template
        self.ctx = ctx

    def run(self):
        out = []
        self.segments(self.template.body, self.ctx, out)
        return "".join(out)

    def segments(self, segments, ctx, out):
        for seg in segments:
            if isinstance(seg, Literal):
                out.append(seg.text)
                continue
            try:
                self.segment(seg, ctx, out)
            except SymgenError as exc:
                if exc.template is None:
                    exc.template = self.template.name
                    exc.template_pos = seg.pos
                    exc.annotate(f"in template '{self.template.name}' at {seg.pos[0]}:{seg.pos[1]}")
                elif exc.template != self.template.name or exc.template_pos != seg.pos:
                    note = f"included from template '{self.template.name}' at {seg.pos[0]}:{seg.pos[1]}"
                    if note not in exc.context:
                        exc.annotate(note)
                raise

    def segment(self, seg, ctx, out):
        if isinstance(seg, Interp):
            out.append(_render_value(self.value(seg.expr, ctx)))
        elif isinstance(seg, If):
            branch = seg.body if self.value(seg.cond, ctx) else seg.else_body
            self.segments(branch, ctx, out)
        elif isinstance(seg, Foreach):
            items = self.value(seg.source, ctx)
            if items is None:
                items = []
            if isinstance(items, (str, bytes)) or not hasattr(items, "__iter__"):
                raise TemplateError(f"@foreach over '{seg.source.text}' which is not a list")
            items = list(items)
            for index, item in enumerate(items):
                bindings = dict(ctx.bindings)
                bindings[seg.var] = item
                bindings["loop"] = Loop(index, index == 0, index == len(items) - 1)
                self.segments(seg.body, replace(ctx, bindings=bindings), out)

    # -- expressions ---------------------------------------------------------

    def value(self, expr, ctx):
        if isinstance(expr, StrExpr):
            return expr.value
        if isinstance(expr, NotExpr):
            return not self.value(expr.expr, ctx)
        if isinstance(expr, PathExpr):
            return self.path(expr, ctx)
        return getattr(self, "call_" + expr.func)(expr, ctx)

    def path(self, expr, ctx):
        head, rest = expr.parts[0], expr.parts[1:]
        if head in ctx.bindings:
            obj = ctx.bindings[head]
        elif head == "this":
            obj = ctx.node
        else:
            obj = _get_property(ctx.node, head, expr.pos)
        for part in rest:
            obj = _get_property(obj, part, expr.pos)
        return obj

    def is_bound_path(self, expr, ctx):
        head = expr.parts[0]
        if head in ctx.bindings or head == "this":
            return True
        return head[:1].islower() and _has_property(ctx.node, head)

    def ref(self, expr, ctx):
        """A builtin's reference argument: a symbol, or text naming a model element."""
        if isinstance(expr, PathExpr) and not self.is_bound_path(expr, ctx):
            return expr.text
        value = self.value(expr, ctx)
        if isinstance(value, Symbol):
            return value
        sym = getattr(value, "symbol", None)
        if isinstance(sym, Symbol):
            return sym
        if isinstance(value, str):
            return value
        raise TemplateError(f"{_describe(value)} does not name a model element")

    def text(self, expr, ctx):
        value = self.value(expr, ctx)
        return _render_value(value)

    def model_symbol(self, ref, ctx, member_kinds=(SymbolKind.CD_FIELD, SymbolKind.CD_METHOD)):
        if isinstance(ref, Symbol):
            return ref
        root = ctx.genmap.global_scope
        parts = ref.split(".")
        if len(parts) > 2 or not all(parts):
            raise UnknownPathError(f"'{ref}' is not of the form Type or Type.member")
        type_sym = resolve(parts[0], SymbolKind.CD_TYPE, root)
        if len(parts) == 1:
            return type_sym
        last = None
        for kind in member_kinds:
            try:
                return resolve_member(parts[1], kind, type_sym.spanned_scope)
            except SymgenError as exc:
                last = exc
        raise last

    def record(self, ctx, builtin, source, target, output):
        ctx.trace.append({"builtin": builtin, "template": self.template.name,
                          "source": source, "target": target, "output": output})

    def java_field(self, expr, ctx, builtin):
        sym = self.model_symbol(self.ref(expr, ctx), ctx, (SymbolKind.CD_FIELD,))
        if sym.kind is SymbolKind.JAVA_FIELD:
            return sym, sym
        if sym.kind is not SymbolKind.CD_FIELD:
            raise KindError(f"{builtin}() needs a field, got {sym.kind.name} '{sym.name}'")
        return sym, ctx.genmap.lookup_mapping(sym, ctx.generator, Role.FIELD_OF)

    # -- builtins ------------------------------------------------------------

    def call_instantiation(self, expr, ctx):
        sym = self.model_symbol(self.ref(expr.args[0], ctx), ctx)
        if sym.kind is SymbolKind.CD_TYPE:
            java = ctx.genmap.lookup_mapping(sym, ctx.generator, Role.TYPE_OF)
        elif sym.kind.is_java:
            java = sym
        else:
            raise KindError(f"instantiation() needs a type, got {sym.kind.name} '{sym.name}'")
        if java.kind is not SymbolKind.JAVA_CLASS:
            raise KindError(f"'{java.name}' is a {java.kind.name} and cannot be instantiated")
        out = ctx.genmap.render_instantiation(java, ctx.mode)
        self.record(ctx, "instantiation", sym, java, out)
        return out

    def call_accessor(self, expr, ctx):
        sym, java = self.java_field(expr.args[0], ctx, "accessor")
        out = ctx.genmap.render_accessor_call(self.text(expr.args[1], ctx), java, ctx.mode)
        self.record(ctx, "accessor", sym, java, out)
        return out

    def call_mutator(self, expr, ctx):
        sym, java = self.java_field(expr.args[0], ctx, "mutator")
        out = ctx.genmap.render_mutator_call(self.text(expr.args[1], ctx), java,
                                             self.text(expr.args[2], ctx), ctx.mode)
        self.record(ctx, "mutator", sym, java, out)
        return out

    def call_javaName(self, expr, ctx):
        ref = self.ref(expr.args[0], ctx)
        if isinstance(ref, str) and (ref in BUILTIN_TYPES or ref == "void"):
            return ref
        sym = self.model_symbol(ref, ctx)
        if sym.kind.is_java:
            return sym.name
        role = {SymbolKind.CD_TYPE: Role.TYPE_OF, SymbolKind.CD_FIELD: Role.FIELD_OF,
                SymbolKind.CD_METHOD: Role.METHOD_OF}[sym.kind]
        try:
            java = ctx.genmap.lookup_mapping(sym, ctx.generator, role)
        except OrderViolationError:
            if ctx.mode is RenderMode.FALLBACK:
                return sym.name
            raise
        self.record(ctx, "javaName", sym, java, java.name)
        return java.name

    def call_include(self, expr, ctx):
        name = self.text(expr.args[0], ctx)
        if ctx.templates is None:
            raise TemplateError(f"cannot include '{name}': no template registry")
        if ctx.depth >= MAX_INCLUDE_DEPTH:
            raise InfiniteIncludeError(
                f"include depth exceeds {MAX_INCLUDE_DEPTH} while including '{name}'")
        template = ctx.templates.get(name)
        return evaluate(template, replace(ctx, depth=ctx.depth + 1))


def evaluate(template, ctx):
    """Expand ``template`` against ``ctx``; errors carry the template name and position."""
    return _Evaluator(template, ctx).run()
