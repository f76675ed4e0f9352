"""Scope-tree symbol table for class-diagram models and their generated Java."""

import enum
from dataclasses import dataclass

from .cdlang import TypeForm
from .errors import (CyclicInheritanceError, DuplicateNameError, InheritanceError,
                     KindError, SymbolNotFoundError, UnknownTypeError)

BUILTIN_TYPES = frozenset({"String", "int", "boolean", "double"})


class SymbolKind(enum.Enum):
    CD_TYPE = "CD_TYPE"
    CD_FIELD = "CD_FIELD"
    CD_METHOD = "CD_METHOD"
    JAVA_TYPE = "JAVA_TYPE"
    JAVA_CLASS = "JAVA_CLASS"
    JAVA_INTERFACE = "JAVA_INTERFACE"
    JAVA_ENUM = "JAVA_ENUM"
    JAVA_FIELD = "JAVA_FIELD"
    JAVA_METHOD = "JAVA_METHOD"

    @property
    def is_java(self):
        return self.name.startswith("JAVA_")

    @property
    def namespace(self):
        if self in _FIELD_KINDS:
            return "field"
        if self in _METHOD_KINDS:
            return "method"
        return "type"


JAVA_TYPE_FAMILY = frozenset({SymbolKind.JAVA_TYPE, SymbolKind.JAVA_CLASS,
                              SymbolKind.JAVA_INTERFACE, SymbolKind.JAVA_ENUM})
_FIELD_KINDS = frozenset({SymbolKind.CD_FIELD, SymbolKind.JAVA_FIELD})
_METHOD_KINDS = frozenset({SymbolKind.CD_METHOD, SymbolKind.JAVA_METHOD})

JAVA_KIND_FOR_FORM = {
    TypeForm.CLASS: SymbolKind.JAVA_CLASS,
    TypeForm.INTERFACE: SymbolKind.JAVA_INTERFACE,
    TypeForm.ENUM: SymbolKind.JAVA_ENUM,
}


def kind_matches(query, actual):
    """A JAVA_TYPE query accepts any of the concrete Java type kinds."""
    if query is SymbolKind.JAVA_TYPE:
        return actual in JAVA_TYPE_FAMILY
    return query is actual


@dataclass(frozen=True)
class TypePayload:
    form: TypeForm
    is_abstract: bool = False
    super_name: str = None


@dataclass(frozen=True)
class FieldPayload:
    type_name: str


@dataclass(frozen=True)
class MethodPayload:
    return_type_name: str
    params: tuple = ()  # (name, type_name) pairs

    @property
    def signature(self):
        args = ", ".join(f"{t} {n}" for n, t in self.params)
        return f"{self.return_type_name}({args})"


class Symbol:
    """One named model element. Identity matters: mappings refer to symbol objects."""

    def __init__(self, name, kind, pos=None, payload=None):
        self.name = name
        self.kind = kind
        self.pos = pos
        self.payload = payload
        self.scope = None
        self.shadows = False
        self.generator_info = None
        # the scope this symbol opens (type symbols only)
        self.spanned_scope = None

    @property
    def qualified_name(self):
        owner = self.scope.owner if self.scope is not None else None
        if owner is not None and self.kind.namespace != "type":
            return f"{owner.name}.{self.name}"
        return self.name

    def __repr__(self):
        return f"<Symbol {self.kind.name} {self.qualified_name}>"


class Scope:
    def __init__(self, name=None, enclosing=None, owner=None):
        self.name = name
        self.enclosing = enclosing
        self.owner = owner
        self.symbols = []
        self.sub_scopes = []
        self._index = {}
        self._frozen = False

    def __repr__(self):
        return f"<Scope {self.display_name}>"

    @property
    def display_name(self):
        return self.name if self.name is not None else "<global>"

    @property
    def root(self):
        scope = self
        while scope.enclosing is not None:
            scope = scope.enclosing
        return scope

    def _check_mutable(self):
        if self.root._frozen:
            raise RuntimeError("symbol table is frozen")

    def add(self, symbol):
        self._check_mutable()
        key = (symbol.name, symbol.kind.namespace)
        if key in self._index:
            raise DuplicateNameError(symbol.name, symbol.pos,
                                     f"'{symbol.name}' is already declared in {self.display_name}")
        self._index[key] = symbol
        self.symbols.append(symbol)
        symbol.scope = self
        return symbol

    def add_sub_scope(self, scope):
        self._check_mutable()
        scope.enclosing = self
        self.sub_scopes.append(scope)
        return scope

    def open_scope(self, symbol):
        """Create the sub-scope spanned by a type symbol."""
        scope = self.add_sub_scope(Scope(symbol.name, owner=symbol))
        symbol.spanned_scope = scope
        return scope

    def local(self, name, kind):
        symbol = self._index.get((name, kind.namespace))
        if symbol is not None and kind_matches(kind, symbol.kind):
            return symbol
        return None

    def sub_scope(self, name):
        for scope in self.sub_scopes:
            if scope.name == name:
                return scope
        return None

    def chain(self):
        scope = self
        while scope is not None:
            yield scope
            scope = scope.enclosing

    def walk(self):
        """Depth-first, document-order traversal of this scope and its descendants."""
        yield self
        for sub in self.sub_scopes:
            yield from sub.walk()

    def freeze(self):
        self.root._frozen = True

    @property
    def frozen(self):
        return self.root._frozen


def iter_symbols(scope):
    for s in scope.walk():
        yield from s.symbols


def resolve(name, kind, from_scope):
    """Nearest symbol named ``name`` of ``kind``, searching outwards from ``from_scope``."""
    for scope in from_scope.chain():
        found = scope.local(name, kind)
        if found is not None:
            return found
    raise SymbolNotFoundError(name, kind, from_scope.name)


def super_type(type_symbol):
    """The symbol a CD type extends, or None."""
    payload = type_symbol.payload
    if payload is None or payload.super_name is None:
        return None
    return type_symbol.scope.local(payload.super_name, type_symbol.kind)


def resolve_member(name, kind, from_scope):
    """Look up a member in a type scope, then along the owner's extends-chain."""
    owner = from_scope.owner
    if owner is None:
        raise KindError(f"{from_scope.display_name} is not a type scope")
    seen = set()
    current = owner
    while current is not None and current not in seen:
        seen.add(current)
        found = current.spanned_scope.local(name, kind)
        if found is not None:
            return found
        current = super_type(current)
    raise SymbolNotFoundError(name, kind, from_scope.name)


def resolve_field_considering_inheritance(name, from_scope):
    return resolve_member(name, SymbolKind.CD_FIELD, from_scope)


def _check_type_ref(type_name, declared, pos, allow_void=False):
    if type_name in BUILTIN_TYPES or type_name in declared:
        return
    if allow_void and type_name == "void":
        return
    raise UnknownTypeError(type_name, pos)


def _inheritance_cycle(nodes):
    by_name = {n.name: n for n in nodes}
    for start in nodes:
        path = []
        current = start
        while current is not None and current.name not in path:
            path.append(current.name)
            current = by_name.get(current.super_name) if current.super_name else None
        if current is not None and current.name == start.name:
            return path
    return None


def build_symbol_table(ast):
    """Build the global scope for ``ast``; links each AST node to its symbol."""
    declared = {node.name: node for node in ast.types}

    for node in ast.types:
        if node.super_name is None:
            continue
        target = declared.get(node.super_name)
        if target is None:
            raise UnknownTypeError(node.super_name, node.super_pos or node.pos)
        if not target.is_class:
            raise InheritanceError(
                f"class '{node.name}' cannot extend {target.form.value} '{target.name}'",
                node.super_pos or node.pos)
    cycle = _inheritance_cycle(ast.types)
    if cycle:
        raise CyclicInheritanceError(cycle, declared[cycle[0]].pos)

    for node in ast.types:
        for f in node.fields:
            _check_type_ref(f.type_name, declared, f.pos)
        for m in node.methods:
            _check_type_ref(m.return_type_name, declared, m.pos, allow_void=True)
            for p in m.params:
                _check_type_ref(p.type_name, declared, p.pos)

    root = Scope()
    for node in ast.types:
        add_type_node(root, node)
    compute_shadowing(root)
    return root


def add_type_node(root, node):
    """Enter a CD type node (and its members) into the global scope."""
    sym = root.add(Symbol(node.name, SymbolKind.CD_TYPE, node.pos,
                          TypePayload(node.form, node.is_abstract, node.super_name)))
    node.symbol = sym
    scope = root.open_scope(sym)
    for f in node.fields:
        f.symbol = scope.add(Symbol(f.name, SymbolKind.CD_FIELD, f.pos, FieldPayload(f.type_name)))
    for m in node.methods:
        params = tuple((p.name, p.type_name) for p in m.params)
        m.symbol = scope.add(Symbol(m.name, SymbolKind.CD_METHOD, m.pos,
                                    MethodPayload(m.return_type_name, params)))
    return sym


def compute_shadowing(root):
    for type_sym in root.symbols:
        if type_sym.kind is not SymbolKind.CD_TYPE:
            continue
        for sym in type_sym.spanned_scope.symbols:
            if sym.kind is SymbolKind.CD_FIELD:
                sym.shadows = _ancestor_declares(type_sym, sym.name)


def _ancestor_declares(type_sym, field_name):
    ancestor = super_type(type_sym)
    seen = {type_sym}
    while ancestor is not None and ancestor not in seen:
        if ancestor.spanned_scope.local(field_name, SymbolKind.CD_FIELD) is not None:
            return True
        seen.add(ancestor)
        ancestor = super_type(ancestor)
    return False
