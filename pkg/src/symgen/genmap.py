"""Output-specific generator information kept alongside the symbol table.

Source (class-diagram) symbols are mapped to the Java symbols they generate
into, separately for every registered generator id.  Java class and field
symbols additionally carry generator info: how instances are created and
which methods read or write a field.  Everything is registered while the
generator runs; asking for information that has not been registered yet
raises :class:`OrderViolationError` (or :class:`MissingGeneratorInfoError`
for unset info in strict rendering).
"""

import enum
import re
from dataclasses import dataclass, field

from .errors import (DuplicateGeneratorError, KindError, MappingConflictError,
                     MissingGeneratorInfoError, OrderViolationError, PreconditionError)
from .symtab import (JAVA_KIND_FOR_FORM, JAVA_TYPE_FAMILY, FieldPayload, MethodPayload,
                     Scope, Symbol, SymbolKind, TypePayload)

_JAVA_IDENT = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*\Z")


class Role(enum.Enum):
    TYPE_OF = "TYPE_OF"
    FIELD_OF = "FIELD_OF"
    ACCESSOR_OF = "ACCESSOR_OF"
    MUTATOR_OF = "MUTATOR_OF"
    METHOD_OF = "METHOD_OF"
    BACKING_FIELD_OF = "BACKING_FIELD_OF"


class Strategy(enum.Enum):
    DIRECT_NEW = "DIRECT_NEW"
    FACTORY = "FACTORY"
    SINGLETON = "SINGLETON"
    CUSTOM = "CUSTOM"


class RenderMode(enum.Enum):
    STRICT = "STRICT"
    FALLBACK = "FALLBACK"


# source kind -> role -> allowed target kinds
ROLE_TABLE = {
    SymbolKind.CD_TYPE: {Role.TYPE_OF: JAVA_TYPE_FAMILY - {SymbolKind.JAVA_TYPE}},
    SymbolKind.CD_FIELD: {Role.FIELD_OF: {SymbolKind.JAVA_FIELD},
                          Role.ACCESSOR_OF: {SymbolKind.JAVA_METHOD},
                          Role.MUTATOR_OF: {SymbolKind.JAVA_METHOD}},
    SymbolKind.CD_METHOD: {Role.METHOD_OF: {SymbolKind.JAVA_METHOD},
                           Role.BACKING_FIELD_OF: {SymbolKind.JAVA_FIELD}},
}

# which built-in transformation normally registers a role
PROVIDED_BY = {
    Role.TYPE_OF: "map-defaults",
    Role.FIELD_OF: "map-defaults",
    Role.METHOD_OF: "map-defaults",
    Role.ACCESSOR_OF: "add-accessors",
    Role.MUTATOR_OF: "add-accessors",
    Role.BACKING_FIELD_OF: "a backing-field mapping",
}


@dataclass(frozen=True)
class GeneratorId:
    id: str

    def __str__(self):
        return self.id


@dataclass
class JavaClassGI:
    instantiation_code: str = None
    strategy: Strategy = Strategy.DIRECT_NEW
    # False once a transformation declares that `new` must not be used
    direct_new_allowed: bool = True

    def to_json(self):
        data = {"instantiation": self.instantiation_code, "strategy": self.strategy.value}
        if not self.direct_new_allowed:
            data["directNew"] = False
        return data


@dataclass
class JavaFieldGI:
    accessor_code: str = None
    mutator_code: str = None

    def to_json(self):
        return {"accessor": self.accessor_code, "mutator": self.mutator_code}


@dataclass(eq=False)
class SymbolMapping:
    source: Symbol
    generator: GeneratorId
    targets: list = field(default_factory=list)  # (target symbol, Role) pairs

    def target(self, role):
        for sym, r in self.targets:
            if r is role:
                return sym
        return None


def _require_ident(name, what):
    if not isinstance(name, str) or not _JAVA_IDENT.match(name):
        raise PreconditionError(f"{what} {name!r} is not a valid Java identifier")


def _require_kind(symbol, kinds, operation):
    if symbol.kind not in kinds:
        expected = "/".join(sorted(k.name for k in kinds))
        raise KindError(f"{operation} expects a {expected} symbol, got "
                        f"{symbol.kind.name} '{symbol.name}'")


class GeneratorMap:
    """Per-generator symbol mappings plus the generation-time registration API."""

    def __init__(self, global_scope):
        self.global_scope = global_scope
        self._generators = {}
        self._mappings = {}  # (source symbol, generator id) -> SymbolMapping
        self._order = []     # mappings in creation order, for stable dumps

    # -- generators ----------------------------------------------------------

    def register_generator(self, gen_id):
        if isinstance(gen_id, GeneratorId):
            gen_id = gen_id.id
        if not isinstance(gen_id, str) or not gen_id:
            raise PreconditionError("generator id must be a non-empty string")
        if gen_id in self._generators:
            raise DuplicateGeneratorError(gen_id)
        scope = self.global_scope.add_sub_scope(Scope(gen_id))
        handle = GeneratorId(gen_id)
        self._generators[gen_id] = scope
        return handle

    @property
    def generators(self):
        return [GeneratorId(g) for g in self._generators]

    def generator_scope(self, gen):
        gen_id = gen.id if isinstance(gen, GeneratorId) else gen
        scope = self._generators.get(gen_id)
        if scope is None:
            raise OrderViolationError(f"generator '{gen_id}' is not registered",
                                      needed=f"register_generator({gen_id!r})")
        return scope

    def _handle(self, gen):
        return GeneratorId(gen) if isinstance(gen, str) else gen

    # -- mappings ------------------------------------------------------------

    def _mapping(self, source, gen, create=False):
        key = (source, self._handle(gen).id)
        mapping = self._mappings.get(key)
        if mapping is None and create:
            mapping = SymbolMapping(source, self._handle(gen))
            self._mappings[key] = mapping
            self._order.append(mapping)
        return mapping

    def _record(self, source, gen, target, role):
        allowed = ROLE_TABLE.get(source.kind, {}).get(role)
        if allowed is None or target.kind not in allowed:
            raise KindError(f"cannot map {source.kind.name} '{source.name}' to "
                            f"{target.kind.name} '{target.name}' as {role.name}")
        self._mapping(source, gen, create=True).targets.append((target, role))

    def find_mapping(self, source, gen, role):
        """Like :meth:`lookup_mapping` but returns None when absent."""
        mapping = self._mapping(source, gen)
        return mapping.target(role) if mapping is not None else None

    def lookup_mapping(self, source, gen, role):
        self.generator_scope(gen)
        target = self.find_mapping(source, gen, role)
        if target is None:
            needed = PROVIDED_BY.get(role)
            raise OrderViolationError(
                f"{source.kind.name} '{source.qualified_name}' has no {role.name} mapping "
                f"under generator '{self._handle(gen).id}'",
                source=source, role=role, needed=needed)
        return target

    def mappings(self, gen=None):
        gen_id = None if gen is None else self._handle(gen).id
        return [m for m in self._order if gen_id is None or m.generator.id == gen_id]

    def validate(self):
        """Return a list of problems found in the stored mappings (empty when well-formed)."""
        problems = []
        for m in self._order:
            roles = ROLE_TABLE.get(m.source.kind)
            if roles is None:
                problems.append(f"{m.source!r} cannot be a mapping source")
                continue
            counts = {}
            for target, role in m.targets:
                if role not in roles or target.kind not in roles[role]:
                    problems.append(f"{m.source!r} -> {target!r} as {role.name} violates the role table")
                counts[role] = counts.get(role, 0) + 1
            for role, n in counts.items():
                if n > 1:
                    problems.append(f"{m.source!r} has {n} {role.name} targets")
        return problems

    # -- the registration API ------------------------------------------------

    def _owner_java_type(self, source, gen, operation):
        self.generator_scope(gen)
        owner = source.scope.owner if source.scope is not None else None
        if owner is None:
            raise KindError(f"{operation}: '{source.name}' is not a member of a type")
        java_owner = self.find_mapping(owner, gen, Role.TYPE_OF)
        if java_owner is None:
            raise OrderViolationError(
                f"{operation}({source.qualified_name}): owning type '{owner.name}' is not "
                f"mapped under generator '{self._handle(gen).id}'",
                source=owner, role=Role.TYPE_OF, needed="map-defaults")
        return java_owner

    def _existing(self, source, gen, role, name, operation):
        current = self.find_mapping(source, gen, role)
        if current is None:
            return None
        if current.name != name:
            raise MappingConflictError(
                f"{operation}: '{source.qualified_name}' is already mapped to "
                f"'{current.name}' under generator '{self._handle(gen).id}', not '{name}'")
        return current

    def _claim(self, scope, symbol, operation):
        if any(s.name == symbol.name and s.kind.namespace == symbol.kind.namespace
               for s in scope.symbols):
            raise MappingConflictError(
                f"{operation}: Java name '{symbol.name}' is already used in {scope.display_name}")
        return scope.add(symbol)

    def to_java_type(self, s, class_name, gen):
        _require_kind(s, {SymbolKind.CD_TYPE}, "to_java_type")
        _require_ident(class_name, "class name")
        scope = self.generator_scope(gen)
        existing = self._existing(s, gen, Role.TYPE_OF, class_name, "to_java_type")
        if existing is not None:
            return existing
        payload = s.payload
        kind = JAVA_KIND_FOR_FORM[payload.form]
        target = self._claim(scope, Symbol(class_name, kind, s.pos,
                                           TypePayload(payload.form, payload.is_abstract)),
                             "to_java_type")
        scope.open_scope(target)
        if kind is SymbolKind.JAVA_CLASS:
            target.generator_info = JavaClassGI(direct_new_allowed=not payload.is_abstract)
        self._record(s, gen, target, Role.TYPE_OF)
        return target

    def to_java_field(self, s, field_name, gen):
        _require_kind(s, {SymbolKind.CD_FIELD}, "to_java_field")
        _require_ident(field_name, "field name")
        java_owner = self._owner_java_type(s, gen, "to_java_field")
        existing = self._existing(s, gen, Role.FIELD_OF, field_name, "to_java_field")
        if existing is not None:
            return existing
        target = self._claim(java_owner.spanned_scope,
                             Symbol(field_name, SymbolKind.JAVA_FIELD, s.pos,
                                    FieldPayload(s.payload.type_name)),
                             "to_java_field")
        target.shadows = s.shadows
        target.generator_info = JavaFieldGI()
        self._record(s, gen, target, Role.FIELD_OF)
        return target

    def to_java_method(self, s, method_name, gen):
        _require_kind(s, {SymbolKind.CD_METHOD}, "to_java_method")
        _require_ident(method_name, "method name")
        java_owner = self._owner_java_type(s, gen, "to_java_method")
        existing = self._existing(s, gen, Role.METHOD_OF, method_name, "to_java_method")
        if existing is not None:
            return existing
        target = self._claim(java_owner.spanned_scope,
                             Symbol(method_name, SymbolKind.JAVA_METHOD, s.pos, s.payload),
                             "to_java_method")
        self._record(s, gen, target, Role.METHOD_OF)
        return target

    def to_java_backing_field(self, s, field_name, gen):
        """Map a CD method to a Java field (direct variable access instead of a method)."""
        _require_kind(s, {SymbolKind.CD_METHOD}, "to_java_backing_field")
        _require_ident(field_name, "field name")
        java_owner = self._owner_java_type(s, gen, "to_java_backing_field")
        existing = self._existing(s, gen, Role.BACKING_FIELD_OF, field_name, "to_java_backing_field")
        if existing is not None:
            return existing
        target = self._claim(java_owner.spanned_scope,
                             Symbol(field_name, SymbolKind.JAVA_FIELD, s.pos,
                                    FieldPayload(s.payload.return_type_name)),
                             "to_java_backing_field")
        target.generator_info = JavaFieldGI()
        self._record(s, gen, target, Role.BACKING_FIELD_OF)
        return target

    def _map_field_method(self, s, method_name, gen, role):
        operation = f"map {role.name}"
        _require_kind(s, {SymbolKind.CD_FIELD}, operation)
        _require_ident(method_name, "method name")
        java_owner = self._owner_java_type(s, gen, operation)
        existing = self._existing(s, gen, role, method_name, operation)
        if existing is not None:
            return existing
        if role is Role.ACCESSOR_OF:
            payload = MethodPayload(s.payload.type_name)
        else:
            payload = MethodPayload("void", ((s.name, s.payload.type_name),))
        target = self._claim(java_owner.spanned_scope,
                             Symbol(method_name, SymbolKind.JAVA_METHOD, s.pos, payload),
                             operation)
        self._record(s, gen, target, role)
        return target

    def map_accessor(self, s, method_name, gen):
        """Create the Java accessor method for CD field ``s`` (role ACCESSOR_OF)."""
        return self._map_field_method(s, method_name, gen, Role.ACCESSOR_OF)

    def map_mutator(self, s, method_name, gen):
        """Create the Java mutator method for CD field ``s`` (role MUTATOR_OF)."""
        return self._map_field_method(s, method_name, gen, Role.MUTATOR_OF)

    def declare_java_method(self, java_type, method_name, payload=None):
        """Add a Java method with no class-diagram origin (e.g. ``getInstance``).

        Idempotent for an existing method of the same name.
        """
        _require_kind(java_type, JAVA_TYPE_FAMILY, "declare_java_method")
        _require_ident(method_name, "method name")
        scope = java_type.spanned_scope
        existing = scope.local(method_name, SymbolKind.JAVA_METHOD)
        if existing is not None:
            return existing
        return scope.add(Symbol(method_name, SymbolKind.JAVA_METHOD, java_type.pos,
                                payload or MethodPayload(java_type.name)))

    # -- generator info ------------------------------------------------------

    def add_instantiation(self, c, code):
        _require_kind(c, {SymbolKind.JAVA_CLASS}, "add_instantiation")
        if not code:
            raise PreconditionError("instantiation code must be non-empty")
        gi = c.generator_info
        gi.instantiation_code = code
        gi.strategy = Strategy.CUSTOM

    def forbid_direct_instantiation(self, c):
        """Declare that ``new C()`` must not be emitted for ``c``."""
        _require_kind(c, {SymbolKind.JAVA_CLASS}, "forbid_direct_instantiation")
        c.generator_info.direct_new_allowed = False

    def set_accessor(self, f, code):
        _require_kind(f, {SymbolKind.JAVA_FIELD}, "set_accessor")
        if not code:
            raise PreconditionError("accessor code must be non-empty")
        f.generator_info.accessor_code = code

    def set_mutator(self, f, code):
        _require_kind(f, {SymbolKind.JAVA_FIELD}, "set_mutator")
        if not code:
            raise PreconditionError("mutator code must be non-empty")
        f.generator_info.mutator_code = code

    # -- rendering -----------------------------------------------------------

    def render_instantiation(self, c, mode=RenderMode.STRICT):
        _require_kind(c, {SymbolKind.JAVA_CLASS}, "render_instantiation")
        gi = c.generator_info
        if gi.strategy is not Strategy.DIRECT_NEW and gi.instantiation_code:
            return gi.instantiation_code
        if mode is RenderMode.STRICT and not gi.direct_new_allowed:
            raise MissingGeneratorInfoError(
                c, "instantiation",
                f"class '{c.name}' may not be instantiated with 'new' and has no "
                f"instantiation code registered")
        return f"new {c.name}()"

    def render_accessor_call(self, receiver, f, mode=RenderMode.STRICT):
        _require_kind(f, {SymbolKind.JAVA_FIELD}, "render_accessor_call")
        if not receiver:
            raise PreconditionError("accessor call needs a receiver expression")
        code = f.generator_info.accessor_code
        if code:
            return f"{receiver}.{code}()"
        if mode is RenderMode.STRICT:
            raise MissingGeneratorInfoError(
                f, "accessor", f"field '{f.qualified_name}' has no accessor registered "
                               f"(run add-accessors first)")
        return f"{receiver}.{f.name}"

    def render_mutator_call(self, receiver, f, arg, mode=RenderMode.STRICT):
        _require_kind(f, {SymbolKind.JAVA_FIELD}, "render_mutator_call")
        if not receiver:
            raise PreconditionError("mutator call needs a receiver expression")
        if not arg:
            raise PreconditionError("a mutator takes exactly one argument expression")
        code = f.generator_info.mutator_code
        if code:
            return f"{receiver}.{code}({arg})"
        if mode is RenderMode.STRICT:
            raise MissingGeneratorInfoError(
                f, "mutator", f"field '{f.qualified_name}' has no mutator registered "
                              f"(run add-accessors first)")
        return f"{receiver}.{f.name} = {arg}"

    def to_json(self):
        return [
            {"source": m.source.qualified_name, "generator": m.generator.id,
             "role": role.value, "target": target.qualified_name}
            for m in self._order for target, role in m.targets
        ]
