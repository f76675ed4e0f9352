"""Transformation-then-template generation pipeline.

A run builds the symbol table, registers the generator, applies the
configured transformations in order (they rewrite the AST, attach templates
and register generator info), then expands one template set per type node
and collects the resulting Java files.  Nothing is written to disk here.
"""

import copy
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

from .cdlang import CdMethodNode, CdTypeNode, TypeForm
from .errors import (ConfigError, KindError, OrderViolationError, SymbolNotFoundError,
                     SymgenError, TemplateError)
from .genmap import GeneratorMap, RenderMode, Role
from .symtab import SymbolKind, add_type_node, build_symbol_table
from .tmpl import TemplateContext, TemplateRegistry, evaluate

DEFAULT_TEMPLATES = {
    TypeForm.CLASS: "class",
    TypeForm.INTERFACE: "interface",
    TypeForm.ENUM: "enum",
}
FACTORY_TEMPLATE = "factory-class"
SINGLETON_TEMPLATE = "singleton-members"

DEFAULT_TRANSFORMS = ("map-defaults", "add-accessors")


@dataclass
class GenConfig:
    generator_id: str = "cd2java"
    transforms: list = field(default_factory=lambda: list(DEFAULT_TRANSFORMS))
    mode: RenderMode = RenderMode.STRICT
    accessors: bool = True
    output_dir: str = "out"
    template_dir: Optional[str] = None

    def __post_init__(self):
        if not self.generator_id:
            raise ConfigError("generator id must be non-empty")
        for spec in self.transforms:
            parse_transform(spec)


@dataclass
class EmittedFile:
    relative_path: str
    content: str


@dataclass
class GenerationState:
    ast: object
    symtab: object
    genmap: GeneratorMap
    generator: object
    config: GenConfig
    templates: TemplateRegistry
    trace: list = field(default_factory=list)


@dataclass
class GenerationResult:
    files: list
    symtab: object
    genmap: GeneratorMap
    generator: object
    ast: object
    trace: list


@dataclass
class Transformation:
    name: str
    args: list
    apply: Callable  # GenerationState -> ast

    @property
    def spec(self):
        return ":".join([self.name] + list(self.args))


# -- transformations ---------------------------------------------------------

def _capitalize(name):
    return name[:1].upper() + name[1:]


def accessor_name(field_name):
    return "get" + _capitalize(field_name)


def mutator_name(field_name):
    return "set" + _capitalize(field_name)


def _type_node(ast, type_name):
    node = ast.type_named(type_name)
    if node is None:
        raise SymbolNotFoundError(type_name, SymbolKind.CD_TYPE)
    return node


def _java_class(node, genmap, gen, what):
    java = genmap.lookup_mapping(node.symbol, gen, Role.TYPE_OF)
    if java.kind is not SymbolKind.JAVA_CLASS:
        raise KindError(f"{what} needs a class, but '{node.name}' maps to {java.kind.name}")
    if node.is_abstract:
        raise KindError(f"{what} cannot be applied to abstract class '{node.name}'")
    return java


def transform_map_defaults(ast, symtab, genmap, gen):
    """Map every type, field and method to a Java element of the same name."""
    for node in ast.types:
        genmap.to_java_type(node.symbol, node.name, gen)
        for f in node.fields:
            genmap.to_java_field(f.symbol, f.name, gen)
        for m in node.methods:
            genmap.to_java_method(m.symbol, m.name, gen)
    return ast


def transform_add_accessors(ast, symtab, genmap, gen, enabled=True):
    if not enabled:
        return ast
    for node in ast.types:
        if not node.is_class:
            continue
        genmap.lookup_mapping(node.symbol, gen, Role.TYPE_OF)
        for f in node.fields:
            java_field = genmap.lookup_mapping(f.symbol, gen, Role.FIELD_OF)
            getter, setter = accessor_name(java_field.name), mutator_name(java_field.name)
            genmap.map_accessor(f.symbol, getter, gen)
            genmap.map_mutator(f.symbol, setter, gen)
            genmap.set_accessor(java_field, getter)
            genmap.set_mutator(java_field, setter)
            f.accessor, f.mutator = getter, setter
    return ast


def transform_factory(type_name, ast, symtab, genmap, gen, templates=None):
    """Route instantiation of ``type_name`` through a synthesized ``<Name>Factory.create()``."""
    node = _type_node(ast, type_name)
    java = _java_class(node, genmap, gen, "factory")
    if templates is not None and not templates.exists(FACTORY_TEMPLATE):
        raise TemplateError(f"no template named '{FACTORY_TEMPLATE}'")
    factory_name = node.name + "Factory"
    factory = ast.type_named(factory_name)
    if factory is None or factory.factory_of != node.name:
        factory = CdTypeNode(factory_name, TypeForm.CLASS, node.pos,
                             methods=[CdMethodNode("create", node.name, [], node.pos)],
                             attached_templates=[FACTORY_TEMPLATE], factory_of=node.name)
        add_type_node(symtab, factory)
        ast.types.append(factory)
    java_factory = genmap.to_java_type(factory.symbol, java.name + "Factory", gen)
    create = genmap.to_java_method(factory.methods[0].symbol, "create", gen)
    genmap.add_instantiation(java, f"{java_factory.name}.{create.name}()")
    genmap.forbid_direct_instantiation(java)
    return ast


def transform_singleton(type_name, ast, symtab, genmap, gen, templates=None):
    node = _type_node(ast, type_name)
    java = _java_class(node, genmap, gen, "singleton")
    if templates is not None and not templates.exists(SINGLETON_TEMPLATE):
        raise TemplateError(f"no template named '{SINGLETON_TEMPLATE}'")
    if SINGLETON_TEMPLATE not in node.member_templates:
        node.member_templates.append(SINGLETON_TEMPLATE)
    get_instance = genmap.declare_java_method(java, "getInstance")
    genmap.add_instantiation(java, f"{java.name}.{get_instance.name}()")
    genmap.forbid_direct_instantiation(java)
    return ast


def transform_attach(type_name, template_name, ast, symtab, genmap, gen, templates=None):
    node = _type_node(ast, type_name)
    # the attached template expands in the generator's context, so the type must be mapped
    genmap.lookup_mapping(node.symbol, gen, Role.TYPE_OF)
    if templates is not None:
        templates.get(template_name)
    node.attached_templates.append(template_name)
    return ast


def parse_transform(spec):
    """Turn a transform spec such as ``factory:Book`` into a :class:`Transformation`."""
    if not isinstance(spec, str) or not spec.strip():
        raise ConfigError(f"empty transform spec {spec!r}")
    name, *args = spec.strip().split(":")
    arity = {"map-defaults": 0, "add-accessors": 0, "factory": 1, "singleton": 1, "attach": 2}
    if name not in arity:
        raise ConfigError(f"unknown transform '{name}'")
    if len(args) != arity[name] or not all(args):
        raise ConfigError(f"transform '{name}' takes {arity[name]} ':'-separated argument(s): {spec!r}")

    if name == "map-defaults":
        def apply(st):
            return transform_map_defaults(st.ast, st.symtab, st.genmap, st.generator)
    elif name == "add-accessors":
        def apply(st):
            return transform_add_accessors(st.ast, st.symtab, st.genmap, st.generator,
                                           enabled=st.config.accessors)
    elif name == "factory":
        def apply(st):
            return transform_factory(args[0], st.ast, st.symtab, st.genmap, st.generator, st.templates)
    elif name == "singleton":
        def apply(st):
            return transform_singleton(args[0], st.ast, st.symtab, st.genmap, st.generator, st.templates)
    else:
        def apply(st):
            return transform_attach(args[0], args[1], st.ast, st.symtab, st.genmap,
                                    st.generator, st.templates)
    return Transformation(name, args, apply)


# -- template traversal ------------------------------------------------------

def _file_name(node, state):
    java = state.genmap.find_mapping(node.symbol, state.generator, Role.TYPE_OF)
    if java is None:
        if state.config.mode is RenderMode.FALLBACK:
            return node.name + ".java"
        java = state.genmap.lookup_mapping(node.symbol, state.generator, Role.TYPE_OF)
    return java.name + ".java"


def expand_type(node, state):
    names = node.attached_templates or [DEFAULT_TEMPLATES[node.form]]
    ctx = TemplateContext(node, state.generator, state.genmap, state.config.mode,
                          templates=state.templates, trace=state.trace)
    parts = [evaluate(state.templates.get(name), ctx) for name in names]
    content = "\n".join(parts).replace("\r\n", "\n")
    if not content.endswith("\n"):
        content += "\n"
    return EmittedFile(_file_name(node, state), content)


def run_pipeline(ast, config, templates=None):
    """Run transformations then templates over a copy of ``ast``.

    On failure the first error propagates with ``error.state`` holding the
    partially built symbol table for post-mortem dumps.
    """
    ast = copy.deepcopy(ast)
    transforms = [parse_transform(spec) for spec in config.transforms]
    if templates is None:
        templates = TemplateRegistry(config.template_dir)
    symtab = build_symbol_table(ast)
    genmap = GeneratorMap(symtab)
    state = GenerationState(ast, symtab, genmap, None, config, templates)
    try:
        state.generator = genmap.register_generator(config.generator_id)
        for t in transforms:
            try:
                state.ast = t.apply(state)
            except SymgenError as exc:
                exc.annotate(f"while applying transform '{t.spec}'")
                if isinstance(exc, OrderViolationError) and exc.needed:
                    exc.annotate(f"run '{exc.needed}' before '{t.spec}'")
                raise
        files = []
        for node in state.ast.types:
            try:
                files.append(expand_type(node, state))
            except SymgenError as exc:
                exc.annotate(f"while generating '{node.name}'")
                if isinstance(exc, OrderViolationError) and exc.needed:
                    exc.annotate(f"run '{exc.needed}' first")
                raise
    except SymgenError as exc:
        exc.state = state
        raise
    symtab.freeze()
    return GenerationResult(files, symtab, genmap, state.generator, state.ast, state.trace)


# -- composition check -------------------------------------------------------

_CALL = re.compile(r"([A-Za-z_$][\w$]*)\.([A-Za-z_$][\w$]*)\(\)\Z")
_RECEIVER_CALL = re.compile(r".*\.([A-Za-z_$][\w$]*)\((.*)\)\Z", re.S)


def check_composition(result):
    """List builtin expansions whose referenced Java element was never generated."""
    problems = []
    gen_scope = result.genmap.generator_scope(result.generator)
    for call in result.trace:
        out, target = call["output"], call["target"]
        if call["builtin"] == "instantiation":
            if out == f"new {target.name}()":
                continue
            m = _CALL.match(out)
            owner = gen_scope.local(m.group(1), SymbolKind.JAVA_TYPE) if m else None
            if owner is None or owner.spanned_scope.local(m.group(2), SymbolKind.JAVA_METHOD) is None:
                problems.append(f"instantiation '{out}' refers to no generated method")
        elif call["builtin"] in ("accessor", "mutator"):
            m = _RECEIVER_CALL.match(out)
            if m is None:
                continue  # direct field access in fallback mode
            if target.scope.local(m.group(1), SymbolKind.JAVA_METHOD) is None:
                problems.append(f"{call['builtin']} call '{out}' refers to no generated method "
                                f"in '{target.scope.display_name}'")
        elif call["builtin"] == "javaName":
            if gen_scope not in set(target.scope.chain()):
                problems.append(f"javaName '{out}' is not a symbol of generator '{result.generator}'")
    return problems
