"""Class-diagram to Java generator with an extended symbol table.

The symbol table records, per generator id, which Java elements each model
element generates into, plus generator info on the Java side (instantiation
code, accessors, mutators).  Templates read that information while the
generator runs, so composed output stays consistent.
"""

from .cdlang import CdAst, SourcePos, TypeForm, parse_cd
from .errors import (MissingGeneratorInfoError, OrderViolationError, SymbolNotFoundError,
                     SymgenError)
from .genmap import GeneratorId, GeneratorMap, RenderMode, Role, Strategy
from .lint import lint_java
from .pipeline import GenConfig, run_pipeline
from .symtab import (Scope, Symbol, SymbolKind, build_symbol_table, resolve,
                     resolve_field_considering_inheritance)
from .tmpl import TemplateContext, TemplateRegistry, evaluate, parse_template

__version__ = "0.1.0"

__all__ = [
    "CdAst", "SourcePos", "TypeForm", "parse_cd",
    "SymgenError", "OrderViolationError", "MissingGeneratorInfoError", "SymbolNotFoundError",
    "GeneratorId", "GeneratorMap", "RenderMode", "Role", "Strategy",
    "lint_java", "GenConfig", "run_pipeline",
    "Scope", "Symbol", "SymbolKind", "build_symbol_table", "resolve",
    "resolve_field_considering_inheritance",
    "TemplateContext", "TemplateRegistry", "evaluate", "parse_template",
]
