"""Error hierarchy shared by every stage of the generator.

Each error carries a short machine code (used by the CLI as ``error[<CODE>]``)
and the process exit code it maps to.
"""

EXIT_USAGE = 1
EXIT_BUILD = 2
EXIT_GENERATION = 3


class SymgenError(Exception):
    code = "E_INTERNAL"
    exit_code = EXIT_GENERATION

    def __init__(self, message, pos=None):
        super().__init__(message)
        self.message = message
        self.pos = pos
        self.context = []
        # set by the template evaluator for the innermost failing segment
        self.template = None
        self.template_pos = None

    def annotate(self, note):
        self.context.append(note)
        return self

    def __str__(self):
        text = self.message
        if self.pos is not None:
            text = f"{self.pos}: {text}"
        if self.context:
            text += " (" + "; ".join(self.context) + ")"
        return text


class UsageError(SymgenError):
    code = "E_USAGE"
    exit_code = EXIT_USAGE


class ConfigError(SymgenError):
    code = "E_CONFIG"
    exit_code = EXIT_USAGE


class PreconditionError(SymgenError, ValueError):
    code = "E_PRECONDITION"


# -- model loading (exit 2) --------------------------------------------------

class ModelIOError(SymgenError):
    code = "E_IO"
    exit_code = EXIT_BUILD


class ParseError(SymgenError):
    code = "E_PARSE"
    exit_code = EXIT_BUILD


class DuplicateNameError(SymgenError):
    code = "E_DUPLICATE"
    exit_code = EXIT_BUILD

    def __init__(self, name, pos=None, message=None):
        super().__init__(message or f"duplicate name '{name}'", pos)
        self.name = name


class UnknownTypeError(SymgenError):
    code = "E_UNKNOWN_TYPE"
    exit_code = EXIT_BUILD

    def __init__(self, name, pos=None, message=None):
        super().__init__(message or f"unknown type '{name}'", pos)
        self.name = name


class CyclicInheritanceError(SymgenError):
    code = "E_CYCLE"
    exit_code = EXIT_BUILD

    def __init__(self, names, pos=None):
        super().__init__("cyclic inheritance: " + " -> ".join(names + names[:1]), pos)
        self.names = list(names)


class InheritanceError(SymgenError):
    code = "E_INHERITANCE"
    exit_code = EXIT_BUILD


# -- generation (exit 3) -----------------------------------------------------

class SymbolNotFoundError(SymgenError):
    code = "E_NOT_FOUND"

    def __init__(self, name, kind, from_scope_name=None, message=None):
        where = from_scope_name if from_scope_name is not None else "<global>"
        kind_name = getattr(kind, "name", kind)
        super().__init__(message or f"cannot resolve {kind_name} '{name}' from scope {where}")
        self.name = name
        self.kind = kind
        self.from_scope_name = from_scope_name


class KindError(SymgenError):
    code = "E_KIND"


class DuplicateGeneratorError(SymgenError):
    code = "E_DUP_GENERATOR"

    def __init__(self, gen_id):
        super().__init__(f"generator '{gen_id}' is already registered")
        self.id = gen_id


class MappingConflictError(SymgenError):
    code = "E_CONFLICT"


class OrderViolationError(SymgenError):
    """Information was requested before the step that registers it ran."""

    code = "E_ORDER"

    def __init__(self, message, source=None, role=None, needed=None):
        super().__init__(message)
        self.source = source
        self.role = role
        self.needed = needed


class MissingGeneratorInfoError(SymgenError):
    code = "E_MISSING_INFO"

    def __init__(self, symbol, needed_info, message=None):
        name = getattr(symbol, "name", symbol)
        super().__init__(message or f"'{name}' has no {needed_info} information")
        self.symbol = symbol
        self.needed_info = needed_info


class TemplateParseError(SymgenError):
    code = "E_TEMPLATE_PARSE"

    def __init__(self, name, pos, message):
        super().__init__(f"template '{name}' {pos[0]}:{pos[1]}: {message}")
        self.name = name
        self.template = name
        self.template_pos = pos


class TemplateError(SymgenError):
    code = "E_TEMPLATE"


class UnknownPathError(SymgenError):
    code = "E_PATH"


class InfiniteIncludeError(SymgenError):
    code = "E_INCLUDE_DEPTH"
