"""JSON dump of the symbol table, its generator info and mappings."""

import json


def _symbol_json(sym):
    data = {
        "name": sym.name,
        "kind": sym.kind.value,
        "pos": {"line": sym.pos.line, "col": sym.pos.col} if sym.pos is not None else None,
        "shadows": sym.shadows,
    }
    if sym.generator_info is not None:
        data["generatorInfo"] = sym.generator_info.to_json()
    return data


def scope_to_json(scope):
    return {
        "scopeName": scope.name,
        "symbols": [_symbol_json(s) for s in scope.symbols],
        "subScopes": [scope_to_json(s) for s in scope.sub_scopes],
    }


def symtab_to_json(global_scope, genmap=None):
    data = scope_to_json(global_scope)
    if genmap is not None:
        data["mappings"] = genmap.to_json()
    return data


def dumps_symtab(global_scope, genmap=None):
    return json.dumps(symtab_to_json(global_scope, genmap), indent=2, ensure_ascii=False) + "\n"
