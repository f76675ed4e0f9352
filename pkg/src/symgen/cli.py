"""symgen command line: generate Java from a class diagram.

Exit codes: 0 success, 1 usage/config error, 2 model could not be read,
parsed or built into a symbol table, 3 generation error (including
execution-order violations).
"""

import argparse
import os
import sys

from .cdlang import parse_cd
from .dump import dumps_symtab
from .errors import EXIT_GENERATION, ConfigError, ModelIOError, SymgenError, UsageError
from .genmap import RenderMode
from .pipeline import DEFAULT_TRANSFORMS, GenConfig, run_pipeline

CONFIG_KEYS = ("generator-id", "transforms", "mode", "accessors", "out", "template-dir")


class OutputIOError(SymgenError):
    code = "E_IO_WRITE"
    exit_code = EXIT_GENERATION


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _ArgumentParser(prog="symgen", description="Generate Java code from a class diagram.")
    p.add_argument("model", help="class diagram file (.cd)")
    p.add_argument("-o", "--out", help="output directory (default: out)")
    p.add_argument("--transforms", help="comma-separated transformations, applied in order")
    p.add_argument("--generator-id", help="generator id (default: cd2java)")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="mode", action="store_const", const="strict",
                      help="fail when generator information is missing (default)")
    mode.add_argument("--fallback", dest="mode", action="store_const", const="fallback",
                      help="fall back to direct access/instantiation when information is missing")
    p.add_argument("--no-accessors", dest="accessors", action="store_const", const="false",
                   help="do not generate accessors and mutators")
    p.add_argument("--template-dir", help="directory whose .jt files override the defaults")
    p.add_argument("--dump-symtab", metavar="FILE", help="write the symbol table as JSON")
    p.add_argument("--dry-run", action="store_true", help="list the files without writing")
    p.add_argument("--config", metavar="FILE", help="key=value configuration file")
    return p


def read_config_file(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment line."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file '{path}': {exc.strerror}") from None
    values = {}
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        values[key] = value
    return values


def _parse_bool(key, text):
    lowered = text.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ConfigError(f"'{key}' must be true or false, not '{text}'")


def make_config(args):
    values = read_config_file(args.config) if args.config else {}
    overrides = {"generator-id": args.generator_id, "transforms": args.transforms,
                 "mode": args.mode, "accessors": args.accessors, "out": args.out,
                 "template-dir": args.template_dir}
    values.update({k: v for k, v in overrides.items() if v is not None})

    mode_text = values.get("mode", "strict").lower()
    if mode_text not in ("strict", "fallback"):
        raise ConfigError(f"'mode' must be strict or fallback, not '{mode_text}'")
    transforms_text = values.get("transforms")
    transforms = (list(DEFAULT_TRANSFORMS) if transforms_text is None
                  else [t.strip() for t in transforms_text.split(",") if t.strip()])
    return GenConfig(
        generator_id=values.get("generator-id", "cd2java"),
        transforms=transforms,
        mode=RenderMode.STRICT if mode_text == "strict" else RenderMode.FALLBACK,
        accessors=_parse_bool("accessors", values.get("accessors", "true")),
        output_dir=values.get("out", "out"),
        template_dir=values.get("template-dir"),
    )


def _load_model(path):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ModelIOError(f"cannot read '{path}': {exc.strerror}") from None
    return parse_cd(data, path)


def _write_text(path, text):
    try:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputIOError(f"cannot write '{path}': {exc.strerror}") from None


def _report(exc, out):
    message = str(exc).replace("\n", " ")
    print(f"error[{exc.code}]: {message}", file=out)
    return exc.exit_code


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        config = make_config(args)
        ast = _load_model(args.model)
    except SymgenError as exc:
        return _report(exc, stderr)

    if args.dry_run and args.dump_symtab:
        print("note: --dump-symtab is ignored with --dry-run", file=stderr)
    try:
        result = run_pipeline(ast, config)
    except SymgenError as exc:
        code = _report(exc, stderr)
        state = getattr(exc, "state", None)
        if args.dump_symtab and not args.dry_run and state is not None:
            try:
                _write_text(args.dump_symtab, dumps_symtab(state.symtab, state.genmap))
            except SymgenError as dump_exc:
                _report(dump_exc, stderr)
        return code

    try:
        for f in result.files:
            path = os.path.join(config.output_dir, f.relative_path)
            if args.dry_run:
                print(f"would write {path}", file=stdout)
            else:
                _write_text(path, f.content)
                print(f"wrote {path} ({f.content.count(chr(10))} lines)", file=stdout)
        if args.dump_symtab and not args.dry_run:
            _write_text(args.dump_symtab, dumps_symtab(result.symtab, result.genmap))
    except SymgenError as exc:
        return _report(exc, stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
