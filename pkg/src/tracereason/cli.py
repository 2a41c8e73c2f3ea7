"""Command-line interface.

Exit codes: 0 when the command succeeded and the model is consistent,
1 when an analysis ran and found at least one violation, 2 for usage,
I/O, parse and type errors.
"""

from __future__ import annotations

import argparse
import os
import re
import sys

from .dsl import load_spec
from .engine import Analyzer, ModelTypeError
from .report import FORMATS, RenderOptions, render_explanations, render_report
from .spans import DiagnosticsError
from .tracemodel import EditError, accept_inferred, load_model, serialize_model
from .typecheck import HierarchyError, TypingError, build_hierarchy, check_model, suggest_targets, suggest_trace_types

OK, VIOLATIONS, FAILURE = 0, 1, 2


class CliError(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except FileNotFoundError:
        raise CliError(f"{path}: no such file") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(f"{path}: cannot read ({exc})") from None


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"{path}: cannot write ({exc})") from None


def _use_color(stream):
    if os.environ.get("TRACEREASON_COLOR", "auto") == "never":
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _load_spec(path):
    core = load_spec(_read(path), path)
    return core, build_hierarchy(core)


def _load_model(path):
    return load_model(_read(path), path)


def _analyzer(args):
    core, h = _load_spec(args.spec)
    model = _load_model(args.model)
    return model, Analyzer(model, core, h)


_TRACE_RE = re.compile(r"^\s*([\w'$]+)\s*\(\s*([\w'$]+)\s*,\s*([\w'$]+)\s*\)\s*$")


def _trace_key(text):
    m = _TRACE_RE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected REL(SOURCE,TARGET), got {text!r}")
    return m.groups()


def _emit(args, out, text):
    if getattr(args, "output", None):
        _write(args.output, text)
    else:
        out.write(text)


def _status(result):
    return VIOLATIONS if result.violations else OK


# -- commands -----------------------------------------------------------------


def cmd_validate(args, out, err):
    core, h = _load_spec(args.spec)
    if args.model:
        model = _load_model(args.model)
        issues = check_model(model, h)
        if issues:
            raise ModelTypeError(issues)
        out.write(f"{args.model}: {len(model.locations)} locations, {len(model.tuples)} traces, well-typed\n")
    out.write(f"{args.spec}: {len(h.sigs)} signatures, {len(h.relations)} relations, "
              f"{len(core.rules)} rules, {len(core.constraints)} constraints\n")
    return OK


def cmd_check(args, out, err):
    model, a = _analyzer(args)
    result = a.analyze()
    opts = RenderOptions(args.format, args.include_derivations, args.slice,
                         color=args.format == "text" and not args.output and _use_color(out))
    _emit(args, out, render_report(result, model, opts))
    return _status(result)


def cmd_infer(args, out, err):
    if args.accept_all and not args.output:
        raise CliError("--accept-all requires --output")
    model, a = _analyzer(args)
    result = a.analyze()
    opts = RenderOptions(args.format, args.include_derivations, args.slice,
                         color=args.format == "text" and _use_color(out))
    out.write(render_report(result, model, opts))
    if args.accept_all:
        merged = accept_inferred(model, result, [t.key for t in result.inferred])
        fmt = "json" if args.output.endswith(".json") else "native"
        _write(args.output, serialize_model(merged, fmt, a.h))
        err.write(f"wrote {len(result.inferred)} accepted trace(s) to {args.output}\n")
    return _status(result)


def cmd_explain(args, out, err):
    model, a = _analyzer(args)
    result = a.analyze()
    out.write(render_explanations(result, color=_use_color(out)))
    return _status(result)


def cmd_suggest(args, out, err):
    core, h = _load_spec(args.spec)
    model = _load_model(args.model)
    if args.what == "types":
        names = suggest_trace_types(model, h, args.location, args.side)
    else:
        if not args.relation:
            raise CliError("suggest targets requires --relation")
        names = suggest_targets(model, h, args.location, args.relation)
    out.write("".join(f"{x}\n" for x in names))
    return OK


def cmd_accept(args, out, err):
    model, a = _analyzer(args)
    result = a.analyze(with_diagnoses=False)
    keys = [t.key for t in result.inferred] if args.all else args.trace
    if not keys and not args.all:
        raise CliError("accept needs --trace REL(SOURCE,TARGET) or --all")
    merged = accept_inferred(model, result, keys)
    target = args.output or args.model
    fmt = "json" if target.endswith(".json") else "native"
    _write(target, serialize_model(merged, fmt, a.h))
    err.write(f"accepted {len(merged.tuples) - len(model.tuples)} trace(s) into {target}\n")
    return _status(result)


def cmd_export(args, out, err):
    model, a = _analyzer(args)
    result = a.analyze()
    opts = RenderOptions(args.format, args.include_derivations, args.slice)
    _emit(args, out, render_report(result, model, opts))
    return _status(result)


# -- argument parsing -------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(f"{self.prog}: {message}")


def build_parser():
    p = _Parser(prog="tracereason", description="Infer, check and explain trace links.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, model=True):
        sp.add_argument("--spec", required=True, help="trace semantics (.tarski)")
        sp.add_argument("--model", required=model, help="trace model (.trace or .json)")

    def rendering(sp, default="text"):
        sp.add_argument("--format", choices=FORMATS, default=default)
        sp.add_argument("--include-derivations", action="store_true")
        sp.add_argument("--slice", metavar="LOCATION", help="restrict the report to one location")

    sp = sub.add_parser("validate", help="parse a spec and optionally type-check a model")
    common(sp, model=False)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("check", help="analyze a model and report violations")
    common(sp)
    rendering(sp)
    sp.add_argument("--output", help="write the report to a file")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("infer", help="infer traces")
    common(sp)
    rendering(sp)
    sp.add_argument("--accept-all", action="store_true", help="write the model with all inferred traces accepted")
    sp.add_argument("--output", help="model path for --accept-all")
    sp.set_defaults(func=cmd_infer)

    sp = sub.add_parser("explain", help="print the assigned traces behind each violation")
    common(sp)
    sp.set_defaults(func=cmd_explain)

    sp = sub.add_parser("suggest", help="suggest trace types or targets")
    sp.add_argument("what", choices=("types", "targets"))
    common(sp)
    sp.add_argument("--location", required=True)
    sp.add_argument("--side", choices=("source", "target"), default="source")
    sp.add_argument("--relation")
    sp.set_defaults(func=cmd_suggest)

    sp = sub.add_parser("accept", help="turn inferred traces into accepted ones")
    common(sp)
    sp.add_argument("--trace", action="append", type=_trace_key, default=[], metavar="REL(SOURCE,TARGET)")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--output", help="defaults to overwriting --model")
    sp.set_defaults(func=cmd_accept)

    sp = sub.add_parser("export", help="write a report as text, json or dot")
    common(sp)
    rendering(sp, default="json")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_export)
    return p


def main(argv=None, stdout=None, stderr=None):
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out, err)
    except CliError as exc:
        err.write(f"error: {exc}\n")
    except DiagnosticsError as exc:
        for e in exc.errors:
            err.write(f"{e}\n")
    except HierarchyError as exc:
        for e in exc.errors:
            err.write(f"{e}\n")
    except ModelTypeError as exc:
        for issue in exc.issues:
            err.write(f"type error: {issue}\n")
    except (TypingError, EditError) as exc:
        err.write(f"error: {exc}\n")
    except KeyError as exc:
        err.write(f"error: unknown location {exc.args[0]}\n")
    except SystemExit as exc:
        # --help and friends
        return OK if exc.code in (0, None) else FAILURE
    return FAILURE


if __name__ == "__main__":
    sys.exit(main())
