"""``nfpc`` command line: compile, validate and eval.

Exit codes: 0 ok, 1 parse/validation failure, 2 type error, 3 I/O error,
4 policy unsatisfied, 5 evaluation error (missing value or type mismatch).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .emitter import EmitConfig, FunctionIdMode, emit_bundles
from .errors import MissingValue, ParseError, TypeDiagnostic, TypeMismatch
from .model import ConstraintKind, parse_model, validate_model
from .nfp_types import TypeLibrary, load_library
from .policy import evaluate, parse_valuation, without_empty_alternatives
from .transform import check_model_types, transform_model

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_TYPE = 2
EXIT_IO = 3
EXIT_UNSATISFIED = 4
EXIT_EVAL = 5

TYPES_LIB_ENV = "NFPC_TYPES_LIB"


class _Abort(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _Abort(EXIT_IO, f"cannot read {what} {path}: {exc}") from None


def _library(args) -> TypeLibrary:
    path = args.types_lib or os.environ.get(TYPES_LIB_ENV)
    if not path:
        return load_library(None)
    try:
        return load_library(_read(path, "type library"))
    except ParseError as exc:
        raise _Abort(EXIT_INVALID, f"{path}:{exc}") from None


def _load(args):
    library = _library(args)
    text = _read(args.model, "model")
    try:
        model = parse_model(text, library)
    except ParseError as exc:
        raise _Abort(EXIT_INVALID, f"{args.model}:{exc}") from None
    diags = validate_model(model, library)
    if diags:
        raise _Abort(EXIT_INVALID, "\n".join(f"{args.model}: {d}" for d in diags))
    return model, library


def run_validate(args) -> int:
    model, library = _load(args)
    problems = check_model_types(model, library)
    if problems:
        raise _Abort(EXIT_INVALID, "\n".join(f"{args.model}: {p}" for p in problems))
    return EXIT_OK


def run_compile(args) -> int:
    model, library = _load(args)
    try:
        artifacts = transform_model(model, library)
    except TypeDiagnostic as exc:
        raise _Abort(EXIT_TYPE, f"{args.model}: type error: {exc}") from None
    config = EmitConfig(function_prefix_mode=FunctionIdMode(args.function_ids))
    out_dir = Path(args.out_dir)
    files: list[tuple[str, str]] = []
    for bundle in emit_bundles(model, artifacts, config):
        files.append((bundle.wsdl_name, bundle.wsdl_text))
        files.append((bundle.xsd_name, bundle.xsd_text))
        if args.split_policies:
            files += [(f"{pid}.xml", text) for pid, text in bundle.policy_texts.items()]
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, text in files:
            with open(out_dir / name, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            print(f"WROTE {name}")
    except OSError as exc:
        raise _Abort(EXIT_IO, f"cannot write to {out_dir}: {exc}") from None
    return EXIT_OK


def run_eval(args) -> int:
    model, library = _load(args)
    try:
        artifacts = transform_model(model, library)
    except TypeDiagnostic as exc:
        raise _Abort(EXIT_TYPE, f"{args.model}: type error: {exc}") from None
    refs = [ref for ref in artifacts.subject_index if ref.name == args.subject]
    if not refs:
        raise _Abort(EXIT_INVALID, f"no service or endpoint named {args.subject!r}")
    text = _read(args.values, "valuation")
    try:
        valuation = parse_valuation(text)
    except ParseError as exc:
        raise _Abort(EXIT_INVALID, f"{args.values}:{exc}") from None

    all_ok = True
    for ref in refs:
        for policy in artifacts.policies_for(ref):
            kind = artifacts.policy_kinds[policy.id]
            if args.kind != "all" and kind.value != args.kind:
                continue
            if args.strict_offered and kind is ConstraintKind.OFFERED:
                policy = without_empty_alternatives(policy)
            try:
                report = evaluate(policy, valuation)
            except (MissingValue, TypeMismatch) as exc:
                raise _Abort(EXIT_EVAL, f"policy {policy.id}: {exc}") from None
            if report.satisfied:
                print(f"SATISFIED {policy.id} ({kind.value}, alternative {report.alternative})")
            else:
                all_ok = False
                print(f"UNSATISFIED {policy.id} ({kind.value})")
                for failure in report.failures:
                    print(f"  {failure.describe()}")
    return EXIT_OK if all_ok else EXIT_UNSATISFIED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nfpc", description="Compile NFP service models to WS-Policy, XSD and SAWSDL.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="emit WSDL, XSD and policy files")
    p.add_argument("model")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--function-ids", choices=["entity", "urn"], default="urn")
    p.add_argument("--split-policies", action="store_true")
    p.add_argument("--types-lib")
    p.set_defaults(func=run_compile)

    p = sub.add_parser("validate", help="parse and check a model")
    p.add_argument("model")
    p.add_argument("--types-lib")
    p.set_defaults(func=run_validate)

    p = sub.add_parser("eval", help="check NFP values against a subject's policies")
    p.add_argument("model")
    p.add_argument("--subject", required=True)
    p.add_argument("--values", required=True)
    p.add_argument("--kind", choices=["required", "offered", "contract", "all"], default="all")
    p.add_argument("--strict-offered", action="store_true")
    p.add_argument("--types-lib")
    p.set_defaults(func=run_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Abort as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
