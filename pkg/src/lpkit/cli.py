"""``lpkit`` command-line front end.

Exit status: 0 on success, 1 when the input is well formed but fails
(invalid array, failed check, generator rejection), 2 for malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional

from .array import ParameterArray, StructureError, validate
from .families import (
    GENERATORS,
    GeneratorError,
    generate_case0_d0,
    generate_case0_d1,
    generate_case0_d2,
    generate_d2_counterexample,
)
from .fields import FieldDescriptor, FieldError
from .matrices import MatrixError, oracle_matrices
from .sweep import FAMILIES, SweepConfig, sweep
from .theorems import analyze, check_all

__all__ = ["main", "build_parser", "UsageError"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Malformed arguments or input; reported with exit status 2."""


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, output: Optional[str]) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read_input(source: str) -> str:
    if source.lstrip().startswith("{"):
        return source
    if source == "-":
        return sys.stdin.read()
    try:
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror}") from exc


def load_array(source: str) -> ParameterArray:
    text = _read_input(source)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from exc
    try:
        return ParameterArray.from_json(obj)
    except (StructureError, FieldError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc


def parse_params(text: Optional[str]) -> Dict[str, str]:
    """``k=v,k=v`` into a dict; keys must be unique."""
    out: Dict[str, str] = {}
    if not text:
        return out
    for item in text.split(","):
        key, sep, value = item.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise UsageError(f"malformed parameter {item!r}; expected key=value")
        if key in out:
            raise UsageError(f"parameter {key!r} given twice")
        out[key] = value
    return out


def _take(params: Dict[str, str], names: List[str]) -> List[str]:
    unknown = set(params) - set(names)
    if unknown:
        raise UsageError(f"unknown parameters: {', '.join(sorted(unknown))}")
    missing = [n for n in names if n not in params]
    if missing:
        raise UsageError(f"missing parameters: {', '.join(missing)}")
    return [params[n] for n in names]


def _indexed(prefix: str, n: int) -> List[str]:
    return [f"{prefix}{i}" for i in range(n)]


def _generate(family: str, fd: FieldDescriptor, d: Optional[int], params: Dict[str, str]) -> ParameterArray:
    if family in GENERATORS:
        data_cls, fn = GENERATORS[family]
        try:
            data = data_cls.from_params(fd, d, params)
        except (GeneratorError, FieldError) as exc:
            raise UsageError(str(exc)) from exc
        return fn(data)

    if family == "d0":
        names = ["theta0", "theta_star0"]
    elif family == "d1":
        names = _indexed("theta", 2) + _indexed("theta_star", 2) + ["varphi1"]
    elif family == "d2counter":
        names = _indexed("theta", 3) + _indexed("theta_star", 3)
    else:  # d2
        names = _indexed("theta", 3) + _indexed("theta_star", 3) + ["H"]
    try:
        v = [fd(x) for x in _take(params, names)]
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    if family == "d0":
        return generate_case0_d0(fd, v[0], v[1])
    if family == "d1":
        return generate_case0_d1(fd, v[0:2], v[2:4], v[4])
    if family == "d2counter":
        return generate_d2_counterexample(fd, v[0:3], v[3:6])
    return generate_case0_d2(fd, v[0:3], v[3:6], v[6])


def _invalid(pa: ParameterArray, output) -> Optional[int]:
    report = validate(pa)
    if report.valid:
        return None
    _emit(_dump(report.to_json()), output)
    return EXIT_FAIL


def cmd_validate(args) -> int:
    report = validate(load_array(args.input))
    _emit(_dump(report.to_json()), args.output)
    return EXIT_OK if report.valid else EXIT_FAIL


def cmd_analyze(args) -> int:
    pa = load_array(args.input)
    bad = _invalid(pa, args.output)
    if bad is not None:
        return bad
    _emit(_dump(analyze(pa).to_json()), args.output)
    return EXIT_OK


def cmd_matrices(args) -> int:
    pa = load_array(args.input)
    bad = _invalid(pa, args.output)
    if bad is not None:
        return bad
    try:
        res = oracle_matrices(pa)
    except MatrixError as exc:
        print(f"lpkit: oracle failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(_dump(res.to_json()), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    pa = load_array(args.input)
    bad = _invalid(pa, args.output)
    if bad is not None:
        return bad
    report = check_all(pa)
    _emit(_dump(report.to_json()), args.output)
    return EXIT_OK if report.all_hold else EXIT_FAIL


def cmd_generate(args) -> int:
    fd = _field(args.field)
    params = parse_params(args.params)
    try:
        pa = _generate(args.family, fd, args.d, params)
    except (GeneratorError, ZeroDivisionError) as exc:
        print(f"lpkit: generation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(_dump(pa.to_json()), args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    families = tuple(_csv(args.families)) if args.families else FAMILIES
    fields = tuple(_field(f) for f in _csv(args.fields)) if args.fields else None
    try:
        cfg = SweepConfig(
            seed=args.seed,
            samples=args.samples,
            families=families,
            fields=fields,
            d_min=args.d_min,
            d_max=args.d_max,
            oracle_max_d=args.oracle_max_d,
            workers=args.workers,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    summary = sweep(cfg)
    _emit(_dump(summary.to_json()), args.output)
    return EXIT_OK if summary.failures == 0 else EXIT_FAIL


def _csv(text: str) -> List[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _field(text: str) -> FieldDescriptor:
    try:
        return FieldDescriptor.from_string(text)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpkit", description="Parameter arrays of Leonard pairs over exact fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_io(p, takes_input=True):
        if takes_input:
            p.add_argument("input", help="JSON file, '-' for stdin, or inline JSON starting with '{'")
        p.add_argument("-o", "--output", help="write JSON here instead of stdout")
        return p

    with_io(sub.add_parser("validate", help="check the existence conditions")).set_defaults(fn=cmd_validate)
    with_io(sub.add_parser("analyze", help="a_i, a*_i, H, case and flags")).set_defaults(fn=cmd_analyze)
    with_io(sub.add_parser("matrices", help="split form and eigenbasis matrices")).set_defaults(fn=cmd_matrices)
    with_io(sub.add_parser("verify", help="run every per-array check")).set_defaults(fn=cmd_verify)

    gen = with_io(sub.add_parser("generate", help="build an array from a family"), takes_input=False)
    gen.add_argument("family", choices=sorted(GENERATORS) + ["d0", "d1", "d2", "d2counter"])
    gen.add_argument("--field", default="rational", help="rational, prime:p or binary:k")
    gen.add_argument("--d", type=int, help="diameter (cases 1-4)")
    gen.add_argument("--params", default="", help="comma-separated key=value list")
    gen.set_defaults(fn=cmd_generate)

    sw = with_io(sub.add_parser("sweep", help="seeded verification sweep"), takes_input=False)
    sw.add_argument("--seed", type=int, default=42)
    sw.add_argument("--samples", type=int, default=100, help="samples per (family, field)")
    sw.add_argument("--families", help=f"comma list from {','.join(FAMILIES)}")
    sw.add_argument("--fields", help="comma list of fields to keep, e.g. rational,prime:5")
    sw.add_argument("--d-min", type=int, default=3)
    sw.add_argument("--d-max", type=int, default=6)
    sw.add_argument("--oracle-max-d", type=int, default=8)
    sw.add_argument("--workers", type=int, default=1)
    sw.set_defaults(fn=cmd_sweep)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"lpkit: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
