"""Command-line front end.

Exit codes: 0 pass, 2 validation or failed checks, 3 I/O or format,
4 regime (prime too small), 5 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import families
from .brace import Brace, brace_chains, check_brace_axioms, check_fp_brace, strong_index
from .families import ConstraintError, FamilySpec
from .flows import (
    InvariantError,
    RegimeError,
    brace_from_prelie,
    make_context,
    prelie_from_brace,
)
from .modarith import ShapeError
from .prelie import (
    FormatError,
    NonNilpotentError,
    PreLieRing,
    check_prelie_axiom,
    check_well_defined,
    dump_json,
    left_chain,
    right_chain,
    sample_prelie_axiom,
    strong_chain,
)
from .report import Report
from .search import BANNER, BudgetError, EnumSpace, enumerate_valid, enumeration_summary, isomorphic
from .sweep import cubic_agreement
from .ybe import certify_solution

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_REGIME, EXIT_INTERNAL = 0, 2, 3, 4, 5
SLOW_PRIME = 7


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _env_int(name: str, default: int) -> int:
    try:
        return int(os.environ.get(name, default))
    except ValueError:
        raise CliError(EXIT_IO, f"{name} must be an integer") from None


def _load(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_IO, f"{path} is not valid JSON: {exc}") from exc


def _load_structure(path: str):
    doc = _load(path)
    try:
        if doc.get("operation") == "circle":
            return Brace.from_json(doc)
        return PreLieRing.from_json(doc)
    except (FormatError, ShapeError, ValueError) as exc:
        raise CliError(EXIT_IO, f"{path}: {exc}") from exc


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from exc


def _gate(p: int, args):
    if p > SLOW_PRIME and not args.slow:
        raise CliError(EXIT_REGIME, f"p={p} runs are gated behind --slow")


def _report_doc(command: str, reports, **extra) -> dict:
    return {
        "schema": 1,
        "command": command,
        "ok": all(r.ok for r in reports),
        **extra,
        "reports": [r.to_json() for r in reports],
    }


def cmd_build(args) -> int:
    try:
        spec = FamilySpec.from_json(_load(args.spec))
    except (FormatError, ValueError) as exc:
        raise CliError(EXIT_IO, str(exc)) from exc
    rep = families.validate(spec, item10=args.item10)
    if not rep.ok:
        _write(dump_json(_report_doc("build", [rep])), args.report)
        for v in rep.violations:
            print(f"violation: {v.check}", file=sys.stderr)
        return EXIT_VALIDATION
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _write(families.build(spec, check=False, item10=args.item10).dumps(), args.output)
    return EXIT_OK


def cmd_sample(args) -> int:
    specs = families.catalog_sample(args.p, args.family, args.count, args.seed)
    _write("".join(dump_json(s.to_json()) for s in specs), args.output)
    return EXIT_OK


def _verify_prelie(A: PreLieRing, args):
    reports = [check_well_defined(A.table, A.shape), check_prelie_axiom(A)]
    reports.append(sample_prelie_axiom(A, args.samples, args.seed))
    nil = Report("nilpotent")
    try:
        nil.info["strong_orders"] = [S.order for S in strong_chain(A)]
    except NonNilpotentError as exc:
        nil.add("nilpotent", expected="strong chain reaches 0", actual=str(exc))
    reports.append(nil)
    if args.cubic and nil.ok:
        _gate(A.p, args)
        reports.append(cubic_agreement(A, workers=args.workers))
    return reports


def cmd_verify(args) -> int:
    obj = _load_structure(args.table)
    if isinstance(obj, Brace):
        _gate(obj.p, args)
        reports = [check_brace_axioms(obj, mode=args.mode, samples=args.samples, seed=args.seed)]
        if obj.shape.exponents == (1, 1, 1, 1):
            reports.append(check_fp_brace(obj))
        kind = "brace"
    else:
        reports = _verify_prelie(obj, args)
        kind = "prelie"
    doc = _report_doc("verify", reports, kind=kind, mode=args.mode, seed=args.seed, samples=args.samples)
    _write(dump_json(doc), args.report)
    return EXIT_OK if doc["ok"] else EXIT_VALIDATION


def cmd_flow(args) -> int:
    obj = _load_structure(args.table)
    xi = args.xi if args.xi in ("auto", "as-is") else int(args.xi)
    if args.direction == "to-brace":
        if not isinstance(obj, PreLieRing):
            raise CliError(EXIT_IO, "to-brace needs a pre-Lie table")
        ctx = make_context(obj, xi=xi)
        B = brace_from_prelie(obj, ctx, materialize=obj.shape.order <= 7**4 and not args.lazy)
        _write(dump_json(B.to_json(include_table=B.table is not None)), args.output)
        return EXIT_OK
    if not isinstance(obj, Brace):
        raise CliError(EXIT_IO, "to-prelie needs a circle table")
    k = strong_index(obj)
    if k is None:
        raise CliError(EXIT_REGIME, "brace is not strongly nilpotent")
    if k >= obj.p - 1:
        raise CliError(EXIT_REGIME, f"strong nilpotency index {k} is not below p-1={obj.p - 1}; the inverse passage needs k < p-1")
    ctx = make_context(p=obj.p, k=k, xi=xi)
    A = prelie_from_brace(obj, ctx)
    _write(A.dumps(), args.output)
    print(json.dumps({"provenance": {"construction": "inverse-passage", **ctx.to_json()}}, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def _chain_doc(chain, ok):
    return {"orders": [S.order for S in chain], "nilpotent": ok, "index": len(chain) if ok else None}


def cmd_chains(args) -> int:
    obj = _load_structure(args.table)
    out = {"schema": 1, "command": "chains"}
    if isinstance(obj, Brace):
        out["kind"] = "brace"
        for name, (chain, ok) in brace_chains(obj).items():
            out[name] = _chain_doc(chain, ok)
    else:
        out["kind"] = "prelie"
        for name, fn in (("left", left_chain), ("right", right_chain), ("strong", strong_chain)):
            try:
                out[name] = _chain_doc(fn(obj), True)
            except NonNilpotentError as exc:
                out[name] = {"nilpotent": False, "error": str(exc)}
    _write(dump_json(out), args.report)
    return EXIT_OK


def cmd_ybe(args) -> int:
    obj = _load_structure(args.table)
    _gate(obj.p, args)
    B = obj if isinstance(obj, Brace) else brace_from_prelie(obj)
    rep = certify_solution(B, samples=args.samples, seed=args.seed)
    doc = _report_doc("ybe", [rep], seed=args.seed, samples=args.samples)
    _write(dump_json(doc), args.report)
    return EXIT_OK if rep.ok else EXIT_VALIDATION


def cmd_enumerate(args) -> int:
    try:
        space = EnumSpace.from_json(_load(args.space))
    except (FormatError, ShapeError) as exc:
        raise CliError(EXIT_IO, str(exc)) from exc
    try:
        summary = enumeration_summary(space, budget=args.budget)
        lines = [A.dumps() for A in enumerate_valid(space, budget=args.budget)]
    except BudgetError as exc:
        raise CliError(EXIT_VALIDATION, str(exc)) from exc
    _write("".join(lines), args.output)
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def cmd_iso(args) -> int:
    A, B = _load_structure(args.table_a), _load_structure(args.table_b)
    if not (isinstance(A, PreLieRing) and isinstance(B, PreLieRing)):
        raise CliError(EXIT_IO, "iso compares two pre-Lie tables")
    v = isomorphic(A, B, budget=args.budget)
    _write(dump_json({"schema": 1, "command": "iso", "banner": BANNER, **v.to_json()}), args.report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    samples = _env_int("PRELIE_SAMPLES", 100_000)
    budget = _env_int("PRELIE_BUDGET", 10**9)
    workers = _env_int("PRELIE_WORKERS", os.cpu_count() or 1)

    ap = argparse.ArgumentParser(prog="prelie-p4", description="Build, convert and verify nilpotent pre-Lie rings of order p^4 and their braces.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, seeded=False):
        sp.add_argument("--slow", action="store_true", help="allow p > 7 for exhaustive work")
        if seeded:
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--samples", type=int, default=samples)
        return sp

    sp = common(sub.add_parser("build", help="build a family table from a spec document"))
    sp.add_argument("spec")
    sp.add_argument("-o", "--output")
    sp.add_argument("--report")
    sp.add_argument("--item10", choices=("section", "summary"), default="section")
    sp.set_defaults(func=cmd_build)

    sp = common(sub.add_parser("sample", help="seeded valid family specs, one JSON document per line"))
    sp.add_argument("--family", type=int, required=True)
    sp.add_argument("--p", type=int, default=7)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_sample)

    sp = common(sub.add_parser("verify", help="run the checkers on a pre-Lie or circle table"), seeded=True)
    sp.add_argument("table")
    sp.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    sp.add_argument("--cubic", action="store_true", help="also sweep cubic vs flow circle on all pairs")
    sp.add_argument("--workers", type=int, default=workers)
    sp.add_argument("--report")
    sp.set_defaults(func=cmd_verify)

    sp = common(sub.add_parser("flow", help="convert between pre-Lie ring and brace"))
    sp.add_argument("table")
    sp.add_argument("--direction", choices=("to-brace", "to-prelie"), required=True)
    sp.add_argument("--xi", default="auto", help="auto (default), as-is, or an integer")
    sp.add_argument("--lazy", action="store_true", help="write provenance only, no circle table")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_flow)

    sp = common(sub.add_parser("chains", help="left, right and strong chain orders"))
    sp.add_argument("table")
    sp.add_argument("--report")
    sp.set_defaults(func=cmd_chains)

    sp = common(sub.add_parser("ybe", help="certify the Yang-Baxter solution of a brace"), seeded=True)
    sp.add_argument("table")
    sp.add_argument("--report")
    sp.set_defaults(func=cmd_ybe)

    sp = common(sub.add_parser("enumerate", help="enumerate valid tables in a constrained space"))
    sp.add_argument("space")
    sp.add_argument("--budget", type=int, default=budget)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_enumerate)

    sp = common(sub.add_parser("iso", help="probe isomorphism of two pre-Lie tables"))
    sp.add_argument("table_a")
    sp.add_argument("table_b")
    sp.add_argument("--budget", type=int, default=10**6)
    sp.add_argument("--report")
    sp.set_defaults(func=cmd_iso)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ConstraintError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except RegimeError as exc:
        print(f"error: {exc} (the passage needs nilpotency index k < p-1)", file=sys.stderr)
        return EXIT_REGIME
    except (FormatError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InvariantError, NonNilpotentError) as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
