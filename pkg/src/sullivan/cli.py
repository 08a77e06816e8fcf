"""Command-line interface and report serialization.

Every report is built as a machine-readable tree first; the human
rendering is derived from that tree, so no number exists only in prose.

Exit codes: 0 pass, 2 usage, 3 validation failure, 4 theorem-verdict
failure, 5 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .cohomology import (
    InternalInvariantError,
    NotEllipticError,
    NotHomogeneousError,
    engine_for,
)
from .library import UnknownModelError, get_model, library, library_names, model_text
from .model import (
    GenerationBudgetError,
    ModelValidationError,
    QuotientError,
    RandomModelParams,
    SullivanModel,
    check_model,
    length_profile,
    random_elliptic_model,
)
from .parser import ModelSyntaxError, parse_model
from .sequences import build_gysin, build_wang, check_exactness
from .toomer import e0_spectrum, gap_scan
from .verifiers import ALL_THEOREMS, verify_all

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_VERDICT = 4
EXIT_INTERNAL = 5


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sullivan",
        description="Exact cohomology, Toomer invariant and theorem checks "
                    "for minimal Sullivan algebras",
    )
    ap.add_argument("--version", action="version", version=f"sullivan {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_model_flags(p):
        p.add_argument("--model", metavar="FILE", help="model file (.sul)")
        p.add_argument("--lib", metavar="NAME", help="built-in library model")

    def add_output_flags(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", metavar="PATH", help="write the report to a file")
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit the timestamp field (byte-stable output)")

    p = sub.add_parser("validate", help="check the Sullivan conditions")
    add_model_flags(p)
    add_output_flags(p)

    p = sub.add_parser("cohomology", help="Betti table and representatives")
    add_model_flags(p)
    add_output_flags(p)
    p.add_argument("--window", type=int, default=None,
                   help="vanishing window for the ellipticity certificate")

    p = sub.add_parser("bigraded", help="bigraded dimensions h[i][k], n_k, N_k")
    add_model_flags(p)
    add_output_flags(p)
    p.add_argument("--window", type=int, default=None)

    p = sub.add_parser("toomer", help="e0, spectrum and per-class values")
    add_model_flags(p)
    add_output_flags(p)
    p.add_argument("--window", type=int, default=None)

    for kind in ("wang", "gysin"):
        p = sub.add_parser(kind, help=f"build and check the {kind.capitalize()} sequence")
        add_model_flags(p)
        add_output_flags(p)
        p.add_argument("--ungraded", action="store_true",
                       help="forget the word-length grading")

    p = sub.add_parser("verify", help="run theorem checkers")
    p.add_argument("theorem", choices=sorted(ALL_THEOREMS) + ["all"])
    add_model_flags(p)
    add_output_flags(p)

    p = sub.add_parser("gap-scan", help="scan a corpus for e0-gaps")
    add_output_flags(p)
    p.add_argument("--count", type=int, default=10, help="number of random models")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--evens", type=int, default=2)
    p.add_argument("--odds", type=int, default=2)
    p.add_argument("--length", type=int, default=2)
    p.add_argument("--include-library", action="store_true")

    p = sub.add_parser("library", help="list built-in models or emit one")
    add_output_flags(p)
    p.add_argument("--emit", metavar="NAME", help="print the model file text")

    return ap


def _load_model(args) -> SullivanModel:
    if getattr(args, "model", None) and getattr(args, "lib", None):
        raise UsageError("give either --model or --lib, not both")
    if getattr(args, "model", None):
        with open(args.model, encoding="utf-8") as fh:
            text = fh.read()
        return parse_model(text, name=args.model)
    if getattr(args, "lib", None):
        return get_model(args.lib)
    raise UsageError("a model is required: --model FILE or --lib NAME")


class UsageError(ValueError):
    pass


# -- command handlers: each returns (exit_code, payload, human lines) ----


def _cmd_validate(args):
    try:
        model = _load_model(args)
    except ModelValidationError as err:
        payload = {
            "valid": False,
            "violations": [
                {"generator": v.generator, "condition": v.condition, "message": v.message}
                for v in err.violations
            ],
        }
        lines = ["INVALID"] + [f"  {v}" for v in err.violations]
        return EXIT_VALIDATION, payload, lines
    violations = check_model(model)
    profile = length_profile(model)
    payload = {
        "valid": not violations,
        "model": model.name,
        "generators": [f"{g.name}:{g.degree}" for g in model.generators],
        "simply_connected": model.simply_connected,
        "length_profile": {"kind": profile.kind, "l": profile.l},
    }
    lines = [
        f"model {model.name or '<anonymous>'}: VALID",
        f"  generators: {', '.join(payload['generators'])}",
        f"  simply connected: {model.simply_connected}",
        f"  length profile: {profile.kind}({profile.l})",
    ]
    return EXIT_OK, payload, lines


def _cmd_cohomology(args):
    model = _load_model(args)
    engine = engine_for(model)
    engine.require_certificate(args.window)
    table = engine.cohomology_table()
    gens = model.generators
    payload = {
        "model": model.name,
        "formal_dimension": table.formal_dimension,
        "betti": list(table.betti),
        "total_dimension": table.total_dimension,
        "classes": {
            str(i): [c.pretty(gens) for c in per_degree]
            for i, per_degree in enumerate(table.classes)
            if per_degree
        },
    }
    lines = [
        f"model {model.name or '<anonymous>'}",
        f"formal dimension N = {table.formal_dimension}",
        f"total dim H = {table.total_dimension}",
        "betti numbers:",
    ]
    for i, b in enumerate(table.betti):
        if b:
            reps = ", ".join(c.pretty(gens) for c in table.classes[i])
            lines.append(f"  b_{i} = {b}   [{reps}]")
    return EXIT_OK, payload, lines


def _cmd_bigraded(args):
    model = _load_model(args)
    engine = engine_for(model)
    engine.require_certificate(args.window)
    table = engine.bigraded_profile()
    payload = {
        "model": model.name,
        "formal_dimension": table.formal_dimension,
        "e_top": table.e_top,
        "h": [list(row) for row in table.h],
        "n_k": list(table.n_k),
        "N_k": list(table.N_k),
        "length_dimensions": list(table.length_dims()),
    }
    lines = [
        f"model {model.name or '<anonymous>'}",
        f"formal dimension N = {table.formal_dimension}, top length e = {table.e_top}",
        f"dim H_k by length: {list(table.length_dims())}",
        f"n_k = {list(table.n_k)}",
        f"N_k = {list(table.N_k)}",
        "h[i][k] (rows i = 0..N):",
    ]
    header = "  i\\k " + " ".join(f"{k:>3d}" for k in range(table.e_top + 1))
    lines.append(header)
    for i, row in enumerate(table.h):
        lines.append(f"  {i:>3d} " + " ".join(f"{v:>3d}" for v in row))
    return EXIT_OK, payload, lines


def _cmd_toomer(args):
    model = _load_model(args)
    engine = engine_for(model)
    engine.require_certificate(args.window)
    report = e0_spectrum(model)
    gens = model.generators
    per_class = []
    for i, values in enumerate(report.per_class, start=1):
        if values:
            classes = engine.classes(i)
            per_class.append(
                {
                    "degree": i,
                    "values": list(values),
                    "classes": [c.pretty(gens) for c in classes],
                }
            )
    payload = {
        "model": model.name,
        "e0": report.e0_algebra,
        "cat0": report.cat0,
        "spectrum": list(report.spectrum),
        "gaps": list(report.gaps),
        "dim_h_plus": report.total_h_plus,
        "per_class": per_class,
    }
    lines = [
        f"model {model.name or '<anonymous>'}",
        f"e0 = {report.e0_algebra}   (cat0 = {report.cat0} via the ellipticity certificate)",
        f"spectrum mu_k, k = 0..{report.e0_algebra}: {list(report.spectrum)}",
        f"gaps: {list(report.gaps) or 'none'}",
        "per-class e0:",
    ]
    for entry in per_class:
        pairs = ", ".join(
            f"[{cls}] -> {v}" for cls, v in zip(entry["classes"], entry["values"])
        )
        lines.append(f"  degree {entry['degree']}: {pairs}")
    return EXIT_OK, payload, lines


def _cmd_sequence(args, kind):
    model = _load_model(args)
    build = build_wang if kind == "wang" else build_gysin
    les = build(model, bigraded=False if args.ungraded else None)
    report = check_exactness(les)
    relation = report.dimension_relation
    payload = {
        "model": model.name,
        "sequence": kind,
        "bigraded": report.bigraded,
        "nodes_checked": len(report.nodes),
        "all_exact": report.all_exact,
        "failures": [
            {
                "position": v.position,
                "role": v.role,
                "rank_in": v.rank_in,
                "kernel_out": v.kernel_out,
                "composite_zero": v.composite_zero,
                "witness": _jsonable(v.witness),
            }
            for v in report.failures
        ],
        "dimension_relation": {
            "parity": relation.parity,
            "N": relation.n_total,
            "M": relation.m_quotient,
            "expected_N": relation.expected,
            "holds": relation.holds,
        },
    }
    lines = [
        f"model {model.name or '<anonymous>'}: {kind} sequence "
        f"({'bigraded' if report.bigraded else 'ungraded'})",
        f"nodes checked: {len(report.nodes)}",
        f"exactness: {'PASS (all nodes exact)' if report.all_exact else 'FAIL'}",
        f"dimension relation ({relation.parity} case): N = {relation.n_total}, "
        f"M = {relation.m_quotient}, expected N = {relation.expected} -> "
        f"{'holds' if relation.holds else 'VIOLATED'}",
    ]
    for v in report.failures:
        lines.append(
            f"  FAIL at {v.position} ({v.role}): rank(in) = {v.rank_in}, "
            f"dim ker(out) = {v.kernel_out}, composite zero: {v.composite_zero}, "
            f"witness: {_jsonable(v.witness)}"
        )
    code = EXIT_OK if report.all_exact and relation.holds else EXIT_VERDICT
    return code, payload, lines


def _cmd_verify(args):
    model = _load_model(args)
    if args.theorem == "all":
        reports = verify_all(model)
    else:
        reports = [ALL_THEOREMS[args.theorem](model)]
    payload = {
        "model": model.name,
        "reports": [
            {
                "theorem": r.theorem_id,
                "verdict": r.verdict,
                "witnesses": _jsonable(r.witnesses),
                "derived": _jsonable(r.derived),
            }
            for r in reports
        ],
    }
    lines = [f"model {model.name or '<anonymous>'}"]
    for r in reports:
        lines.append(f"  {r.theorem_id:12s} {r.verdict}")
        for key, value in r.witnesses.items():
            lines.append(f"    {key}: {value}")
    if any(r.verdict == "fail" for r in reports):
        return EXIT_VERDICT, payload, lines
    # a single requested theorem whose hypotheses fail is distinguishable
    # for scripting: exit 3 rather than a silent 0
    if args.theorem != "all" and reports[0].verdict == "not-applicable":
        return EXIT_VALIDATION, payload, lines
    return EXIT_OK, payload, lines


def _cmd_gap_scan(args):
    corpus = []
    if args.include_library:
        for m in library():
            cert = engine_for(m).certify()
            if cert.ok:
                corpus.append((m, None))
    params = RandomModelParams(n_even=args.evens, n_odd=args.odds, l=args.length)
    for offset in range(args.count):
        seed = args.seed + offset
        corpus.append((random_elliptic_model(seed, params), seed))
    records = gap_scan(corpus)
    payload = {
        "corpus_size": len(records),
        "params": {
            "count": args.count, "seed": args.seed, "evens": args.evens,
            "odds": args.odds, "length": args.length,
            "include_library": bool(args.include_library),
        },
        "gaps_found": sum(1 for r in records if r.gaps),
        "records": [
            {
                "model": r.model_name,
                "seed": r.seed,
                "e0": r.e0,
                "spectrum": list(r.spectrum),
                "gaps": list(r.gaps),
                "verdict": r.verdict,
                "model_text": r.model_text,
            }
            for r in records
        ],
    }
    lines = [f"gap scan over {len(records)} certified elliptic models"]
    for r in records:
        lines.append(
            f"  {r.model_name}: e0 = {r.e0}, spectrum {list(r.spectrum)}, {r.verdict}"
        )
    found = payload["gaps_found"]
    if found:
        lines.append(f"*** {found} MODEL(S) WITH e0-GAPS -- research-grade finding, "
                     f"records preserved above ***")
    else:
        lines.append("no gaps found")
    return (EXIT_VERDICT if found else EXIT_OK), payload, lines


def _cmd_library(args):
    if args.emit:
        text = model_text(args.emit)
        payload = {"name": args.emit, "text": text}
        return EXIT_OK, payload, [text.rstrip("\n")]
    names = library_names()
    payload = {"models": names}
    lines = ["built-in models:"] + [f"  {n}" for n in names]
    return EXIT_OK, payload, lines


def run_command(argv) -> tuple[int, dict]:
    """Parse argv, run the command, return (exit code, report document).

    The document contains both the machine tree and the human rendering.
    """
    args = _parser().parse_args(argv)
    return _execute(args)


def _execute(args) -> tuple[int, dict]:
    handlers = {
        "validate": _cmd_validate,
        "cohomology": _cmd_cohomology,
        "bigraded": _cmd_bigraded,
        "toomer": _cmd_toomer,
        "wang": lambda a: _cmd_sequence(a, "wang"),
        "gysin": lambda a: _cmd_sequence(a, "gysin"),
        "verify": _cmd_verify,
        "gap-scan": _cmd_gap_scan,
        "library": _cmd_library,
    }
    try:
        code, payload, lines = handlers[args.command](args)
    except UsageError as err:
        return EXIT_USAGE, _document(args, {"error": str(err)}, [f"usage error: {err}"])
    except (ModelSyntaxError, ModelValidationError, UnknownModelError,
            QuotientError, NotEllipticError, NotHomogeneousError,
            GenerationBudgetError, FileNotFoundError) as err:
        msg = str(err)
        return EXIT_VALIDATION, _document(args, {"error": msg}, [f"error: {msg}"])
    except InternalInvariantError as err:
        msg = str(err)
        return EXIT_INTERNAL, _document(
            args, {"error": msg}, [f"internal invariant breach: {msg}"]
        )
    return code, _document(args, payload, lines)


def _document(args, payload, lines) -> dict:
    doc = {
        "tool": "sullivan",
        "version": __version__,
        "command": args.command,
    }
    if not getattr(args, "no_timestamp", False):
        doc["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    doc.update(payload)
    doc["rendering"] = lines
    return doc


def main(argv=None) -> int:
    argv = argv if argv is not None else sys.argv[1:]
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:  # argparse has already printed usage/version
        return EXIT_USAGE if exc.code not in (0, None) else 0
    code, doc = _execute(args)
    if getattr(args, "format", "text") == "json":
        rendered = json.dumps(doc, indent=2)
    else:
        rendered = "\n".join(doc["rendering"])
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(rendered + "\n")
    else:
        print(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
