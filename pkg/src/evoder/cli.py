"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 input error, 3 structural zero
contradicted by the solver, 4 ``check`` found a non-derivation.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from .classify3 import LETTERS, classify, template_check
from .core import DimensionTooLarge, Matrix, ParseError, ShapeMismatch, format_rational, parse_algebra, parse_matrix
from .report import analyze, certificate_json, dumps, match_json, report_dict
from .solver import derivation_space, is_derivation
from .structural import certificates

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INCONSISTENT, EXIT_NOT_DERIVATION = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: usage: {message}\n")
        sys.exit(EXIT_USAGE)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: cannot read ({exc.__class__.__name__})") from None


def _load_algebra(path: str):
    try:
        return parse_algebra(_read(path))
    except (ParseError, ShapeMismatch, DimensionTooLarge) as exc:
        raise InputError(f"{path}: {exc.__class__.__name__}: {exc}") from None


def _load_matrix(path: str) -> Matrix:
    try:
        return parse_matrix(_read(path))
    except (ParseError, ShapeMismatch, DimensionTooLarge) as exc:
        raise InputError(f"{path}: {exc.__class__.__name__}: {exc}") from None


def format_matrix(m: Matrix, indent: str = "  ") -> str:
    cells = [[format_rational(x) for x in row] for row in m]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join(indent + "[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def _sets(vs) -> str:
    return "{" + ", ".join(str(v + 1) for v in vs) + "}"


# -- commands ---------------------------------------------------------------


def cmd_analyze(args, out) -> int:
    an = analyze(_load_algebra(args.file))
    if args.json:
        out.write(dumps(report_dict(an)))
        return EXIT_OK
    p = an.properties
    out.write(f"dimension: {an.algebra.n}\n")
    out.write("graph adjacency:\n")
    for row in an.graph.adjacency:
        out.write("  " + " ".join(str(int(x)) for x in row) + "\n")
    out.write(f"sinks: {_sets(p.sinks)}\n")
    out.write(f"non-degenerate: {str(p.non_degenerate).lower()}\n")
    out.write(f"connected: {str(p.connected).lower()}\n")
    out.write(f"cycle: {'none' if p.cycle is None else ' -> '.join(str(v + 1) for v in p.cycle.vertices)}\n")
    out.write("twin partition:\n")
    for c in an.partition.classes:
        out.write(f"  {_sets(c.members)}  with loop {_sets(c.with_loop)}  without loop {_sets(c.without_loop)}\n")
    out.write(f"twin-free: {str(an.twin_free).lower()}\n")
    return EXIT_OK


def space_json(space) -> dict:
    return {
        "derivation_dimension": space.dimension,
        "basis": [[[format_rational(x) for x in row] for row in b] for b in space.basis],
    }


def cmd_derive(args, out) -> int:
    a = _load_algebra(args.file)
    space = derivation_space(a)
    if args.json:
        out.write(dumps({"dimension": a.n, **space_json(space)}))
        return EXIT_OK
    out.write(f"derivation dimension: {space.dimension}\n")
    for t, b in enumerate(space.basis, start=1):
        out.write(f"basis element {t}:\n{format_matrix(b)}\n")
    return EXIT_OK


def cmd_certify(args, out) -> int:
    an = analyze(_load_algebra(args.file))
    certs = [certificate_json(c) for c in certificates(an.pattern)]
    if args.json:
        out.write(
            dumps(
                {
                    "dimension": an.algebra.n,
                    "zero_certificates": certs,
                    "structural_consistent": an.consistent,
                    "derivation_dimension": an.space.dimension,
                }
            )
        )
    else:
        out.write(f"proven zero cells: {len(certs)} of {an.algebra.n ** 2}\n")
        for c in certs:
            out.write(f"  d[{c['row']},{c['col']}] = 0  by {c['rule']}\n")
        verdict = "consistent" if an.consistent else "INCONSISTENT"
        out.write(f"structural vs solver: {verdict} (derivation dimension {an.space.dimension})\n")
    if not an.consistent:
        b, i, j = an.contradictions[0]
        sys.stderr.write(f"error: inconsistent: cell ({i + 1},{j + 1}) proven zero but nonzero in basis element {b + 1}\n")
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_classify(args, out) -> int:
    a = _load_algebra(args.file)
    m = classify(a)
    check = template_check(a, m, derivation_space(a)) if m.verdict == "Type" else None
    if args.json:
        out.write(dumps({"dimension": a.n, "classification": match_json(m, check)}))
        return EXIT_OK
    if m.verdict == "NotApplicable":
        out.write(f'NotApplicable("{m.reason}")\n')
        return EXIT_OK
    if m.verdict == "TwinFree":
        out.write("TwinFree: the only derivation is zero\n")
        return EXIT_OK
    roles = ", ".join(f"{LETTERS[x]}={m.assignment[x] + 1}" for x in range(3))
    out.write(f"Type {m.type_id} ({m.arrows} arrows) with {roles}\n")
    out.write(f"template parameters: {check.parameter_count}, computed dimension: {check.dimension}\n")
    if check.holds:
        out.write("template check: passes\n")
    else:
        v = check.violation
        out.write(
            f"template check: table discrepancy at d[{v.cell[0] + 1},{v.cell[1] + 1}]:"
            f" computed {format_rational(v.actual)}, template ({v.relation}) gives {format_rational(v.expected)}\n"
        )
    return EXIT_OK


def cmd_check(args, out) -> int:
    a = _load_algebra(args.algebra)
    d = _load_matrix(args.matrix)
    if len(d) != a.n:
        raise InputError(f"{args.matrix}: ShapeMismatch: matrix is {len(d)}x{len(d)}, algebra has dimension {a.n}")
    res = is_derivation(a, d)
    residual = None
    if res.residual is not None:
        origin = res.residual.origin
        residual = {"equation": origin[0], "indices": [x + 1 for x in origin[1:]], "value": format_rational(res.residual.value)}
    if args.json:
        out.write(dumps({"is_derivation": res.holds, "residual": residual}))
    elif res.holds:
        out.write("derivation: true\n")
    else:
        idx = ",".join(str(x) for x in residual["indices"])
        out.write(f"derivation: false\nfirst residual: {residual['equation']}({idx}) = {residual['value']}\n")
    return EXIT_OK if res.holds else EXIT_NOT_DERIVATION


def _batch_one(path: str) -> dict:
    try:
        return {"file": path, **space_json(derivation_space(_load_algebra(path)))}
    except InputError as exc:
        return {"file": path, "error": str(exc)}


def cmd_batch(args, out) -> int:
    root = Path(args.directory)
    if not root.is_dir():
        raise InputError(f"{args.directory}: not a directory")
    files = sorted(str(p) for p in root.iterdir() if p.is_file() and not p.name.startswith("."))
    if args.jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_batch_one, files))
    else:
        results = [_batch_one(f) for f in files]
    failed = [r for r in results if "error" in r]
    if args.json:
        out.write(dumps({"results": results}))
    else:
        for r in results:
            if "error" in r:
                out.write(f"{r['file']}: error\n")
            else:
                out.write(f"{r['file']}: derivation dimension {r['derivation_dimension']}\n")
    for r in failed:
        sys.stderr.write(f"error: input: {r['error']}\n")
    return EXIT_INPUT if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit deterministic JSON")
    common.add_argument("--seed", type=int, default=None, help="seed for commands that generate (currently none)")

    parser = _Parser(prog="evoder", description="Derivations of evolution algebras from structure matrices.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("analyze", parents=[common], help="graph properties and twin partition (full report with --json)")
    p.add_argument("file")
    p = sub.add_parser("derive", parents=[common], help="dimension and canonical basis of the derivation space")
    p.add_argument("file")
    p = sub.add_parser("certify", parents=[common], help="zero certificates and their agreement with the solver")
    p.add_argument("file")
    p = sub.add_parser("classify", parents=[common], help="graph type of a 3-dimensional algebra")
    p.add_argument("file")
    p = sub.add_parser("check", parents=[common], help="test whether a matrix is a derivation")
    p.add_argument("algebra")
    p.add_argument("matrix")
    p = sub.add_parser("batch", parents=[common], help="derive every file in a directory")
    p.add_argument("directory")
    p.add_argument("--jobs", type=int, default=1)
    return parser


COMMANDS = {
    "analyze": cmd_analyze,
    "derive": cmd_derive,
    "certify": cmd_certify,
    "classify": cmd_classify,
    "check": cmd_check,
    "batch": cmd_batch,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except InputError as exc:
        sys.stderr.write(f"error: input: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
