"""Command line interface: ``hodgenorm norms | verify | straighten``.

Exit codes: 0 when everything was computed and all checked invariants held,
1 when an invariant or inequality was violated, 2 for input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Any, Sequence

from . import bounds, fileio, report
from .complex import ComplexError
from .hyperbolic import QuadratureError
from .metric import MetricError

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


def _fmt(v: Any) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return fileio.json.dumps(v, sort_keys=True)
    return str(v).replace("|", "\\|")


def to_markdown(doc: dict[str, Any], title: str | None = None) -> str:
    """Render a report document as markdown without dropping any field."""
    lines = [f"# {title or doc.get('command', 'report')}", ""]
    tables = []
    for key in sorted(doc):
        val = doc[key]
        if isinstance(val, list) and val and all(isinstance(r, dict) for r in val):
            tables.append((key, val))
        else:
            lines.append(f"- **{key}**: {_fmt(val)}")
    for key, rows in tables:
        cols = sorted({c for r in rows for c in r})
        if "provenance" in cols:  # keep the citation column last
            cols.remove("provenance")
            cols.append("provenance")
        lines += ["", f"## {key}", "", "| " + " | ".join(cols) + " |",
                  "|" + "---|" * len(cols)]
        lines += ["| " + " | ".join(_fmt(r.get(c)) for c in cols) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def _const(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    if name not in bounds.DEFAULT_CONSTANTS:
        raise argparse.ArgumentTypeError(
            f"unknown constant {name!r}; known: {', '.join(sorted(bounds.DEFAULT_CONSTANTS))}")
    try:
        v = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"constant {name} needs a numeric value") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"constant {name} must be positive")
    return name, v


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def _common(top: bool) -> argparse.ArgumentParser:
    # options are accepted before or after the subcommand; only the top level sets defaults
    def d(value):
        return value if top else argparse.SUPPRESS

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "markdown"), default=d("json"))
    common.add_argument("--tol", type=_positive, default=d(None),
                        help="norms: duality tolerance (1e-7); verify: relative tolerance for "
                             "discretized entries (0.05); straighten: quadrature rtol (1e-9)")
    common.add_argument("--const", type=_const, action="append", default=d([]), metavar="NAME=V",
                        help="override an unspecified dimensional constant")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common(False)
    parser = argparse.ArgumentParser(prog="hodgenorm", parents=[_common(True)],
                                     description="Harmonic, simplicial l1 and comass norms with "
                                                 "explicit bound verification.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("norms", parents=[common], help="norms of every homology class")
    p.add_argument("--mesh", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--class", dest="cls", type=int, default=None)
    p = sub.add_parser("verify", parents=[common], help="bound report for a mesh and descriptor")
    p.add_argument("--mesh", required=True)
    p.add_argument("--descriptor", required=True)
    p = sub.add_parser("straighten", parents=[common], help="random straightened simplex volumes")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--radius", type=float, default=5.0)
    p.add_argument("--a", type=float, default=1.0)
    return parser


def _seed(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("HODGENORM_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValueError(f"HODGENORM_SEED must be an integer, got {env!r}") from None


def run(args: argparse.Namespace) -> tuple[dict[str, Any], bool]:
    if args.command == "norms":
        M = fileio.read_mesh(args.mesh)
        return report.norms_document(M, args.degree, select=args.cls,
                                     tol=args.tol if args.tol else 1e-7)
    if args.command == "verify":
        M = fileio.read_mesh(args.mesh)
        desc = fileio.read_descriptor(args.descriptor)
        desc.unspecified_constants.update(dict(args.const))
        return report.verify_document(M, desc, rtol=args.tol or bounds.DISCRETE_RTOL)
    return report.straighten_document(args.k, args.n, args.count, _seed(args.seed), args.radius,
                                      a=args.a, rtol=args.tol or 1e-9)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, ok = run(args)
    except (fileio.MeshFormatError, bounds.DescriptorError, ComplexError, MetricError,
            ValueError) as exc:
        print(f"hodgenorm: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except QuadratureError as exc:
        print(f"hodgenorm: error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    out = fileio.dumps(doc) if args.format == "json" else to_markdown(doc)
    sys.stdout.write(out)
    return EXIT_OK if ok else EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
