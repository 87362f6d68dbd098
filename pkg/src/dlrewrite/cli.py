"""Command line: ``rewrite``, ``answer``, ``oracle-check`` and ``eval``.

Exit status: 0 success, 1 usage or parse error, 2 budget exhausted,
3 the bundle and the oracle disagree.
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import ExitStack
from pathlib import Path
from typing import Optional, Sequence

from .budget import Budget
from .datalog import ABox, evaluate
from .pipeline import (
    PipelineConfig, Reference, answer_bundle, oracle_check, read_bundle, rewrite, write_bundle,
)
from .syntax import ParseError, format_abox, parse_abox, parse_program, parse_query, parse_tbox
from .trace import Trace

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_USAGE", "EXIT_BUDGET", "EXIT_DIFF"]

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_DIFF = 0, 1, 2, 3

log = logging.getLogger("dlrewrite")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _config(args) -> PipelineConfig:
    budget = None
    if args.budget_clauses is not None or args.budget_seconds is not None:
        budget = Budget(max_clauses=args.budget_clauses, wall_clock_limit=args.budget_seconds)
    return PipelineConfig(budget=budget, unfold=not args.no_unfold,
                          self_axioms=not args.no_self_axioms)


def _print_answers(result, out) -> None:
    if result.warning:
        print(f"warning: {result.warning}", file=sys.stderr)
    names = [v.name for v in result.variables]
    for row in sorted(result.answers):
        print(", ".join(f"{n}={c}" for n, c in zip(names, row)) if names else "true", file=out)


def cmd_rewrite(args, out) -> int:
    tbox = parse_tbox(_read(args.tbox))
    with ExitStack() as stack:
        trace = None
        if args.trace:
            trace = Trace(stack.enter_context(open(args.trace, "w", encoding="utf-8")))
        bundle = rewrite(tbox, _config(args), trace=trace)
    write_bundle(bundle, args.out)
    stats = bundle.metadata["statistics"]
    print(f"{bundle.status}: {len(bundle.p_horn)} Horn rules, {len(bundle.xi)} role rules, "
          f"{stats['derived']} clauses derived in {stats['seconds']} s -> {args.out}", file=out)
    return EXIT_OK if bundle.terminated else EXIT_BUDGET


def cmd_answer(args, out) -> int:
    bundle = read_bundle(args.bundle)
    result = answer_bundle(bundle, parse_abox(_read(args.abox)), parse_query(_read(args.query)))
    _print_answers(result, out)
    return EXIT_OK


def cmd_oracle_check(args, out) -> int:
    tbox = parse_tbox(_read(args.tbox))
    abox = parse_abox(_read(args.abox))
    query = parse_query(_read(args.query)) if args.query else None
    config = _config(args)
    bundle = read_bundle(args.bundle) if args.bundle else rewrite(tbox, config)
    report = oracle_check(bundle, Reference.of(tbox, config), abox, query)
    for line in report.lines():
        print(line, file=out)
    if not report.ok:
        return EXIT_DIFF
    return EXIT_OK if bundle.terminated else EXIT_BUDGET


def cmd_eval(args, out) -> int:
    result = evaluate(parse_program(_read(args.program)), parse_abox(_read(args.abox)))
    if result.inconsistent:
        print("warning: the program derives false on this ABox", file=sys.stderr)
    out.write(format_abox(ABox(frozenset(result.facts))))
    return EXIT_OK


def _budget_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget-clauses", type=int, metavar="N",
                   help="stop Horn compilation after N derived clauses")
    p.add_argument("--budget-seconds", type=float, metavar="S",
                   help="stop Horn compilation after S seconds")
    p.add_argument("--no-unfold", action="store_true",
                   help="keep the concepts introduced by normalisation")
    p.add_argument("--no-self-axioms", action="store_true",
                   help="omit the self-loop axioms added for transitive roles")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dlrewrite", description="Rewrite SHI ontologies into datalog.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rewrite", help="compile a TBox into a datalog bundle")
    p.add_argument("--tbox", required=True, metavar="F")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--trace", metavar="F", help="write inference events as JSON lines")
    _budget_options(p)
    p.set_defaults(run=cmd_rewrite)

    p = sub.add_parser("answer", help="answer a ground query with a bundle")
    p.add_argument("--bundle", required=True, metavar="DIR")
    p.add_argument("--abox", required=True, metavar="F")
    p.add_argument("--query", required=True, metavar="F")
    p.set_defaults(run=cmd_answer)

    p = sub.add_parser("oracle-check", help="compare a bundle with the ground oracle")
    p.add_argument("--tbox", required=True, metavar="F")
    p.add_argument("--abox", required=True, metavar="F")
    p.add_argument("--query", metavar="F", help="compare answers to this query instead of all facts")
    p.add_argument("--bundle", metavar="DIR", help="use this bundle instead of rewriting the TBox")
    _budget_options(p)
    p.set_defaults(run=cmd_oracle_check)

    p = sub.add_parser("eval", help="evaluate a datalog program over an ABox")
    p.add_argument("--program", required=True, metavar="F")
    p.add_argument("--abox", required=True, metavar="F")
    p.set_defaults(run=cmd_eval)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.run(args, out)
    except ParseError as e:
        print(f"dlrewrite: parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as e:
        print(f"dlrewrite: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
