"""Command-line front door.

Exit codes: 0 satisfiable, 1 unsatisfiable, 2 usage or parse error,
3 resource limit.  The verdict is the first line on standard output;
diagnostics, including the rule trace, go to standard error.
"""

from __future__ import annotations

import argparse
import sys
import time

from .engine import Limits, ResourceLimitError, decide
from .lii import SolverLimitError
from .oracle import Interpretation, NoneFound, OracleLimitError, find_model
from .problems import ProblemFileError, parse_problem_text, parse_tbox_text
from .syntax import ConceptSyntaxError, build_problem, parse_concept

EXIT_SAT = 0
EXIT_UNSAT = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alcqisat",
        description="Decide concept satisfiability in ALCQI with general axioms.",
    )
    parser.add_argument("file", nargs="?", help="problem file with gci/axiom lines and one sat line")
    parser.add_argument("--concept", help="query concept text, instead of a problem file")
    parser.add_argument("--tbox", help="axioms-only file, used together with --concept")
    parser.add_argument("--trace", action="store_true", help="print one line per rule application to stderr")
    parser.add_argument("--dump-lii", action="store_true",
                        help="print every inequality system in matrix form to stderr")
    parser.add_argument("--stats", action="store_true", help="print run statistics")
    parser.add_argument(
        "--oracle-check",
        type=int,
        metavar="N",
        help="also run the bounded model search up to domain size N and report agreement",
    )
    parser.add_argument("--lambda-max", type=int, default=10, metavar="K",
                        help="most distinct fillers per role before giving up (default 10)")
    parser.add_argument("--node-budget", type=int, default=1_000_000, metavar="N",
                        help="most node expansions per tree (default 1000000)")
    parser.add_argument("--strict-blocking", action="store_true",
                        help="include the cut-set context in the blocking key")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_arg_parser()
    args = parser.parse_args(argv)

    if args.file and args.concept:
        print("error: give either a problem file or --concept, not both", file=sys.stderr)
        return EXIT_USAGE
    if not args.file and not args.concept:
        print("error: a problem file or --concept is required", file=sys.stderr)
        return EXIT_USAGE
    if args.file and args.tbox:
        print("error: --tbox only combines with --concept", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.file:
            try:
                with open(args.file, "r", encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_USAGE
            try:
                pf = parse_problem_text(text)
            except ProblemFileError as exc:
                print(f"error: {args.file}:{exc.line}:{exc.column}: {exc}", file=sys.stderr)
                return EXIT_USAGE
            tbox, query = pf.tbox, pf.query
        else:
            try:
                query = parse_concept(args.concept)
            except ConceptSyntaxError as exc:
                print(f"error: --concept: {exc}", file=sys.stderr)
                return EXIT_USAGE
            tbox = ()
            if args.tbox:
                try:
                    with open(args.tbox, "r", encoding="utf-8") as fh:
                        tbox_text = fh.read()
                except OSError as exc:
                    print(f"error: {exc}", file=sys.stderr)
                    return EXIT_USAGE
                try:
                    tbox = parse_tbox_text(tbox_text)
                except ProblemFileError as exc:
                    print(f"error: {args.tbox}:{exc.line}:{exc.column}: {exc}", file=sys.stderr)
                    return EXIT_USAGE

        problem = build_problem(query, tbox)
        limits = Limits(lambda_max=args.lambda_max, node_budget=args.node_budget)
        to_stderr = lambda line: print(line, file=sys.stderr)  # noqa: E731
        trace = to_stderr if args.trace else None
        dump = to_stderr if args.dump_lii else None

        started = time.perf_counter()
        verdict = decide(
            problem,
            limits,
            strict_blocking=args.strict_blocking,
            trace=trace,
            dump_systems=dump,
        )
        wall_ms = int((time.perf_counter() - started) * 1000)
    except (ResourceLimitError, SolverLimitError) as exc:
        print(f"error: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE

    print("SAT" if verdict.satisfiable else "UNSAT")
    if args.stats:
        s = verdict.stats
        print(f"restarts={s.restarts}")
        print(f"nodes={s.nodes}")
        print(f"nogoods={s.nogoods}")
        print(f"lii_solves={s.lii_solves}")
        print(f"max_lambda={s.max_lambda}")
        print(f"wall_ms={wall_ms}")

    if args.oracle_check is not None:
        _report_oracle(problem, verdict.satisfiable, args.oracle_check)

    return EXIT_SAT if verdict.satisfiable else EXIT_UNSAT


def _report_oracle(problem, engine_sat: bool, max_domain: int) -> None:
    try:
        result = find_model(problem.goal, problem.axiom, max_domain=max_domain)
    except OracleLimitError as exc:
        print(f"oracle: refused ({exc})")
        return
    if isinstance(result, Interpretation):
        print(f"oracle: model found (domain size {result.domain_size})")
        if engine_sat:
            print("oracle: agreement ok")
        else:
            print("oracle: MISMATCH, engine said UNSAT but a model exists:")
            print(result.dump())
    else:
        assert isinstance(result, NoneFound)
        print(f"oracle: no model up to domain size {result.searched_max_domain}")
        print("oracle: agreement ok" if not engine_sat else
              "oracle: inconclusive (bounded search cannot confirm SAT)")


if __name__ == "__main__":
    sys.exit(main())
