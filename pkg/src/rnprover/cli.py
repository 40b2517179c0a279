"""Command-line front end.

    rnprover prove  --logic c1  problem.p
    rnprover prove  --logic s4  --formula '#box p => p' --countermodel
    rnprover emit   --logic ipl problem.p --emit-dir out/
    rnprover oracle --logic ipl --formula '~p | ~~p'
    rnprover bench  --logic c10 --report c10.csv          # Cn_propag family
    rnprover bench  --logic ipl corpus/ --report ipl.csv  # a TPTP directory

Exit codes: 0 Valid, 1 Invalid, 2 Inconclusive (bench: 0 done, 1 on
expectation mismatches), 64 usage, 65 bad input formula, 69 solver cannot
start, 74 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import os
import shlex
import sys
from typing import Optional

from . import __version__
from .bench import cn_propag_suite, ingest_corpus, run_suite
from .encoder import BoundedRows, EncodingError, encode, sound_variant
from .formula import connectives
from .logics import get_logic
from .oracle import oracle_decide
from .results import Outcome
from .solver_runner import PortfolioConfig, SolverError, SolverSpawnError, portfolio, solver_command_from_env
from .tptp_io import DEFAULT_BOX_TOKENS, TptpError, parse_formula, read_problem

EXIT_USAGE = 64
EXIT_DATAERR = 65
EXIT_UNAVAILABLE = 69
EXIT_IOERR = 74
EXIT_CODES = {Outcome.VALID: 0, Outcome.INVALID: 1, Outcome.INCONCLUSIVE: 2}
MODES = ("prove", "emit", "bench", "oracle")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _bounds(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated row counts, got {text!r}")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rnprover", description="Validity checking for C_n, IL_p and S4 via SMT.")
    p.add_argument("mode_pos", nargs="?", metavar="MODE", help="prove, emit, bench or oracle")
    p.add_argument("input", nargs="?", help="TPTP problem file (bench: corpus directory)")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--logic", required=True, help="c<n> (n >= 1), ipl or s4")
    p.add_argument("--formula", help="inline formula instead of a file")
    p.add_argument("--solver", help="solver command; '{file}' marks the script path (default: $RNPROVER_SOLVER or z3)")
    p.add_argument("--timeout-ms", type=_positive, default=60_000)
    p.add_argument("--bounds", type=_bounds, default=(1, 2, 4, 8), help="row counts of bounded members, e.g. 1,2,4,8")
    p.add_argument("--emit-dir", default=".")
    p.add_argument("--report", help="CSV report path for bench (default: stdout)")
    p.add_argument("--countermodel", action="store_true", help="print row r0 of a countermodel")
    p.add_argument("--engine", choices=("smt", "oracle"), default="smt")
    p.add_argument("--box-token", action="append", help="extra spelling for Box (repeatable)")
    p.add_argument("--jobs", type=_positive, default=1, help="bench: instances run in parallel")
    p.add_argument("--iterate", action="store_true", help="bench: Cn_propag with the bare iterate p^i")
    p.add_argument("--strict-depth", action="store_true", help="witness rows exactly one level deeper")
    p.add_argument("--expand-preserve", action="store_true", help="preservation as a conjunction over columns")
    p.add_argument("--datatype-values", action="store_true", help="render truth values as a datatype for every logic")
    p.add_argument("--oracle-cap", type=_positive, help="column cap for the enumeration oracle")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"rnprover {__version__}")
    return p


def _config(args) -> PortfolioConfig:
    command = tuple(shlex.split(args.solver)) if args.solver else solver_command_from_env()
    try:
        return PortfolioConfig(
            solver_command=command,
            timeout_ms=args.timeout_ms,
            bounds=args.bounds,
            expand_preserve=args.expand_preserve,
            strict_depth=args.strict_depth,
            rendering="datatype" if args.datatype_values else None,
        )
    except ValueError as exc:
        raise UsageError(str(exc))


def _boxes(args) -> tuple:
    return tuple(DEFAULT_BOX_TOKENS) + tuple(args.box_token or ())


def _goal(args, spec):
    if args.formula is not None and args.input is not None:
        raise UsageError("give either a problem file or --formula, not both")
    if args.formula is not None:
        f = parse_formula(args.formula, _boxes(args))
        bad = sorted(c.value for c in connectives(f) - set(spec.language))
        if bad:
            raise TptpError(f"connective(s) {', '.join(bad)} not in the language of {spec.logic_id}", 1, 1)
        return "formula", f
    if args.input is None:
        raise UsageError(f"{args.mode} needs a problem file or --formula")
    prob = read_problem(args.input, language=spec.language, logic_name=spec.logic_id, box_tokens=_boxes(args))
    return os.path.splitext(os.path.basename(args.input))[0], prob.formula


def _print_verdict(c, show_model: bool, verbose: bool) -> None:
    print(c.outcome.value)
    if show_model and c.countermodel:
        for f, v in c.countermodel.items():
            print(f"  {f} = {v.label if v is not None else 'any'}")
    if verbose:
        extra = f" ({c.detail})" if c.detail else ""
        print(f"source: {c.source}, {c.elapsed_ms:.1f} ms{extra}", file=sys.stderr)


def _prove(args, spec) -> int:
    _, goal = _goal(args, spec)
    if args.mode == "oracle" or args.engine == "oracle":
        c = oracle_decide(spec, goal, args.oracle_cap)
    else:
        try:
            c = portfolio(spec, goal, _config(args))
        except SolverSpawnError:
            raise
        except SolverError as exc:
            print(f"rnprover: {exc}", file=sys.stderr)
            print(Outcome.INCONCLUSIVE.value)
            return EXIT_CODES[Outcome.INCONCLUSIVE]
    _print_verdict(c, args.countermodel, args.verbose)
    return EXIT_CODES[c.outcome]


def _emit(args, spec) -> int:
    stem, goal = _goal(args, spec)
    cfg = _config(args)
    variants = [sound_variant(spec, goal)]
    if not spec.local_only:
        variants += [BoundedRows(k) for k in cfg.bounds]
    os.makedirs(args.emit_dir, exist_ok=True)
    for v in variants:
        script = encode(
            spec, goal, v,
            rendering=cfg.rendering, expand_preserve=cfg.expand_preserve, strict_depth=cfg.strict_depth,
        )
        path = os.path.join(args.emit_dir, f"{stem}.{v.name}.smt2")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(script.text)
        print(path)
    return 0


def _bench(args, spec) -> int:
    cfg = _config(args)
    if args.formula is not None:
        raise UsageError("bench takes a corpus directory, not --formula")
    if args.input is not None:
        notes: list = []
        instances = ingest_corpus(args.input, spec=spec, box_tokens=_boxes(args), diagnostics=notes)
        for msg in notes:
            print(f"rnprover: skipped {msg}", file=sys.stderr)
    else:
        if not spec.logic_id.startswith("c"):
            raise UsageError("bench without a corpus directory runs Cn_propag and needs --logic c<n>")
        instances = cn_propag_suite(int(spec.logic_id[1:]), cumulative=not args.iterate)
    report = run_suite(instances, spec, cfg, engine=args.engine, jobs=args.jobs)
    if args.report:
        report.write_csv(args.report)
    else:
        sys.stdout.write(report.to_csv())
    print(report.summary(), file=sys.stderr)
    for row in report.mismatches:
        print(f"rnprover: {row.instance}: expected {row.expected.value}, got {row.conclusion.value}", file=sys.stderr)
    for row in report.errors:
        print(f"rnprover: {row.instance}: {row.error}", file=sys.stderr)
    return 1 if report.mismatches else 0


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_intermixed_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="rnprover: %(message)s")
    if args.mode_pos is not None and args.mode_pos not in MODES:
        # a lone positional is the input when --mode is given
        if args.mode is not None and args.input is None:
            args.input, args.mode_pos = args.mode_pos, None
        else:
            parser.error(f"unknown mode {args.mode_pos!r}; choose from {', '.join(MODES)}")
    if args.mode_pos and args.mode and args.mode_pos != args.mode:
        parser.error("conflicting modes")
    args.mode = args.mode or args.mode_pos
    if args.mode is None:
        parser.error("a mode is required (prove, emit, bench or oracle)")
    try:
        spec = get_logic(args.logic)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        if args.mode == "emit":
            return _emit(args, spec)
        if args.mode == "bench":
            return _bench(args, spec)
        return _prove(args, spec)
    except UsageError as exc:
        parser.error(str(exc))
    except (TptpError, EncodingError) as exc:
        print(f"rnprover: {exc}", file=sys.stderr)
        return EXIT_DATAERR
    except SolverSpawnError as exc:
        print(f"rnprover: {exc}", file=sys.stderr)
        return EXIT_UNAVAILABLE
    except OSError as exc:
        print(f"rnprover: {exc}", file=sys.stderr)
        return EXIT_IOERR
    return 0  # unreachable


if __name__ == "__main__":
    sys.exit(main())
