"""
The `mvkit` command: parse and check model files, run the Mayer-Vietoris
constructions on K-group ladders and run the seeded property suites.

Example usage::

    $ mvkit parse ladder.mv
    $ mvkit check ladder.mv
    $ mvkit mv2 ladder.mv --ladder L --emit machine
    $ mvkit props --suite mv2 --trials 300 --seed 7
    $ mvkit replay --suite mv2 counterexamples/mv2-mv2-exact.mv
    $ mvkit snf matrix.txt

Exit status is 0 when everything checked holds, 1 when a property or
exactness check fails (the report, including a replayable counterexample, is
printed on stdout) and 2 for bad input.
"""

from argparse import ArgumentParser, Namespace
from pathlib import Path

import logging
import sys

from mvkit import __version__
from mvkit.intmatrix import parse_matrix_text, format_matrix
from mvkit.normal_forms import snf
from mvkit.groups import format_invariants
from mvkit.diagrams import check_row_exact, check_ladder_squares
from mvkit.milnor import validate_ladder
from mvkit.model_file import Model, parse_model_file, format_model
from mvkit.random_models import TrialConfig, trial_config_from_toml
from mvkit.suites import SUITES, ReportDocument, run_suite, replay
from mvkit.report import emit_report

from mvkit.scripts.exception_formatting import (
    mvkit_exception_formatting,
    EXACTNESS_FAILURE,
)


def _read_model(path: Path) -> Model:
    try:
        text = path.read_text()
    except OSError as exc:
        exc.add_note(f"While reading model file {path}")
        raise
    try:
        return parse_model_file(text)
    except Exception as exc:
        exc.add_note(f"In model file {path}")
        raise


def _status(doc: ReportDocument) -> int:
    return 0 if doc.passed else EXACTNESS_FAILURE


def cmd_parse(args: Namespace) -> int:
    print(format_model(_read_model(args.file)), end="")
    return 0


def cmd_check(args: Namespace) -> int:
    model = _read_model(args.file)
    if args.ladder is not None and args.ladder not in (
        set(model.ladders) | set(model.k_ladders)
    ):
        print(f"no ladder named '{args.ladder}'", file=sys.stderr)
        return 2

    ok = True

    if args.ladder is None:
        for name, row in model.rows.items():
            report = check_row_exact(row)
            ok &= report.exact
            print(f"row {name}: {report}")
    for name, ladder in model.ladders.items():
        if args.ladder not in (None, name):
            continue
        failed = [s for s in check_ladder_squares(ladder) if not s.commutes]
        ok &= not failed
        if failed:
            for square in failed:
                print(
                    f"ladder {name}: square {square.square} does not commute "
                    f"(witness generator {square.witness})"
                )
        else:
            print(f"ladder {name}: all squares commute")
    for name, k in model.k_ladders.items():
        if args.ladder not in (None, name):
            continue
        ladder_report = validate_ladder(k)
        ok &= ladder_report.valid
        print(f"ladder {name}: " + ("valid" if ladder_report.valid else "invalid"))
        for violation in ladder_report.violations():
            print(f"  {violation}")

    return 0 if ok else EXACTNESS_FAILURE


def cmd_ladder_suite(args: Namespace) -> int:
    doc = replay(args.command, _read_model(args.file), args.ladder)
    print(emit_report(doc, args.emit), end="")
    return _status(doc)


def _trial_config(args: Namespace) -> TrialConfig:
    overrides = {
        "seed": args.seed,
        "trials": args.trials,
        "max_order": args.max_order,
        "max_rank": args.max_rank,
        "max_factors": args.max_factors,
    }
    text = "" if args.config is None else args.config.read_text()
    return trial_config_from_toml(text, **overrides)


def cmd_props(args: Namespace) -> int:
    doc = run_suite(args.suite, _trial_config(args))
    print(emit_report(doc, args.emit), end="")

    if args.counterexample_dir is not None:
        args.counterexample_dir.mkdir(parents=True, exist_ok=True)
        for p in doc.failures():
            if p.counterexample is not None:
                path = args.counterexample_dir / f"{doc.suite}-{p.name}.mv"
                path.write_text(format_model(p.counterexample))
                logging.getLogger(__name__).info("Wrote counterexample %s", path)
    return _status(doc)


def cmd_replay(args: Namespace) -> int:
    doc = replay(args.suite, _read_model(args.file))
    print(emit_report(doc, args.emit), end="")
    return _status(doc)


def cmd_snf(args: Namespace) -> int:
    m = parse_matrix_text(args.file.read_text())
    form = snf(m)
    d, u, v = form
    print("D:")
    print(format_matrix(d), end="")
    print("U:")
    print(format_matrix(u), end="")
    print("V:")
    print(format_matrix(v), end="")
    # Z^rows / im(M): one factor per row of M
    diagonal = form.diagonal() + [0] * (m.rows - min(m.rows, m.cols))
    print(f"cokernel: {format_invariants([x for x in diagonal if x != 1])}")
    return 0


def _add_emit(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--emit",
        choices=("human", "machine"),
        default="human",
        help="""
            Report format: an aligned table ('human') or one key=value record
            per line ('machine'). Default: %(default)s.
        """,
    )


def make_parser() -> ArgumentParser:
    parser = ArgumentParser(
        description="""
            Mayer-Vietoris constructions and exactness checking over finitely
            generated abelian groups.
        """
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--verbose",
        "-v",
        action="count",
        default=0,
        help="""
            Log progress to stderr. Give twice for debugging output.
        """,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser(
        "parse",
        help="""
            Parse a model file and print it back, naming any unnamed objects.
        """,
    )
    p.add_argument("file", type=Path)
    p.set_defaults(func=cmd_parse)

    p = subparsers.add_parser(
        "check",
        help="""
            Check the exactness of every row and the commutativity of every
            ladder in a model file.
        """,
    )
    p.add_argument("file", type=Path)
    p.add_argument(
        "--ladder",
        help="""
            Check only the named ladder.
        """,
    )
    p.set_defaults(func=cmd_check)

    for name, help_text in (
        ("mv1", "the modified Mayer-Vietoris segment through sub-K and quo-K"),
        ("mv2", "the Mayer-Vietoris segment through X"),
        ("phi", "the map phi from X and its kernel and image"),
    ):
        p = subparsers.add_parser(
            name,
            help=f"Build and check {help_text} for a K-group ladder in a model file.",
        )
        p.add_argument("file", type=Path)
        p.add_argument(
            "--ladder",
            help="""
                The K-group ladder to examine. May be omitted when the file
                declares only one.
            """,
        )
        _add_emit(p)
        p.set_defaults(func=cmd_ladder_suite)

    p = subparsers.add_parser(
        "props",
        help="""
            Run a seeded property suite.
        """,
    )
    p.add_argument(
        "--suite",
        required=True,
        choices=list(SUITES),
        help="""
            The suite to run.
        """,
    )
    defaults = TrialConfig()
    for option, help_text in (
        ("--seed", "The master seed."),
        ("--trials", "The number of random instances."),
        ("--max-order", "The largest torsion invariant factor drawn."),
        ("--max-rank", "The largest free rank drawn."),
        ("--max-factors", "The largest number of torsion factors drawn."),
    ):
        default = getattr(defaults, option[2:].replace("-", "_"))
        p.add_argument(
            option,
            type=int,
            default=None,
            help=f"{help_text} Default: {default}.",
        )
    p.add_argument(
        "--config",
        type=Path,
        help="""
            A TOML file whose [trials] table sets any of seed, trials,
            max_order, max_rank and max_factors. Options given on the command
            line take precedence.
        """,
    )
    p.add_argument(
        "--counterexample-dir",
        type=Path,
        help="""
            Write the counterexample of each failing property to
            DIR/<suite>-<property>.mv.
        """,
    )
    _add_emit(p)
    p.set_defaults(func=cmd_props)

    p = subparsers.add_parser(
        "replay",
        help="""
            Run a suite's properties on a single model file, such as a
            counterexample written by 'props'.
        """,
    )
    p.add_argument("--suite", required=True, choices=list(SUITES))
    p.add_argument("file", type=Path)
    _add_emit(p)
    p.set_defaults(func=cmd_replay)

    p = subparsers.add_parser(
        "snf",
        help="""
            Print the Smith normal form D = U M V of a matrix given as
            whitespace separated rows of integers.
        """,
    )
    p.add_argument("file", type=Path)
    p.set_defaults(func=cmd_snf)

    return parser


def main(argv: list[str] | None = None) -> None:
    args = make_parser().parse_args(argv)

    logging.basicConfig(
        level={0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG),
        format="%(levelname)s: %(name)s: %(message)s",
        stream=sys.stderr,
    )

    with mvkit_exception_formatting():
        status = args.func(args)
    if status:
        sys.exit(status)


if __name__ == "__main__":
    main()
