"""Command-line interface.

Subcommands: check, lift, build-j, verify, sweep, run, demo.  All but demo
take a `.def` definition file.  Exit status is 0 when every non-informational
verdict passes, 1 when some verdict fails, 2 on definition or usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .definition import (
    Definition,
    DefinitionError,
    Task,
    parse_definition,
    structure_to_definition,
)
from .expr import ParseError
from .lifts import COMPLETE, HORIZONTAL, Connection, LiftError
from .runner import TaskError, run_tasks
from .report import Report, Section
from .structures import (
    CONSISTENT,
    DEFAULT_SEED,
    PAPER_LITERAL,
    StructureError,
    canonical_structure,
)
from .theorems import THEOREM_SIGNS


def _add_common(parser: argparse.ArgumentParser, needs_file: bool = True) -> None:
    if needs_file:
        parser.add_argument("definition", help="path to a .def definition file")
    parser.add_argument(
        "--format",
        choices=("human", "machine"),
        default="human",
        help="report rendering (default: human)",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        help=f"seed for witness search and sampling (default: {DEFAULT_SEED})",
    )
    parser.add_argument(
        "--mode",
        choices=(PAPER_LITERAL, CONSISTENT),
        default=None,
        help="override the definition's axiom mode",
    )


def _signs(value: str) -> int:
    if value not in ("1", "+1", "-1"):
        raise argparse.ArgumentTypeError("sign must be -1 or +1")
    return int(value)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liftcheck",
        description=(
            "Exact verification of almost r-contact structure axioms and of the "
            "almost complex / paracomplex structures their lifts induce on the "
            "tangent-bundle chart."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify structure axioms (and metric if present)")
    _add_common(p)

    p = sub.add_parser("lift", help="verify the lift interaction identity tables")
    _add_common(p)
    p.add_argument(
        "--kind",
        choices=(COMPLETE, HORIZONTAL, "both"),
        default="both",
        help="which table to check (default: both)",
    )

    p = sub.add_parser("build-j", help="assemble the lifted candidate structure J")
    _add_common(p)
    _add_spec_args(p)

    p = sub.add_parser("verify", help="verify J^2 = eps*I for a lifted structure")
    _add_common(p)
    _add_spec_args(p)

    p = sub.add_parser("sweep", help="verdicts for all four (s,t) sign cells")
    _add_common(p)
    p.add_argument("--lift", choices=(COMPLETE, HORIZONTAL), default=COMPLETE)

    p = sub.add_parser("run", help="execute the definition file's own task list")
    _add_common(p)

    p = sub.add_parser(
        "demo", help="end-to-end pipeline on built-in canonical models"
    )
    _add_common(p, needs_file=False)
    return parser


def _add_spec_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--theorem",
        choices=tuple(THEOREM_SIGNS),
        default=None,
        help="catalogued instance to use (sets lift kind and signs)",
    )
    parser.add_argument("--lift", choices=(COMPLETE, HORIZONTAL), default=None)
    parser.add_argument("--s", type=_signs, default=None)
    parser.add_argument("--t", type=_signs, default=None)


def _spec_task(kind: str, args: argparse.Namespace) -> Task:
    if args.theorem is not None:
        return Task(kind, (args.theorem,))
    if args.lift is None or args.s is None or args.t is None:
        raise TaskError(f"{kind} needs --theorem or all of --lift --s --t")
    return Task(kind, (args.lift, str(args.s), str(args.t)))


def _demo_report(seed: int) -> Report:
    """The corollary pipeline: base axioms, lift tables, all four lifted
    structures, and the sign sweeps, on built-in canonical models."""
    report = Report(seed=seed)

    def run_on(defn: Definition, tasks: list[Task], mode: Optional[str] = None) -> None:
        sub = run_tasks(defn, tasks, seed=seed, mode_override=mode)
        report.sections.extend(sub.sections)

    riem = canonical_structure(1, 1, -1, "riemannian")
    conn = Connection.from_entries(
        riem.chart,
        {(2, 0, 0): riem.chart.coordinate("a1")},
    )
    defn = structure_to_definition(riem, conn=conn)
    report.sections.append(
        Section(
            task="demo",
            title="demo: canonical riemannian contact model (n=1, r=1, eps=-1)",
            passed=True,
            notes=[
                "pipeline: check -> lift -> theorem 4.1 -> theorem 4.3 -> sweep",
                "connection: Gamma[c1,a1,a1] = a1 (plus its symmetric pair)",
            ],
        )
    )
    run_on(
        defn,
        [
            Task("check"),
            Task("lift"),
            Task("theorem", ("4.1",)),
            Task("theorem", ("4.3",)),
            Task("sweep", (COMPLETE,)),
        ],
    )

    lor = canonical_structure(1, 1, -1, "lorentzian")
    defn = structure_to_definition(lor)
    report.sections.append(
        Section(
            task="demo",
            title="demo: canonical lorentzian contact model (n=1, r=1, eps=-1)",
            passed=True,
            notes=["pipeline: check -> lift -> theorem 4.2 -> theorem 4.4 -> sweep"],
        )
    )
    run_on(
        defn,
        [
            Task("check"),
            Task("lift"),
            Task("theorem", ("4.2",)),
            Task("theorem", ("4.4",)),
            Task("sweep", (COMPLETE,)),
        ],
    )

    para = canonical_structure(1, 1, 1, "riemannian")
    defn = structure_to_definition(para, mode=CONSISTENT)
    report.sections.append(
        Section(
            task="demo",
            title="demo: canonical paracontact model (n=1, r=1, eps=+1, consistent mode)",
            passed=True,
            notes=[
                "pipeline: check -> sweep; the sweep locates the paracomplex sign cells"
            ],
        )
    )
    run_on(defn, [Task("check"), Task("sweep", (COMPLETE,))])
    report.sections.append(
        Section(
            task="demo",
            title="demo: conclusion",
            passed=report.overall,
            notes=[
                "every lifted structure J verified J^2 = eps*I exactly: the tangent "
                "bundle of each base model carries an almost complex structure for "
                "eps = -1 and an almost paracomplex structure for eps = +1 (at the "
                "sign cells the sweep reports)"
            ],
        )
    )
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)

    try:
        if args.command == "demo":
            report = _demo_report(args.seed)
        else:
            text = Path(args.definition).read_text(encoding="utf-8")
            defn = parse_definition(text)
            if args.command == "check":
                tasks = [Task("check")]
            elif args.command == "lift":
                tasks = [Task("lift", () if args.kind == "both" else (args.kind,))]
            elif args.command == "build-j":
                tasks = [_spec_task("build-j", args)]
            elif args.command == "verify":
                tasks = [_spec_task("verify", args)]
            elif args.command == "sweep":
                tasks = [Task("sweep", (args.lift,))]
            elif args.command == "run":
                tasks = list(defn.tasks)
                if not tasks:
                    raise TaskError("definition file declares no tasks")
            else:  # pragma: no cover - argparse restricts choices
                raise TaskError(f"unknown command {args.command!r}")
            report = run_tasks(defn, tasks, seed=args.seed, mode_override=args.mode)
    except (DefinitionError, ParseError, TaskError, LiftError, StructureError) as exc:
        print(f"liftcheck: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"liftcheck: error: {exc}", file=sys.stderr)
        return 2

    if args.format == "machine":
        sys.stdout.write(report.render_machine())
    else:
        sys.stdout.write(report.render_human())
    return 0 if report.overall else 1


if __name__ == "__main__":
    raise SystemExit(main())
