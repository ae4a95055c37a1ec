"""Task orchestration: execute a definition's tasks and assemble the report."""

from __future__ import annotations

from typing import Optional, Sequence

from .definition import Definition, DefinitionError, Task, build_connection, build_structure
from .lifts import COMPLETE, HORIZONTAL, Connection, verify_lift_interactions
from .structures import (
    DEFAULT_SEED,
    PAPER_LITERAL,
    RContactStructure,
    R_CONTACT_FAMILY,
    CONSISTENT_FAMILY,
    check_axioms,
    check_metric,
    consistency_lint,
)
from .report import (
    Report,
    Section,
    section_from_check,
    section_from_j,
    section_from_sweep,
    section_from_verdict,
)
from .theorems import (
    LiftedStructureSpec,
    action_report,
    build_lifted_j,
    sign_sweep,
    theorem_spec,
    verify_theorem,
)

# result tags for the catalogued theorem instances
_VERDICT_TAGS = {"4.1": "2.8", "4.2": "2.15", "4.3": "2.22", "4.4": "2.22"}


class TaskError(ValueError):
    """A task cannot run against this definition (missing structure, metric, ...)."""


def _structure(defn: Definition) -> RContactStructure:
    try:
        return build_structure(defn)
    except DefinitionError as exc:
        raise TaskError(str(exc)) from exc


def _connection(defn: Definition, required: bool) -> Optional[Connection]:
    conn = build_connection(defn)
    if conn is None and required:
        conn = Connection.flat(defn.chart)
    return conn


def _spec_from_args(
    defn: Definition, structure: RContactStructure, args: tuple[str, ...]
) -> tuple[LiftedStructureSpec, str]:
    if args[0] in ("4.1", "4.2", "4.3", "4.4"):
        tag = args[0]
        conn = _connection(defn, required=tag in ("4.3", "4.4"))
        return theorem_spec(tag, structure, conn=conn, suffix=defn.fiber_suffix), tag
    kind = args[0]
    s, t = int(args[1]), int(args[2])
    conn = _connection(defn, required=kind == HORIZONTAL)
    if kind == COMPLETE:
        conn = None
    spec = LiftedStructureSpec(
        base=structure, lift_kind=kind, s=s, t=t, conn=conn, suffix=defn.fiber_suffix
    )
    return spec, f"{kind} (s={s:+d}, t={t:+d})"


def run_task(
    defn: Definition,
    task: Task,
    seed: int = DEFAULT_SEED,
    mode_override: Optional[str] = None,
) -> list[Section]:
    structure = _structure(defn)
    mode = mode_override or (defn.structure.mode if defn.structure else PAPER_LITERAL)

    if task.kind == "check":
        report = check_axioms(structure, mode=mode, seed=seed)
        family = R_CONTACT_FAMILY if mode == PAPER_LITERAL else CONSISTENT_FAMILY
        report.notes.extend(
            consistency_lint(family, structure.epsilon, structure.signature)
        )
        sections = [
            section_from_check(
                "check",
                f"check: axioms (mode={mode}, eps={structure.epsilon:+d}, "
                f"signature={structure.signature})",
                report,
            )
        ]
        if structure.metric is not None:
            sections.append(
                section_from_check(
                    "check",
                    "check: metric compatibility",
                    check_metric(structure, seed=seed),
                )
            )
        return sections

    if task.kind == "lift":
        which = task.args[0] if task.args else "both"
        conn = None
        if which in ("horizontal", "both"):
            conn = _connection(defn, required=True)
        report = verify_lift_interactions(
            structure, conn=conn, suffix=defn.fiber_suffix, seed=seed
        )
        return [
            section_from_check(
                "lift", f"lift: interaction identities ({which})", report
            )
        ]

    if task.kind == "build-j":
        spec, label = _spec_from_args(defn, structure, task.args)
        j = build_lifted_j(spec)
        return [section_from_j("build-j", f"build-j: {label}", j)]

    if task.kind == "verify":
        spec, label = _spec_from_args(defn, structure, task.args)
        verdict = verify_theorem(spec, seed=seed)
        tag = _VERDICT_TAGS.get(task.args[0], "J^2")
        return [section_from_verdict("verify", f"verify: {label}", verdict, tag=tag)]

    if task.kind == "theorem":
        tag = task.args[0]
        conn = _connection(defn, required=tag in ("4.3", "4.4"))
        spec = theorem_spec(tag, structure, conn=conn, suffix=defn.fiber_suffix)
        verdict = verify_theorem(spec, seed=seed)
        sections = [
            section_from_verdict(
                "theorem",
                f"theorem {tag}: J^2 = eps*I",
                verdict,
                tag=_VERDICT_TAGS[tag],
            )
        ]
        actions = action_report(spec, seed=seed)
        sections.append(
            section_from_check(
                "theorem", f"theorem {tag}: action formulas", actions
            )
        )
        return sections

    if task.kind == "actions":
        tag = task.args[0]
        conn = _connection(defn, required=tag in ("4.3", "4.4"))
        spec = theorem_spec(tag, structure, conn=conn, suffix=defn.fiber_suffix)
        return [
            section_from_check(
                "actions",
                f"actions {tag}: derived displays",
                action_report(spec, seed=seed),
            )
        ]

    if task.kind == "sweep":
        kind = task.args[0]
        conn = _connection(defn, required=kind == HORIZONTAL)
        sweep = sign_sweep(
            structure, kind, conn=conn, suffix=defn.fiber_suffix, seed=seed
        )
        return [
            section_from_sweep("sweep", f"sweep: {kind} lift sign ledger", sweep)
        ]

    raise TaskError(f"unknown task kind {task.kind!r}")


def run_tasks(
    defn: Definition,
    tasks: Sequence[Task],
    seed: int = DEFAULT_SEED,
    mode_override: Optional[str] = None,
) -> Report:
    report = Report(seed=seed)
    for task in tasks:
        report.sections.extend(run_task(defn, task, seed=seed, mode_override=mode_override))
    return report
