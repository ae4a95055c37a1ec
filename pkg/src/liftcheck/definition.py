"""Reader and writer for the line-oriented `.def` structure definition format.

A definition file declares one chart, an optional connection, one structure
and a task list::

    # canonical contact model
    chart M a1 b1 c1
    fiber_suffix _dot          # optional, default _dot

    connection symmetric       # optional block, sparse entries, 1-based indices
      Gamma[3,1,1] = a1
    end

    structure
      epsilon -1
      signature riemannian
      mode paper-literal       # optional: paper-literal | consistent
      n 1
      r 1
      F[1,2] = -1              # F^row_col, sparse, defaults 0
      F[2,1] = 1
      xi[1,3] = 1              # xi[alpha, component]
      eta[1,3] = 1
      metric[1,1] = 1          # optional; metric present iff any entry given
      metric[2,2] = 1
      metric[3,3] = 1
    end

    task check
    task lift complete
    task theorem 4.1
    task build-j complete 1 -1
    task verify complete 1 -1
    task sweep complete

All polynomial right-hand sides are infix expressions over the declared
coordinates.  ``emit_definition(parse_definition(text))`` reparses to an
equal Definition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .algebra import Poly
from .expr import ParseError, parse_poly
from .lifts import COMPLETE, DEFAULT_FIBER_SUFFIX, HORIZONTAL, Connection
from .structures import (
    AXIOM_MODES,
    PAPER_LITERAL,
    RContactStructure,
    SIGNATURES,
    StructureError,
)
from .tensor import Chart, TensorField
from .theorems import THEOREM_SIGNS


class DefinitionError(ValueError):
    """Parse or validation failure with a 1-based line (and column) location."""

    def __init__(self, message: str, line: int, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self) -> str:
        where = f"line {self.line}"
        if self.column is not None:
            where += f", column {self.column}"
        return f"{self.args[0]} ({where})"


@dataclass(frozen=True)
class Task:
    kind: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return " ".join(("task", self.kind) + self.args)


@dataclass
class StructureBlock:
    epsilon: int
    signature: str
    mode: str
    n: int
    r: int
    f_entries: dict[tuple[int, int], Poly]
    xi_entries: dict[tuple[int, int], Poly]
    eta_entries: dict[tuple[int, int], Poly]
    metric_entries: Optional[dict[tuple[int, int], Poly]]

    def __eq__(self, other):
        if not isinstance(other, StructureBlock):
            return NotImplemented
        return (
            self.epsilon == other.epsilon
            and self.signature == other.signature
            and self.mode == other.mode
            and self.n == other.n
            and self.r == other.r
            and self.f_entries == other.f_entries
            and self.xi_entries == other.xi_entries
            and self.eta_entries == other.eta_entries
            and self.metric_entries == other.metric_entries
        )


@dataclass
class Definition:
    chart: Chart
    fiber_suffix: str = DEFAULT_FIBER_SUFFIX
    connection_entries: Optional[dict[tuple[int, int, int], Poly]] = None
    connection_symmetric: bool = True
    structure: Optional[StructureBlock] = None
    tasks: list[Task] = field(default_factory=list)

    def __eq__(self, other):
        if not isinstance(other, Definition):
            return NotImplemented
        return (
            self.chart == other.chart
            and self.fiber_suffix == other.fiber_suffix
            and self.connection_entries == other.connection_entries
            and self.connection_symmetric == other.connection_symmetric
            and self.structure == other.structure
            and self.tasks == other.tasks
        )


_ENTRY_RE = re.compile(r"^(\w+)\[([0-9,\s]+)\]\s*=\s*(.+)$")

_TASK_ARITY = {
    "check": (0, 0),
    "lift": (0, 1),
    "build-j": (1, 3),
    "verify": (1, 3),
    "theorem": (1, 1),
    "sweep": (1, 1),
    "actions": (1, 1),
}


def _strip_comment(raw: str) -> str:
    cut = raw.find("#")
    return raw if cut < 0 else raw[:cut]


def _rhs_offset(raw_line: str) -> int:
    """0-based column where the right-hand side after '=' starts."""
    body = _strip_comment(raw_line)
    eq = body.find("=")
    if eq < 0:
        return 0
    tail = body[eq + 1 :]
    return eq + 1 + (len(tail) - len(tail.lstrip()))


def _parse_indices(text: str, count: int, lineno: int) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != count or not all(p.isdigit() for p in parts):
        raise DefinitionError(f"expected {count} comma-separated indices", lineno)
    return tuple(int(p) for p in parts)


def _parse_rhs(rhs: str, coords, lineno: int, offset: int) -> Poly:
    try:
        return parse_poly(rhs, coords)
    except ParseError as exc:
        raise DefinitionError(exc.args[0], lineno, offset + exc.column + 1) from exc


def _validate_task(kind: str, args: tuple[str, ...], lineno: int) -> Task:
    if kind not in _TASK_ARITY:
        raise DefinitionError(f"unknown task {kind!r}", lineno)
    lo, hi = _TASK_ARITY[kind]
    if not (lo <= len(args) <= hi):
        raise DefinitionError(f"task {kind!r} takes {lo}..{hi} arguments", lineno)
    if kind in ("theorem", "actions"):
        if args[0] not in THEOREM_SIGNS:
            raise DefinitionError(
                f"unknown theorem tag {args[0]!r} (expected one of {', '.join(THEOREM_SIGNS)})",
                lineno,
            )
    if kind in ("build-j", "verify"):
        if args[0] in THEOREM_SIGNS:
            if len(args) != 1:
                raise DefinitionError(
                    f"task {kind!r} with a theorem tag takes no signs", lineno
                )
        elif args[0] in (COMPLETE, HORIZONTAL):
            if len(args) != 3 or any(a not in ("1", "-1", "+1") for a in args[1:]):
                raise DefinitionError(
                    f"task {kind!r} needs a lift kind plus signs s t in -1/+1", lineno
                )
        else:
            raise DefinitionError(
                f"task {kind!r} needs a theorem tag or a lift kind", lineno
            )
    if kind == "sweep" and args[0] not in (COMPLETE, HORIZONTAL):
        raise DefinitionError("task 'sweep' needs complete or horizontal", lineno)
    if kind == "lift" and args and args[0] not in (COMPLETE, HORIZONTAL):
        raise DefinitionError(
            "task 'lift' takes no argument, or complete, or horizontal", lineno
        )
    return Task(kind, args)


def parse_definition(text: str) -> Definition:
    chart: Optional[Chart] = None
    fiber_suffix = DEFAULT_FIBER_SUFFIX
    connection_entries: Optional[dict[tuple[int, int, int], Poly]] = None
    connection_symmetric = True
    structure: Optional[StructureBlock] = None
    tasks: list[Task] = []

    lines = text.splitlines()
    i = 0
    while i < len(lines):
        lineno = i + 1
        line = _strip_comment(lines[i]).strip()
        i += 1
        if not line:
            continue
        words = line.split()
        head = words[0]

        if head == "chart":
            if chart is not None:
                raise DefinitionError("duplicate chart declaration", lineno)
            if len(words) < 3:
                raise DefinitionError("chart needs a name and coordinates", lineno)
            try:
                chart = Chart(words[1], tuple(words[2:]))
            except ValueError as exc:
                raise DefinitionError(str(exc), lineno) from exc
            continue

        if head == "fiber_suffix":
            if len(words) != 2:
                raise DefinitionError("fiber_suffix needs one value", lineno)
            fiber_suffix = words[1]
            continue

        if chart is None:
            raise DefinitionError("chart declaration must come first", lineno)

        if head == "connection":
            if connection_entries is not None:
                raise DefinitionError("duplicate connection block", lineno)
            if len(words) > 2 or (len(words) == 2 and words[1] not in ("symmetric", "general")):
                raise DefinitionError("connection takes optional 'symmetric' or 'general'", lineno)
            connection_symmetric = len(words) < 2 or words[1] == "symmetric"
            connection_entries = {}
            while True:
                if i >= len(lines):
                    raise DefinitionError("connection block not closed with 'end'", lineno)
                inner_no = i + 1
                inner = _strip_comment(lines[i]).strip()
                i += 1
                if not inner:
                    continue
                if inner == "end":
                    break
                match = _ENTRY_RE.match(inner)
                if not match or match.group(1) != "Gamma":
                    raise DefinitionError(
                        "expected 'Gamma[i,j,k] = expr' or 'end'", inner_no
                    )
                idx = _parse_indices(match.group(2), 3, inner_no)
                if any(v < 1 or v > chart.dim for v in idx):
                    raise DefinitionError(
                        f"Gamma index out of range 1..{chart.dim}", inner_no
                    )
                key = (idx[0] - 1, idx[1] - 1, idx[2] - 1)
                connection_entries[key] = _parse_rhs(
                    match.group(3), chart.coords, inner_no, _rhs_offset(lines[i - 1])
                )
            continue

        if head == "structure":
            if structure is not None:
                raise DefinitionError("duplicate structure block", lineno)
            structure = _parse_structure_block(lines, i, chart)
            i = structure[1]
            structure = structure[0]
            continue

        if head == "task":
            if len(words) < 2:
                raise DefinitionError("task needs a kind", lineno)
            tasks.append(_validate_task(words[1], tuple(words[2:]), lineno))
            continue

        raise DefinitionError(f"unknown directive {head!r}", lineno)

    if chart is None:
        raise DefinitionError("missing chart declaration", len(lines) or 1)
    return Definition(
        chart=chart,
        fiber_suffix=fiber_suffix,
        connection_entries=connection_entries,
        connection_symmetric=connection_symmetric,
        structure=structure,
        tasks=tasks,
    )


def _parse_structure_block(lines, i, chart) -> tuple[StructureBlock, int]:
    epsilon: Optional[int] = None
    signature: Optional[str] = None
    mode = PAPER_LITERAL
    n: Optional[int] = None
    r: Optional[int] = None
    f_entries: dict[tuple[int, int], Poly] = {}
    xi_entries: dict[tuple[int, int], Poly] = {}
    eta_entries: dict[tuple[int, int], Poly] = {}
    metric_entries: Optional[dict[tuple[int, int], Poly]] = None
    start = i

    while True:
        if i >= len(lines):
            raise DefinitionError("structure block not closed with 'end'", start)
        lineno = i + 1
        line = _strip_comment(lines[i]).strip()
        i += 1
        if not line:
            continue
        if line == "end":
            break
        words = line.split()
        head = words[0]
        if head == "epsilon":
            if len(words) != 2 or words[1] not in ("-1", "1", "+1"):
                raise DefinitionError("epsilon must be -1 or +1", lineno)
            epsilon = int(words[1])
            continue
        if head == "signature":
            if len(words) != 2 or words[1] not in SIGNATURES:
                raise DefinitionError(
                    f"signature must be one of {', '.join(SIGNATURES)}", lineno
                )
            signature = words[1]
            continue
        if head == "mode":
            if len(words) != 2 or words[1] not in AXIOM_MODES:
                raise DefinitionError(
                    f"mode must be one of {', '.join(AXIOM_MODES)}", lineno
                )
            mode = words[1]
            continue
        if head in ("n", "r"):
            if len(words) != 2 or not words[1].isdigit():
                raise DefinitionError(f"{head} must be a nonnegative integer", lineno)
            if head == "n":
                n = int(words[1])
            else:
                r = int(words[1])
            continue
        match = _ENTRY_RE.match(line)
        if not match:
            raise DefinitionError(f"unknown structure field {head!r}", lineno)
        name = match.group(1)
        value = _parse_rhs(match.group(3), chart.coords, lineno, _rhs_offset(lines[i - 1]))
        if name == "F":
            idx = _parse_indices(match.group(2), 2, lineno)
            if any(v < 1 or v > chart.dim for v in idx):
                raise DefinitionError(f"F index out of range 1..{chart.dim}", lineno)
            f_entries[(idx[0] - 1, idx[1] - 1)] = value
        elif name in ("xi", "eta"):
            idx = _parse_indices(match.group(2), 2, lineno)
            if idx[1] < 1 or idx[1] > chart.dim:
                raise DefinitionError(
                    f"{name} component index out of range 1..{chart.dim}", lineno
                )
            target = xi_entries if name == "xi" else eta_entries
            target[(idx[0] - 1, idx[1] - 1)] = value
        elif name == "metric":
            idx = _parse_indices(match.group(2), 2, lineno)
            if any(v < 1 or v > chart.dim for v in idx):
                raise DefinitionError(f"metric index out of range 1..{chart.dim}", lineno)
            if metric_entries is None:
                metric_entries = {}
            metric_entries[(idx[0] - 1, idx[1] - 1)] = value
        else:
            raise DefinitionError(f"unknown structure field {name!r}", lineno)

    if epsilon is None or signature is None or n is None or r is None:
        raise DefinitionError(
            "structure block needs epsilon, signature, n and r", start
        )
    for (alpha, _), _v in list(xi_entries.items()) + list(eta_entries.items()):
        if alpha < 0 or alpha >= r:
            raise DefinitionError(f"xi/eta family index out of range 1..{r}", start)
    return (
        StructureBlock(
            epsilon=epsilon,
            signature=signature,
            mode=mode,
            n=n,
            r=r,
            f_entries=f_entries,
            xi_entries=xi_entries,
            eta_entries=eta_entries,
            metric_entries=metric_entries,
        ),
        i,
    )


# -- assembly into engine objects ---------------------------------------------------


def build_structure(defn: Definition) -> RContactStructure:
    if defn.structure is None:
        raise DefinitionError("definition has no structure block", 1)
    block = defn.structure
    chart = defn.chart
    m = chart.dim
    if 2 * block.n + block.r != m:
        raise DefinitionError(
            f"chart dim {m} != 2n + r = {2 * block.n + block.r}", 1
        )
    z = chart.zero_poly()

    def dense(entries: dict[tuple[int, int], Poly]) -> list[list[Poly]]:
        out = [[z for _ in range(m)] for _ in range(m)]
        for (a, b), val in entries.items():
            out[a][b] = val
        return out

    f = TensorField.endo(chart, dense(block.f_entries))
    xi = []
    eta = []
    for alpha in range(block.r):
        xi.append(
            TensorField.vector(
                chart,
                [block.xi_entries.get((alpha, j), z) for j in range(m)],
            )
        )
        eta.append(
            TensorField.oneform(
                chart,
                [block.eta_entries.get((alpha, j), z) for j in range(m)],
            )
        )
    metric = None
    if block.metric_entries is not None:
        metric = TensorField.bilinear(chart, dense(block.metric_entries))
    try:
        return RContactStructure(
            chart=chart,
            f=f,
            xi=tuple(xi),
            eta=tuple(eta),
            epsilon=block.epsilon,
            signature=block.signature,
            n=block.n,
            r=block.r,
            metric=metric,
        )
    except StructureError as exc:
        raise DefinitionError(str(exc), 1) from exc


def build_connection(defn: Definition) -> Optional[Connection]:
    if defn.connection_entries is None:
        return None
    return Connection.from_entries(
        defn.chart, defn.connection_entries, defn.connection_symmetric
    )


# -- canonical emission ---------------------------------------------------------------


def emit_definition(defn: Definition) -> str:
    out: list[str] = []
    out.append("chart " + defn.chart.name + " " + " ".join(defn.chart.coords))
    if defn.fiber_suffix != DEFAULT_FIBER_SUFFIX:
        out.append(f"fiber_suffix {defn.fiber_suffix}")
    if defn.connection_entries is not None:
        out.append("")
        out.append(
            "connection " + ("symmetric" if defn.connection_symmetric else "general")
        )
        for (a, b, c) in sorted(defn.connection_entries):
            val = defn.connection_entries[(a, b, c)]
            out.append(f"  Gamma[{a + 1},{b + 1},{c + 1}] = {val}")
        out.append("end")
    if defn.structure is not None:
        block = defn.structure
        out.append("")
        out.append("structure")
        out.append(f"  epsilon {block.epsilon}")
        out.append(f"  signature {block.signature}")
        if block.mode != PAPER_LITERAL:
            out.append(f"  mode {block.mode}")
        out.append(f"  n {block.n}")
        out.append(f"  r {block.r}")
        for (a, b) in sorted(block.f_entries):
            if not block.f_entries[(a, b)].is_zero():
                out.append(f"  F[{a + 1},{b + 1}] = {block.f_entries[(a, b)]}")
        for (a, b) in sorted(block.xi_entries):
            if not block.xi_entries[(a, b)].is_zero():
                out.append(f"  xi[{a + 1},{b + 1}] = {block.xi_entries[(a, b)]}")
        for (a, b) in sorted(block.eta_entries):
            if not block.eta_entries[(a, b)].is_zero():
                out.append(f"  eta[{a + 1},{b + 1}] = {block.eta_entries[(a, b)]}")
        if block.metric_entries is not None:
            for (a, b) in sorted(block.metric_entries):
                if not block.metric_entries[(a, b)].is_zero():
                    out.append(
                        f"  metric[{a + 1},{b + 1}] = {block.metric_entries[(a, b)]}"
                    )
        out.append("end")
    if defn.tasks:
        out.append("")
        for task in defn.tasks:
            out.append(str(task))
    return "\n".join(out) + "\n"


def structure_to_definition(
    structure: RContactStructure,
    mode: str = PAPER_LITERAL,
    conn: Optional[Connection] = None,
    tasks: Optional[list[Task]] = None,
    fiber_suffix: str = DEFAULT_FIBER_SUFFIX,
) -> Definition:
    """Definition equivalent of an in-memory structure (used by the demo and tests)."""
    chart = structure.chart
    f_entries = {
        (i, j): structure.f.comps[i][j]
        for i in range(chart.dim)
        for j in range(chart.dim)
        if not structure.f.comps[i][j].is_zero()
    }
    xi_entries = {
        (a, j): x.comps[j]
        for a, x in enumerate(structure.xi)
        for j in range(chart.dim)
        if not x.comps[j].is_zero()
    }
    eta_entries = {
        (a, j): w.comps[j]
        for a, w in enumerate(structure.eta)
        for j in range(chart.dim)
        if not w.comps[j].is_zero()
    }
    metric_entries = None
    if structure.metric is not None:
        metric_entries = {
            (i, j): structure.metric.comps[i][j]
            for i in range(chart.dim)
            for j in range(chart.dim)
            if not structure.metric.comps[i][j].is_zero()
        }
    connection_entries = None
    if conn is not None:
        connection_entries = {}
        for i in range(chart.dim):
            for j in range(chart.dim):
                for k in range(chart.dim):
                    entry = conn.gamma[i][j][k]
                    if entry.is_zero():
                        continue
                    if conn.symmetric and j > k:
                        continue
                    connection_entries[(i, j, k)] = entry
    block = StructureBlock(
        epsilon=structure.epsilon,
        signature=structure.signature,
        mode=mode,
        n=structure.n,
        r=structure.r,
        f_entries=f_entries,
        xi_entries=xi_entries,
        eta_entries=eta_entries,
        metric_entries=metric_entries,
    )
    return Definition(
        chart=chart,
        fiber_suffix=fiber_suffix,
        connection_entries=connection_entries,
        connection_symmetric=conn.symmetric if conn else True,
        structure=block,
        tasks=list(tasks or []),
    )
