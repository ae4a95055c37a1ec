"""Definition format: parsing, diagnostics, emission round trip, assembly."""

from pathlib import Path

import pytest

from liftcheck.definition import (
    Definition,
    DefinitionError,
    Task,
    build_connection,
    build_structure,
    emit_definition,
    parse_definition,
    structure_to_definition,
)
from liftcheck.structures import canonical_structure, check_axioms

DEFS_DIR = Path(__file__).resolve().parent.parent / "defs"

MINIMAL = "chart M x y\n"

CANONICAL = """\
# canonical contact model
chart M a1 b1 c1

structure
  epsilon -1
  signature riemannian
  n 1
  r 1
  F[1,2] = -1
  F[2,1] = 1
  xi[1,3] = 1
  eta[1,3] = 1
end

task check
"""


def test_minimal_chart_only():
    defn = parse_definition(MINIMAL)
    assert defn.chart.name == "M"
    assert defn.chart.coords == ("x", "y")
    assert defn.tasks == []
    assert defn.structure is None


def test_canonical_definition_checks_out():
    defn = parse_definition(CANONICAL)
    structure = build_structure(defn)
    canon = canonical_structure(1, 1, -1, "riemannian")
    assert structure.f == canon.f
    assert structure.xi == canon.xi
    assert structure.eta == canon.eta
    assert structure.metric is None
    assert check_axioms(structure).overall
    assert defn.tasks == [Task("check")]


def test_undeclared_coordinate_is_located():
    bad = CANONICAL.replace("F[1,2] = -1", "F[1,2] = q")
    with pytest.raises(DefinitionError) as err:
        parse_definition(bad)
    assert "q" in str(err.value)
    assert err.value.line == 9
    assert err.value.column is not None


def test_bad_indices_and_tasks():
    with pytest.raises(DefinitionError, match="out of range"):
        parse_definition(CANONICAL.replace("F[1,2]", "F[1,9]"))
    with pytest.raises(DefinitionError, match="unknown task"):
        parse_definition(MINIMAL + "task dance\n")
    with pytest.raises(DefinitionError, match="theorem tag"):
        parse_definition(MINIMAL + "task theorem 9.9\n")
    with pytest.raises(DefinitionError, match="not closed"):
        parse_definition("chart M x y\nstructure\n  epsilon -1\n")
    with pytest.raises(DefinitionError, match="chart declaration must come first"):
        parse_definition("task check\n")


def test_dimension_mismatch_reported():
    bad = CANONICAL.replace("n 1", "n 2")
    with pytest.raises(DefinitionError, match="2n \\+ r"):
        build_structure(parse_definition(bad))


def test_connection_block():
    text = (
        "chart M a1 b1 c1\n"
        "connection symmetric\n"
        "  Gamma[3,1,1] = a1\n"
        "  Gamma[1,1,2] = c1^2\n"
        "end\n"
    )
    defn = parse_definition(text)
    conn = build_connection(defn)
    assert conn is not None and conn.symmetric
    idx = {name: i for i, name in enumerate(defn.chart.coords)}
    assert conn.gamma[idx["c1"]][idx["a1"]][idx["a1"]] == defn.chart.coordinate("a1")
    # symmetric completion fills the mirrored slot
    assert conn.gamma[0][0][1] == conn.gamma[0][1][0]


def test_emit_parse_round_trip_inline():
    defn = parse_definition(CANONICAL)
    again = parse_definition(emit_definition(defn))
    assert again == defn


@pytest.mark.parametrize("path", sorted(DEFS_DIR.glob("*.def")), ids=lambda p: p.name)
def test_shipped_defs_round_trip(path):
    text = path.read_text(encoding="utf-8")
    defn = parse_definition(text)
    again = parse_definition(emit_definition(defn))
    assert again == defn


def test_structure_to_definition_round_trip():
    s = canonical_structure(2, 1, -1, "lorentzian")
    defn = structure_to_definition(s, tasks=[Task("check"), Task("sweep", ("complete",))])
    rebuilt = build_structure(parse_definition(emit_definition(defn)))
    assert rebuilt == s
