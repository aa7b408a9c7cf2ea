"""Test suite expansion, sweep rows and report rendering."""
import io
import json
import sys
import tempfile
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pandas as pd
import pytest

from eldb_core.config import FamilyRange, SuiteSpec, load_suites
from eldb_core.corpus import resolve_graph
from eldb_core.exceptions import ConfigError
from eldb_core.sweep import (
    CSV_COLUMNS,
    expand_suite,
    render_csv,
    render_json,
    report_frame,
    run_sweep,
    write_report,
)
from harness import run_tests


def _suite(*blocks) -> dict:
    return {"adhoc": SuiteSpec(description="test suite", blocks=list(blocks))}


def test_named_suites_expand():
    suites = load_suites()
    assert {"paths", "cycles", "stars", "lex", "strong", "bounds", "chain", "all"} <= set(suites)
    assert len(expand_suite(suites["paths"])) == 20 * 3
    assert len(expand_suite(suites["cycles"])) == 18
    assert len(expand_suite(suites["stars"])) == 7 * 3
    total = sum(len(expand_suite(spec)) for name, spec in suites.items() if name != "all")
    assert len(expand_suite(suites["all"])) == total


def test_named_suite_factors_resolve():
    for block in load_suites()["all"].blocks:
        names = ([block.factor] if block.factor else []) + list(block.factors)
        for name in names:
            for part in name.split("|"):
                assert resolve_graph(part).vertex_count >= 2, (block.family, name)


def test_cycles_suite_agrees():
    report = run_sweep("cycles")
    assert len(report.rows) == 36
    assert report.all_agree
    assert not report.disagreements
    assert not report.exhausted_rows
    c7 = [r for r in report.rows if r.params == "n=7"]
    assert c7[0].quantity == "mcr" and c7[0].solver == 3


def test_named_paths_and_stars_suites_agree():
    paths = run_sweep("paths")
    assert len(paths.rows) == 60
    assert paths.all_agree and not paths.disagreements and not paths.exhausted_rows

    stars = run_sweep("stars")
    assert len(stars.rows) == 7 * 3 * 2
    assert stars.all_agree and not stars.disagreements and not stars.exhausted_rows


def test_named_lex_suite_has_only_expected_discrepancies():
    report = run_sweep("lex")
    assert report.all_agree
    assert report.unexpected_disagreements == []
    assert not report.exhausted_rows
    flagged = {(r.family, r.params) for r in report.disagreements}
    assert ("lex_cycle_table", "m=8,H=path:4") in flagged


def test_named_strong_suite_agrees():
    report = run_sweep("strong")
    assert len(report.rows) == 38
    assert report.all_agree and not report.disagreements and not report.exhausted_rows
    lower = [r for r in report.rows if r.family == "strong_lower"]
    assert len(lower) == 5
    assert lower[0].params == "G=C7,H=path:2"


def test_paths_block():
    report = run_sweep("adhoc", suites=_suite(FamilyRange(family="path", sizes=[2, 5, 9], ks=[1, 3])))
    assert len(report.rows) == 6
    assert report.all_agree
    assert [r.solver for r in report.rows] == [1, 1, 2, 2, 3, 3]


def test_lex_cycle_discrepancy_is_expected():
    block = FamilyRange(family="lex_cycle", sizes=[6, 8], factor="path:4")
    report = run_sweep("adhoc", suites=_suite(block))
    rows = {(r.family, r.params): r for r in report.rows}
    table_8 = rows[("lex_cycle_table", "m=8,H=path:4")]
    oracle_8 = rows[("lex_cycle_oracle", "m=8,H=path:4")]
    assert table_8.agree is False and table_8.expected_discrepancy
    assert table_8.note.startswith("expected discrepancy")
    assert oracle_8.agree is True and oracle_8.solver == 4
    assert rows[("lex_cycle_table", "m=6,H=path:4")].agree is True
    assert report.all_agree
    assert report.unexpected_disagreements == []


def test_lex_path_rows():
    block = FamilyRange(family="lex_path", sizes=[4, 6], factor="path:4")
    report = run_sweep("adhoc", suites=_suite(block))
    assert [r.quantity for r in report.rows] == ["mcr", "gamma_eb2", "mcr", "gamma_eb2"]
    assert report.all_agree


def test_bounds_rows_flag_known_failures():
    block = FamilyRange(family="bounds", factors=["P9", "C5", "C7", "petersen"])
    report = run_sweep("adhoc", suites=_suite(block))
    rows = {(r.params, r.quantity): r for r in report.rows}
    assert rows[("G=P9", "eb2_lower")].agree is False
    assert rows[("G=P9", "eb2_lower")].expected_discrepancy
    assert rows[("G=C5", "eb2_upper")].agree is False
    assert rows[("G=C5", "eb2_upper")].expected_discrepancy
    assert rows[("G=C7", "gamma_eb2")].agree is None
    assert rows[("G=petersen", "eb2_lower")].agree is True
    assert report.all_agree


def test_strong_and_lower_bound_rows():
    blocks = [
        FamilyRange(family="strong_cycle_path", sizes=[4, 7], factors=["path:2"]),
        FamilyRange(family="strong_rad1", sizes=[2], factors=["cycle:7"]),
        FamilyRange(family="strong_lower", factors=["C4|P3"]),
        FamilyRange(family="lex_lower", factor="path:3", factors=["C7"]),
        FamilyRange(family="lex_one_free", factor="path:3", factors=["P5"]),
    ]
    report = run_sweep("adhoc", suites=_suite(*blocks))
    assert report.all_agree
    assert all(r.agree for r in report.rows)
    assert [r.family for r in report.rows] == [
        "strong_cycle_path", "strong_cycle_path", "strong_rad1", "strong_rad1",
        "strong_lower", "lex_lower", "lex_one_free",
    ]


def test_chain_rows_are_informational():
    report = run_sweep("adhoc", suites=_suite(FamilyRange(family="chain", factors=["C7", "P6"])))
    c7, p6 = report.rows
    assert c7.solver == "k3=3" and c7.agree is None
    assert c7.note == "reported: constant"
    assert p6.solver.startswith("k1=2 ")
    assert not report.exhausted_rows
    assert report.all_agree


def test_exhausted_rows_are_reported():
    block = FamilyRange(family="cycle", sizes=[20])
    report = run_sweep("adhoc", node_limit=1, suites=_suite(block))
    assert len(report.exhausted_rows) == 2
    assert all(r.agree is None and r.solver is None for r in report.rows)
    assert report.all_agree


def test_workers_keep_case_order():
    block = FamilyRange(family="cycle", sizes=[3, 4, 5, 6, 7])
    serial = run_sweep("adhoc", workers=1, suites=_suite(block))
    parallel = run_sweep("adhoc", workers=2, suites=_suite(block))
    assert [r.to_dict() for r in serial.rows] == [r.to_dict() for r in parallel.rows]


def test_unknown_suite_and_family():
    with pytest.raises(ConfigError):
        run_sweep("nonexistent")
    with pytest.raises(ConfigError):
        expand_suite(SuiteSpec(blocks=[FamilyRange(family="hypercube")]))


def test_csv_and_json_rendering():
    block = FamilyRange(family="cycle", sizes=[7])
    report = run_sweep("adhoc", suites=_suite(block))

    text = render_csv(report)
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    assert frame["agree"].tolist() == ["true", "true"]
    assert frame["params"].tolist() == ["n=7", "n=7,k=3"]

    records = json.loads(render_json(report))
    assert records[0]["family"] == "cycle" and records[0]["agree"] is True
    assert list(report_frame(report).columns) == CSV_COLUMNS + ["expected_discrepancy", "exhausted"]

    with tempfile.TemporaryDirectory() as tmp:
        path = write_report(report, Path(tmp) / "out" / "cycles.csv", fmt="csv")
        assert path.read_text(encoding="utf-8") == text
        with pytest.raises(ConfigError):
            write_report(report, Path(tmp) / "cycles.xml", fmt="xml")


if __name__ == "__main__":
    sys.exit(run_tests("Sweep", globals()))
