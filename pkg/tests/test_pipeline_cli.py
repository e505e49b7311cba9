import csv
import io
import json

import pytest

from nilflex.catalog import SIX_DIM, by_structure
from nilflex.cli import main
from nilflex.pipeline import CSV_COLUMNS, SCHEMA_VERSION, emit, run_entry


def test_catalog_has_34_rows_and_five_marked_flexible():
    assert len(SIX_DIM) == 34
    assert sum(e.flexible for e in SIX_DIM) == 5
    assert sum(e.symplectic for e in SIX_DIM) == 26


def test_run_entry_filiform_case():
    r = run_entry(by_structure("(0,0,12,13,23,14-25)"))
    assert r.h4 == [2, 3, 4] and r.h5 == [0] and r.flexible and r.ok
    assert r.certificate["segment_check"] is True


def test_run_entry_dash_row():
    r = run_entry(by_structure("(0,0,12,13,14+23,34+52)"))
    assert not r.admissible and r.h4 == [] and r.moduli is None and r.ok


def test_run_entry_reducible_flexible_row():
    r = run_entry(by_structure("(0,0,0,0,12,13)"))
    assert r.h4 == [7, 8] and r.h5 == [2] and r.flexible and r.reducible == "1+5"


def test_emit_formats(verify_report):
    md = emit(verify_report, "markdown")
    assert md.count("\n") == 34 + 2
    text = emit(verify_report.rows, "csv")
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[0][:7] == ["b1", "b2", "s", "h4", "h5", "moduli", "flexible"]
    assert len(rows) == 35
    obj = json.loads(emit(verify_report, "json"))
    assert obj["schema_version"] == SCHEMA_VERSION
    assert [r["index"] for r in obj["rows"]] == list(range(1, 35))
    with pytest.raises(ValueError):
        emit(verify_report, "xml")


def test_emit_is_deterministic():
    e = by_structure("(0,0,0,12,14,15+23+24)")
    assert emit(run_entry(e), "json") == emit(run_entry(e), "json")


def test_parallel_run_matches_serial():
    from nilflex.pipeline import run_catalog

    entries = SIX_DIM[:5]
    serial = emit(run_catalog(entries, jobs=1), "json")
    assert emit(run_catalog(entries, jobs=4), "json") == serial


def test_cli_analyze(capsys):
    assert main(["analyze", "(0,0,12,13,23,14-25)"]) == 0
    out = capsys.readouterr().out
    assert "h4" in out and "flexible" in out


def test_cli_harmonic_json(capsys):
    assert main(["harmonic", "(0,0,12,0)", "--omega", "A=0,B=1,C=1,D=0", "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["h"] == [1, 3, 4, 2, 1] and all(obj["identities"].values())


def test_cli_product(capsys):
    assert main(["product", "(0,0,12,0)", "(0,0)", "--omega1", "A=0,B=1,C=1,D=0", "--omega2", "A=1"]) == 0
    assert "h5: direct 4, formula 4" in capsys.readouterr().out


def test_cli_errors(capsys):
    assert main(["harmonic", "(0,0,12,0)", "--omega", "A=1,B=0,C=0,D=0"]) == 2
    assert "degenerate" in capsys.readouterr().err
    assert main(["analyze", "(0,0,1)"]) == 2


def test_cli_table_csv(tmp_path, monkeypatch):
    import nilflex.cli

    monkeypatch.setattr(nilflex.cli, "SIX_DIM", SIX_DIM[:3])
    out = tmp_path / "t.csv"
    assert main(["table", "--format", "csv", "--out", str(out), "--jobs", "2"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS) and len(lines) == 4
