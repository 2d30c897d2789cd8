import csv
import io
import json
import subprocess
import sys

import pytest

from cascade_sac.cli import run

from conftest import FIXTURES, fixture_text, mutate

F = str(FIXTURES)


def sac(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok(capsys):
    code, out, err = sac(capsys, "validate", f"{F}/headlamp.sac")
    assert code == 0 and "ok (23 nodes, 22 edges)" in out and err == ""


def test_validate_cycle(capsys):
    code, _, err = sac(capsys, "validate", f"{F}/cycle.sac")
    assert code == 1 and "CYCLE" in err


def test_parse_error_exit_1(capsys, tmp_path):
    p = tmp_path / "bad.sac"
    p.write_text('case "t"\nnode G1 widget "x"\n')
    code, _, err = sac(capsys, "validate", p)
    assert code == 1 and "2:9: Syntax error" in err and "widget" in err


def test_usage_errors(capsys, tmp_path):
    assert sac(capsys, "validate", tmp_path / "missing.sac")[0] == 2
    assert sac(capsys, "frobnicate")[0] == 2
    assert sac(capsys, "validate", f"{F}/headlamp.sac", "--bogus")[0] == 2
    assert sac(capsys, "render", f"{F}/headlamp.sac", "-o", tmp_path / "x.dot", "--rankdir", "BT")[0] == 2
    assert sac(capsys, "evidence", "report", "--registry", f"{F}/headlamp_registry.csv", "--case",
               f"{F}/headlamp.sac", "--as-of", "yesterday")[0] == 2
    assert sac(capsys, "--help")[0] == 0


def test_quality(capsys, tmp_path):
    code, out, _ = sac(capsys, "quality", f"{F}/headlamp.sac", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["findings"] == [] and doc["metrics"]["solutions_total"] == 4
    assert out == json.dumps(doc, sort_keys=True, indent=2) + "\n"
    bad = tmp_path / "bad.sac"
    bad.write_text(mutate(fixture_text("headlamp.sac"), drop=["QF1", "E4"]))
    code, out, _ = sac(capsys, "quality", bad)
    assert code == 1 and "MISSING_CONFIDENCE [G10]" in out


def test_render_golden(capsys, tmp_path):
    out = tmp_path / "h.dot"
    assert sac(capsys, "render", f"{F}/headlamp.sac", "--blocks", "--rankdir", "LR", "-o", out)[0] == 0
    assert out.read_bytes() == (FIXTURES / "golden" / "headlamp_blocks_lr.dot").read_bytes()


def test_render_draft_reports_but_renders(capsys, tmp_path):
    out = tmp_path / "m.dot"
    code, _, err = sac(capsys, "render", f"{F}/minimal.sac", "-o", out)
    assert code == 0 and "DEAD_END" in err
    assert out.read_bytes() == (FIXTURES / "golden" / "minimal.dot").read_bytes()


def test_coverage(capsys, tmp_path):
    fig, table = tmp_path / "cov.png", tmp_path / "cov.csv"
    code, out, _ = sac(capsys, "coverage", f"{F}/headlamp.sac", "--map", f"{F}/headlamp_map.csv",
                       "--csv", table, "--figure", fig)
    assert code == 1
    assert "covered 10/12 (83.3%), mismatched 1, uncovered 1" in out
    rows = list(csv.reader(table.open()))
    assert rows[0] == ["clause_id", "expected", "status", "nodes"] and len(rows) == 13
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    code, out, _ = sac(capsys, "coverage", f"{F}/headlamp.sac", "--map", f"{F}/headlamp_map.csv", "--json")
    assert json.loads(out)["summary"]["percent"] == "83.3"


def test_coverage_bad_map(capsys, tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("clause,title\n")
    assert sac(capsys, "coverage", f"{F}/headlamp.sac", "--map", p)[0] == 2


def test_evidence_report(capsys):
    args = ["evidence", "report", "--registry", f"{F}/headlamp_registry.csv", "--case", f"{F}/headlamp.sac"]
    code, out, _ = sac(capsys, *args, "--as-of", "2025-01-01")
    assert code == 0 and "4 evidence item(s), 0 finding(s) as of 2025-01-01" in out
    code, out, _ = sac(capsys, *args, "--as-of", "2025-06-01", "--json")
    doc = json.loads(out)
    assert code == 1
    assert [(f["code"], f["subject"]) for f in doc["findings"]] == [("STALE_EVIDENCE", "ev-test")]


def test_classify_train_predict(capsys, tmp_path):
    model = tmp_path / "model.json"
    code, _, err = sac(capsys, "classify", "train", "--data", f"{F}/synth.csv", "--out", model, "--trees", "15")
    assert code == 0 and "trained 15 trees" in err
    first = model.read_bytes()
    sac(capsys, "classify", "train", "--data", f"{F}/synth.csv", "--out", model, "--trees", "15", "--jobs", "3")
    assert model.read_bytes() == first
    reqs = tmp_path / "reqs.csv"
    reqs.write_text(
        "project,section,req_id,text,label\n"
        "new,S1,N1,The diagnostic gateway shall encrypt all diagnostic sessions using authenticated encryption before transmission.,\n"
        "new,S1,N2,The gateway shall display lamp status within 2 seconds.,\n"
    )
    code, out, _ = sac(capsys, "classify", "predict", "--model", model, "--data", reqs)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["project", "section", "req_id", "label", "score"]
    assert [r[3] for r in rows[1:]] == ["sec", "nonsec"]
    code, out, _ = sac(capsys, "classify", "predict", "--model", model, "--data", reqs, "--threshold", "0.0")
    assert all(r[3] == "sec" for r in list(csv.reader(io.StringIO(out)))[1:])


def test_classify_bad_model(capsys, tmp_path):
    model = tmp_path / "model.json"
    model.write_text('{"version": 2}')
    assert sac(capsys, "classify", "predict", "--model", model, "--data", f"{F}/synth.csv")[0] == 2


def test_classify_eval_outputs(capsys, tmp_path):
    args = ["classify", "eval", "--data", f"{F}/synth.csv", "--lopo", "--sections", "--trees", "10", "--seed", "7"]
    code, first, _ = sac(capsys, *args)
    assert code == 0 and "[requirements]" in first and "[sections]" in first
    assert sac(capsys, *args)[1] == first
    fig, table = tmp_path / "lopo.svg", tmp_path / "lopo.csv"
    code, out, _ = sac(capsys, *args, "--json", "--csv", table, "--figure", fig)
    doc = json.loads(out)
    assert len(doc["projects"]) == 6 and set(doc["macro"]) >= {"precision", "recall"}
    rows = list(csv.reader(table.open()))
    assert rows[0][0] == "level" and {r[0] for r in rows[1:]} == {"requirements", "sections"}
    assert fig.read_text().lstrip().startswith("<?xml")
    svg = fig.read_bytes()
    sac(capsys, *args, "--figure", fig)
    assert fig.read_bytes() == svg
    assert sac(capsys, "classify", "eval", "--data", f"{F}/synth.csv")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cascade_sac", "validate", f"{F}/cycle.sac"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and "CYCLE" in proc.stderr
