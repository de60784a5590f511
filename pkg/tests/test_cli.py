import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from driftfield.cli import main
from driftfield.ingest import write_csv
from driftfield.core import PointCloud

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def data(tmp_path, rng):
    x = rng.normal(size=(60, 3)) * [3, 1, 0.5]
    paths = {"base": tmp_path / "base.csv", "same": tmp_path / "same.csv", "shift": tmp_path / "shift.csv"}
    write_csv(paths["base"], PointCloud(x))
    write_csv(paths["same"], PointCloud(x))
    write_csv(paths["shift"], PointCloud(x[:40] + [4, 0, 0]))
    return paths


@pytest.fixture
def baseline_file(tmp_path, data, capsys):
    out = tmp_path / "baseline.json"
    assert run(capsys, "baseline", "--input", data["base"], "--out", out)[0] == 0
    return out


def test_baseline_square(tmp_path, capsys):
    csv = tmp_path / "sq.csv"
    csv.write_text("0,0\n2,0\n0,2\n2,2\n")
    out = tmp_path / "b.json"
    assert run(capsys, "baseline", "--input", csv, "--out", out)[0] == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, schema("baseline"))
    assert doc["mean"] == [1.0, 1.0]


def test_baseline_deterministic(tmp_path, data, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "baseline", "--input", data["base"], "--out", a)
    run(capsys, "baseline", "--input", data["base"], "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_baseline_too_few_points(tmp_path, capsys):
    csv = tmp_path / "one.csv"
    csv.write_text("1,2\n")
    code, _, err = run(capsys, "baseline", "--input", csv, "--out", tmp_path / "x.json")
    assert code == 1 and "TooFewPoints" in err


def test_detect_identity(data, baseline_file, capsys):
    code, out, _ = run(capsys, "detect", "--baseline", baseline_file, "--new", data["same"], "--threshold", 0.1)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("report"))
    assert code == 0 and doc["drifted"] is False and doc["d_total"] == 0.0


def test_detect_drift_exit_code(data, baseline_file, capsys):
    code, out, _ = run(capsys, "detect", "--baseline", baseline_file, "--new", data["shift"], "--threshold", 1.0)
    assert code == 3 and json.loads(out)["drifted"] is True


def test_detect_default_threshold_reports_only(data, baseline_file, capsys):
    code, out, _ = run(capsys, "detect", "--baseline", baseline_file, "--new", data["shift"])
    assert code == 0 and json.loads(out)["config_echo"]["threshold"] == "inf"


def test_detect_csv_format(data, baseline_file, capsys):
    code, out, _ = run(capsys, "detect", "--baseline", baseline_file, "--new", data["shift"], "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "metric,value"
    assert any(line.startswith("eigen_ratios[0],") for line in lines)
    assert any(line.startswith("strain.mean_abs_shear[0][2],") for line in lines)


def test_detect_missing_baseline(tmp_path, data, capsys):
    code, _, err = run(capsys, "detect", "--baseline", tmp_path / "nope.json", "--new", data["same"])
    assert code == 1 and err


def test_detect_dimension_mismatch(tmp_path, baseline_file, capsys):
    csv = tmp_path / "two.csv"
    csv.write_text("1,2\n3,4\n")
    assert run(capsys, "detect", "--baseline", baseline_file, "--new", csv)[0] == 1


def test_config_precedence(tmp_path, data, baseline_file, capsys, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha": 0.25, "beta": 2.0, "threshold": 1e9}))
    _, out, _ = run(capsys, "detect", "--baseline", baseline_file, "--new", data["shift"], "--config", cfg, "--beta", 0.5)
    echo = json.loads(out)["config_echo"]
    assert (echo["alpha"], echo["beta"], echo["threshold"]) == (0.25, 0.5, 1e9)
    monkeypatch.setenv("DRIFTFIELD_CONFIG", str(cfg))
    _, out, _ = run(capsys, "detect", "--baseline", baseline_file, "--new", data["shift"])
    assert json.loads(out)["config_echo"]["alpha"] == 0.25


def test_bad_flags_exit_one(capsys):
    assert run(capsys, "detect", "--format", "xml")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys)[0] == 1


def test_text_drift_identity(tmp_path, capsys):
    a = tmp_path / "a.txt"
    a.write_text("The quick brown fox jumps over the lazy dog. The dog sleeps.")
    code, out, _ = run(capsys, "text-drift", "--original", a, "--drifted", a)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("text_drift"))
    assert code == 0
    assert doc["deformation_cosine"] == 0 and doc["shape_change_l2"] == 0 and doc["wasserstein"] == 0
    assert doc["length_change_pct"] == 0.0


def test_text_drift_with_table(tmp_path, capsys):
    table = tmp_path / "emb.tsv"
    table.write_text("a\t1,0\nb\t0,1\n")
    (tmp_path / "o.txt").write_text("a a a")
    (tmp_path / "d.txt").write_text("b b")
    code, out, _ = run(capsys, "text-drift", "--original", tmp_path / "o.txt", "--drifted", tmp_path / "d.txt", "--embeddings", table)
    doc = json.loads(out)
    assert code == 0 and doc["deformation_cosine"] == pytest.approx(1.0)
    assert doc["shape_change_l2"] == pytest.approx(2**0.5)


def test_text_drift_empty(tmp_path, capsys):
    (tmp_path / "e.txt").write_text("... !!!")
    (tmp_path / "o.txt").write_text("words")
    assert run(capsys, "text-drift", "--original", tmp_path / "o.txt", "--drifted", tmp_path / "e.txt")[0] == 1


def test_snapshots(tmp_path, data, capsys):
    out = tmp_path / "frames"
    code, stdout, _ = run(capsys, "snapshots", "--baseline", data["base"], "--new", data["shift"], "--out", out)
    assert code == 0
    files = sorted(out.glob("frame_*.json"))
    assert len(files) == 5 == len(json.loads(stdout)["frames"])
    ts = []
    for f in files:
        text = f.read_text()
        doc = json.loads(text)
        jsonschema.validate(doc, schema("snapshot_frame"))
        assert json.loads(json.dumps(doc)) == doc
        ts.append(doc["t"])
    assert ts == [0.0, 0.25, 0.5, 0.75, 1.0]


def test_snapshots_identity(tmp_path, data, capsys):
    out = tmp_path / "frames"
    run(capsys, "snapshots", "--baseline", data["base"], "--new", data["same"], "--out", out, "--fractions", "0,0.5,1")
    docs = [json.loads(f.read_text()) for f in sorted(out.glob("frame_*.json"))]
    assert len(docs) == 3
    assert all(d["points"] == docs[0]["points"] for d in docs)
    assert all(a[2] == 0 and a[3] == 0 for d in docs for a in d["arrows"])


def _stream(capsys, monkeypatch, baseline_file, rows, batch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("".join(rows)))
    code, out, err = run(capsys, "stream", "--baseline", baseline_file, "--batch-size", batch, "--threshold", 0.5)
    return code, [json.loads(line) for line in out.splitlines()], err


def _rows(path):
    return [line + "\n" for line in Path(path).read_text().splitlines()]


def test_stream_batches(capsys, monkeypatch, data, baseline_file):
    rows = _rows(data["same"])
    code, lines, _ = _stream(capsys, monkeypatch, baseline_file, rows[:10], 5)
    assert len(lines) == 2
    code, lines, _ = _stream(capsys, monkeypatch, baseline_file, rows[:7], 5)
    assert len(lines) == 2 and lines[1]["partial"] is False and lines[1]["batch_size"] == 2
    code, lines, _ = _stream(capsys, monkeypatch, baseline_file, rows[:6], 5)
    assert lines[1]["partial"] is True
    for line in lines:
        jsonschema.validate(line, schema("report"))


def test_stream_identity_never_drifts(capsys, monkeypatch, data, baseline_file):
    code, lines, _ = _stream(capsys, monkeypatch, baseline_file, _rows(data["same"]), 60)
    assert code == 0 and len(lines) == 1 and lines[0]["drifted"] is False


def test_stream_skips_malformed(capsys, monkeypatch, data, baseline_file):
    rows = _rows(data["same"])[:6]
    rows.insert(2, "1,oops,3\n")
    rows.insert(4, "1,2\n")
    code, lines, err = _stream(capsys, monkeypatch, baseline_file, rows, 3)
    assert [l["skipped_rows"] for l in lines] == [1, 1]
    assert err.count("skipping line") == 2


def test_stream_drift_exit_code(capsys, monkeypatch, data, baseline_file):
    code, lines, _ = _stream(capsys, monkeypatch, baseline_file, _rows(data["shift"]), 20)
    assert code == 3 and all(l["drifted"] for l in lines)


def test_console_exit_codes(tmp_path, data, baseline_file):
    exe = [sys.executable, "-m", "driftfield"]
    ok = subprocess.run([*exe, "detect", "--baseline", baseline_file, "--new", data["same"], "--threshold", "0.1"], capture_output=True)
    drift = subprocess.run([*exe, "detect", "--baseline", baseline_file, "--new", data["shift"], "--threshold", "1"], capture_output=True)
    err = subprocess.run([*exe, "detect", "--baseline", tmp_path / "missing", "--new", data["same"]], capture_output=True)
    assert (ok.returncode, drift.returncode, err.returncode) == (0, 3, 1)
