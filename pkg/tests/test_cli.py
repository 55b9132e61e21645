"""End-to-end CLI runs through a subprocess, plus in-process exit-code
mapping that is awkward to trigger from outside."""

import json
import subprocess
import sys

import pytest

from orbitcount import cli
from orbitcount.errors import QuadratureError


def run_cli(*args, cwd=None):
    proc = subprocess.run(
        [sys.executable, "-m", "orbitcount.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
        timeout=300,
    )
    return proc


@pytest.fixture(scope="module")
def census_csv(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    path = d / "census8.csv"
    proc = run_cli("enumerate", "--cutoff", "8", "--out", str(path))
    assert proc.returncode == 0, proc.stderr
    return path


@pytest.fixture(scope="module")
def spectrum_csv(tmp_path_factory):
    d = tmp_path_factory.mktemp("spectra")
    path = d / "spectrum.csv"
    path.write_text(
        "label,lambda,weight\nconst,0.0,1.0\nlow,-0.64,2.0\ntempered,-3.0,1.0\n"
    )
    return path


def test_enumerate_report_and_determinism(tmp_path):
    out1 = tmp_path / "c1.csv"
    out2 = tmp_path / "c2.csv"
    r1 = run_cli("enumerate", "--cutoff", "2", "--out", str(out1))
    r2 = run_cli("enumerate", "--cutoff", "2", "--out", str(out2))
    assert r1.returncode == 0 and r2.returncode == 0
    doc1 = json.loads(r1.stdout)
    doc2 = json.loads(r2.stdout)
    assert doc1["census"]["size"] == 136
    assert doc1["census"]["compact_count"] == 8
    assert doc1["census"]["enumerator"] == "pruned"
    # reruns differ only in the timestamp and the requested output path
    for doc in (doc1, doc2):
        doc["meta"].pop("generated_at")
        doc["census"].pop("path")
    assert doc1 == doc2
    assert out1.read_bytes() == out2.read_bytes()


def test_enumerate_naive_flag(tmp_path):
    out = tmp_path / "n.csv"
    r = run_cli("enumerate", "--cutoff", "1.5", "--out", str(out), "--naive")
    assert r.returncode == 0
    assert json.loads(r.stdout)["census"]["enumerator"] == "naive"


def test_enumerate_workers_deterministic(tmp_path):
    a = tmp_path / "w1.csv"
    b = tmp_path / "w3.csv"
    assert run_cli("enumerate", "--cutoff", "4", "--out", str(a)).returncode == 0
    assert (
        run_cli("enumerate", "--cutoff", "4", "--out", str(b), "--workers", "3").returncode
        == 0
    )
    assert a.read_bytes() == b.read_bytes()


def test_poincare_report(census_csv):
    r = run_cli("poincare", "--census", str(census_csv), "--z", "6")
    assert r.returncode == 0, r.stderr
    doc = json.loads(r.stdout)
    assert doc["series"]["value"]["re"] == pytest.approx(1.366581211023292, rel=1e-12)
    assert doc["series"]["tail_bound"] < 1e-6
    assert doc["series"]["census_size"] == 42248


def test_poincare_below_abscissa_exits_1(census_csv):
    r = run_cli("poincare", "--census", str(census_csv), "--z", "5")
    assert r.returncode == 1
    assert "abscissa" in r.stderr


def test_smoothed_count(census_csv):
    r = run_cli("smoothed-count", "--census", str(census_csv), "--x", "1.0")
    assert r.returncode == 0, r.stderr
    doc = json.loads(r.stdout)
    assert doc["smoothed_count"]["value"] == pytest.approx(
        1.6357703105122159, rel=1e-13
    )
    assert doc["smoothed_count"]["census_size_used"] == 72


def test_smoothed_count_beyond_coverage_exits_1(census_csv):
    r = run_cli("smoothed-count", "--census", str(census_csv), "--x", "9.0")
    assert r.returncode == 1


def test_spectral_side_needs_clear_poles(spectrum_csv):
    # lambda = 0 puts a datum at z = 1; theta = 1 collides, theta = 0.8 works
    bad = run_cli("spectral-side", "--spectrum", str(spectrum_csv), "--x", "1.0")
    assert bad.returncode == 1
    good = run_cli(
        "spectral-side", "--spectrum", str(spectrum_csv), "--x", "1.0,2.0",
        "--theta", "0.8",
    )
    assert good.returncode == 0, good.stderr
    doc = json.loads(good.stdout)
    assert doc["spectral"]["sign"] == 1
    rows = doc["spectral"]["evaluations"]
    assert len(rows) == 2
    assert rows[0]["constant_labels"] == ["const"]


def test_compare_emits_rows_without_verdict(census_csv, spectrum_csv):
    r = run_cli(
        "compare", "--census", str(census_csv), "--spectrum", str(spectrum_csv),
        "--x", "0.5,1.0", "--theta", "0.8",
    )
    assert r.returncode == 0, r.stderr
    doc = json.loads(r.stdout)
    rows = doc["compare"]["rows"]
    assert [row["x"] for row in rows] == [0.5, 1.0]
    for row in rows:
        assert row["geometric_signed"] == row["geometric"]  # sign is +1 at nu=2
    assert "no pass/fail" in doc["compare"]["note"]


def test_oracle_torus(tmp_path):
    report = tmp_path / "torus.json"
    r = run_cli(
        "oracle-torus", "--n", "1", "--nu", "1", "--lam", "-1",
        "--report", str(report),
    )
    assert r.returncode == 0, r.stderr
    assert r.stdout == ""  # report went to the file
    doc = json.loads(report.read_text())
    assert doc["torus"]["within_budget"] is True
    assert doc["torus"]["budget"] <= 1e-10


def test_oracle_torus_divergent_exits_1():
    r = run_cli("oracle-torus", "--n", "2", "--nu", "1", "--lam", "-1")
    assert r.returncode == 1
    assert "convergent" in r.stderr


def test_perron_check():
    r = run_cli("perron-check", "--u", "1.0")
    assert r.returncode == 0, r.stderr
    doc = json.loads(r.stdout)
    assert doc["perron"]["closed_form"] == pytest.approx(
        0.19978820044686402, rel=1e-15
    )
    assert doc["perron"]["abs_difference"] <= 1e-9


def test_bad_config_key_exits_1(tmp_path, census_csv):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("not_a_key = 3\n")
    r = run_cli(
        "smoothed-count", "--census", str(census_csv), "--x", "1.0",
        "--config", str(cfg),
    )
    assert r.returncode == 1
    assert "unknown config key" in r.stderr


def test_convergence_failure_maps_to_exit_2(monkeypatch):
    def boom(*_a, **_k):
        raise QuadratureError("synthetic convergence failure")

    monkeypatch.setattr(cli, "perron_contour_oracle", boom)
    code = cli.main(["perron-check", "--u", "1.0"])
    assert code == 2


def test_missing_census_file_exits_1(tmp_path):
    r = run_cli("poincare", "--census", str(tmp_path / "nope.csv"), "--z", "6")
    assert r.returncode == 1
