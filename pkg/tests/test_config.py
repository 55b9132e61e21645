"""Run configuration loading/merging and the report serializers."""

import json

import numpy as np
import pytest

from orbitcount.config import RunConfig, build_config, load_config_file
from orbitcount.errors import InputError
from orbitcount.reports import base_meta, complex_fields, fmt17, write_csv, write_json


def test_defaults():
    cfg = RunConfig()
    assert cfg.nu == 2 and cfg.ell == 2 and cfg.theta == 1.0
    assert cfg.sigma0 == 4.0
    assert cfg.workers == 1


def test_config_file_parsing(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(
        "# comment line\n"
        "theta = 0.8\n"
        "workers=4\n"
        "\n"
        "nu = 1  # trailing comment\n"
    )
    got = load_config_file(p)
    assert got == {"theta": 0.8, "workers": 4, "nu": 1}


def test_config_unknown_key(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("frobnicate = 3\n")
    with pytest.raises(InputError):
        load_config_file(p)


def test_override_precedence(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("theta = 0.8\nnu = 1\n")
    cfg = build_config(str(p), {"nu": 2, "theta": None})
    assert cfg.theta == 0.8  # file wins over default
    assert cfg.nu == 2  # explicit override wins over file


def test_validation():
    with pytest.raises(InputError):
        RunConfig(nu=0).validate()
    with pytest.raises(InputError):
        RunConfig(workers=0).validate()
    with pytest.raises(InputError):
        RunConfig(theta=-1.0).validate()
    with pytest.raises(InputError):
        RunConfig(work_budget=0).validate()


def test_fmt17_roundtrips():
    for x in (0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, 2.0**-1074):
        assert float(fmt17(x)) == x


def test_complex_fields():
    assert complex_fields(complex(1.5, -2.0)) == {"re": 1.5, "im": -2.0}


def test_write_json_stdout_and_file(tmp_path, capsys):
    doc = {"meta": base_meta("cmd", RunConfig().as_dict()), "x": 1.0}
    write_json(doc, None)
    out = capsys.readouterr().out
    parsed = json.loads(out)
    assert parsed["x"] == 1.0
    assert parsed["meta"]["command"] == "cmd"

    p = tmp_path / "r.json"
    write_json(doc, str(p))
    assert json.loads(p.read_text())["x"] == 1.0


def test_write_json_rejects_nan(tmp_path):
    with pytest.raises(ValueError):
        write_json({"x": float("nan")}, str(tmp_path / "bad.json"))


def test_write_csv_formatting(tmp_path):
    p = tmp_path / "t.csv"
    write_csv(p, ["a", "b", "c"], [[1, 0.1, True], [2, 2.0 / 3.0, False]])
    lines = p.read_text().strip().splitlines()
    assert lines[0] == "a,b,c"
    assert lines[1].split(",")[2] == "true"
    assert float(lines[2].split(",")[1]) == 2.0 / 3.0


def test_base_meta_shape():
    meta = base_meta("enumerate", {"z": 1})
    assert meta["tool"] == "orbitcount"
    assert meta["generated_at"].endswith("+00:00")  # explicit UTC timestamps
    assert meta["config"] == {"z": 1}
    assert np.__name__  # numpy stays an explicit dependency of the reports
