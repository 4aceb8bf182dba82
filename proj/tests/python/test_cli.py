"""End-to-end runs of the command-line tool, validated against the shipped
JSON schemas."""

import json
import os
import pathlib
import subprocess

import jsonschema
import pytest

ROOT = pathlib.Path(os.environ.get("SLOWDECAY_ROOT", pathlib.Path(__file__).parents[2]))
CLI = os.environ.get("SLOWDECAY_CLI", str(ROOT / "build" / "slowdecay"))
SCHEMAS = ROOT / "schemas"
CONFIGS = ROOT / "configs"


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def run(command, out, config=None, *flags):
    args = [CLI, command, "--out", str(out), *flags]
    if config:
        args += ["--config", str(config)]
    return subprocess.run(args, capture_output=True, text=True, timeout=300)


def validate_outputs(out, command):
    stem = command.replace("-", "_")
    report = json.loads((out / f"{stem}.json").read_text())
    jsonschema.validate(report, schema(stem))
    meta = json.loads((out / f"{stem}.meta.json").read_text())
    jsonschema.validate(meta, schema("meta"))
    for f in meta["files"]:
        assert (out / f).exists()
    return report


CASES = [
    ("constants", "pure"),
    ("check-hypotheses", "pure"),
    ("solve", "pure"),
    ("solve-ef", "pure"),
    ("sweep", "pure"),
    ("singular", "pure"),
    ("classify", "pure"),
    ("classify", "forced_b11"),
    ("energy", "pure"),
    ("rates", "manufactured_power"),
    ("rates", "manufactured_log"),
    ("rates", "bounded"),
    ("instability", "instability"),
    ("verify-all", "pure"),
]


@pytest.mark.parametrize("command,config", CASES)
def test_command_output_matches_schema(tmp_path, command, config):
    res = run(command, tmp_path, CONFIGS / f"{config}.json")
    assert res.returncode == 0, res.stderr
    validate_outputs(tmp_path, command)


def test_constants_values(tmp_path):
    res = run("constants", tmp_path, CONFIGS / "pure.json")
    c = json.loads(res.stdout)
    assert c["m"] == 1.0
    assert abs(c["L"] - 3.4641016) < 1e-7
    assert abs(c["p_c"] - 2.137434755295254) < 1e-12


def test_verify_all_prints_table(tmp_path):
    res = run("verify-all", tmp_path, CONFIGS / "pure.json")
    assert res.returncode == 0
    lines = res.stdout.strip().splitlines()
    assert lines[0].split()[:2] == ["group", "check"]
    assert lines[-1].endswith("0 failed")
    assert all(line.rstrip().endswith("PASS") for line in lines[1:-1])


def test_reports_are_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        for command in ("sweep", "singular", "energy"):
            assert run(command, out, CONFIGS / "pure.json").returncode == 0
    for f in sorted(a.rglob("*")):
        if f.is_file() and not f.name.endswith(".meta.json"):
            assert f.read_bytes() == (b / f.relative_to(a)).read_bytes(), f.name


def test_empty_ladder_is_a_config_error(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"problem": {}, "ladder": {"alphas": []}}))
    res = run("sweep", tmp_path, cfg)
    assert res.returncode == 2
    err = json.loads(res.stderr)
    jsonschema.validate(err, schema("error"))
    assert err["error"] == "ConfigError"


def test_unknown_keys_are_rejected(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"problem": {}, "sweep": {"engine": "radial", "speed": 2}}))
    res = run("sweep", tmp_path, cfg)
    assert res.returncode == 2
    assert "sweep.speed" in json.loads(res.stderr)["message"]


def test_numerical_failure_exit_code(tmp_path):
    res = run("classify", tmp_path, CONFIGS / "forced_b17.json")
    assert res.returncode == 3
    assert json.loads(res.stderr)["error"] == "NoNonnegativeRoot"


def test_flags_override_config(tmp_path):
    res = run("sweep", tmp_path, CONFIGS / "pure.json", "--grid-n", "7", "--ladder-max-exp", "3")
    assert res.returncode == 0
    rep = validate_outputs(tmp_path, "sweep")
    assert len(rep["levels"]) == 4
    rows = (tmp_path / "sweep" / "envelope.csv").read_text().strip().splitlines()
    assert len(rows) == 8


def test_fractional_dimension_needs_flag(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"problem": {"n": 14.5}}))
    assert run("constants", tmp_path, cfg).returncode == 2
    assert run("constants", tmp_path, cfg, "--allow-fractional-n").returncode == 0


def test_csv_has_full_precision(tmp_path):
    run("singular", tmp_path, CONFIGS / "pure.json")
    header, first = (tmp_path / "singular.csv").read_text().splitlines()[:2]
    assert header == "r,u,du"
    assert len(first.split(",")[1].replace(".", "").lstrip("0")) >= 16
