import json
import os
import pathlib
import subprocess

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

ROOT = pathlib.Path(__file__).resolve().parents[2]
CLI = os.environ.get("LLULL_CLI", str(ROOT / "build" / "llull"))
SCHEMAS = pathlib.Path(os.environ.get("LLULL_SCHEMA_DIR", ROOT / "schema"))
DATA = ROOT / "data"


def registry():
    reg = Registry()
    for path in SCHEMAS.glob("*.json"):
        reg = reg.with_resource(path.name, Resource.from_contents(json.loads(path.read_text())))
    return reg


def validate(doc, name):
    schema = json.loads((SCHEMAS / name).read_text())
    Draft202012Validator(schema, registry=registry()).validate(doc)


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("LLULL_TOL", None)
    full_env.update(env or {})
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, env=full_env)


def run_json(*args, **kw):
    p = run(*args, **kw)
    assert p.returncode == 0, p.stderr
    return json.loads(p.stdout)


def test_tally_single_choice_gives_vote_shares():
    doc = run_json("tally", "--in", DATA / "single_choice.txt", "--format", "json")
    validate(doc, "rate_report.schema.json")
    assert doc["fraction"] == pytest.approx([0.5, 0.3, 0.2], abs=1e-10)
    assert doc["projection"]["fixed_point"] is True


def test_parse_error_exit_code():
    p = run("tally", "--in", DATA / "bad.txt")
    assert p.returncode == 2
    assert "line 3, column 6" in p.stderr


def test_zero_matrix_warns():
    doc = run_json("tally", "--in", DATA / "zero.json", "--in-kind", "matrix")
    assert doc["fraction"] == [0.25] * 4
    assert doc["warnings"] == ["NoInformation"]


def test_solver_error_exit_code():
    p = run("strengths", "--in", DATA / "zero.json")
    assert p.returncode == 3
    p = run("tally", "--in", DATA / "epsilon.json", "--max-iter", "2")
    assert p.returncode == 3


def test_env_tolerance_fallback():
    loose = run_json("strengths", "--in", DATA / "cycle.csv", env={"LLULL_TOL": "1e-3"})
    tight = run_json("strengths", "--in", DATA / "cycle.csv")
    assert loose["diagnostics"]["iterations"] <= tight["diagnostics"]["iterations"]
    assert loose["diagnostics"]["residual"] <= 1e-3
    flag = run_json("strengths", "--in", DATA / "cycle.csv", "--tol", "1e-12",
                    env={"LLULL_TOL": "1e-3"})
    assert flag == tight


def test_analyze_blocks():
    doc = run_json("analyze", "--in", DATA / "blocks.csv")
    validate(doc, "structure_report.schema.json")
    assert doc["components"] == [["a", "b"], ["c"]]
    assert doc["dominance"] == [[0, 1]]
    assert doc["top_dominant"] == 0
    text = run("analyze", "--in", DATA / "cycle.csv", "--format", "text").stdout
    assert "irreducible: true" in text


def test_projected_matrix_passes_analysis(tmp_path):
    out = run("project", "--in", DATA / "cycle.csv", "--format", "csv")
    assert out.returncode == 0
    projected = tmp_path / "p.csv"
    projected.write_text(out.stdout)
    doc = run_json("analyze", "--in", projected)
    assert doc["clc"]["ok"] is True
    validate(run_json("project", "--in", DATA / "cycle.csv"), "projection.schema.json")


def test_compare_epsilon():
    doc = run_json("compare", "--in", DATA / "epsilon.json")
    validate(doc, "compare.schema.json")
    assert doc["eigenvector"][0] == pytest.approx(4 / 6, abs=0.03)
    assert doc["fraction"][0] == pytest.approx(1 - 2 * 0.01, abs=1e-3)
    zero = run_json("compare", "--in", DATA / "zero.json")
    assert zero["eigenvector"] is None
    assert "eigenvector_unavailable" in zero
    single = run_json("compare", "--in", DATA / "single_choice.txt")
    assert single["fraction"] == pytest.approx(single["mean_score"], abs=1e-10)


def test_strengths_and_trace(tmp_path):
    trace = tmp_path / "trace.csv"
    doc = run_json("strengths", "--in", DATA / "blocks.csv", "--trace", trace)
    validate(doc, "strengths.schema.json")
    assert doc["phi"][2] == 0.0
    lines = trace.read_text().splitlines()
    assert lines[0] == "iteration,log_likelihood,residual"
    assert len(lines) == doc["diagnostics"]["iterations"] + 2


def test_selfcheck():
    for name in ["single_choice.txt", "clones.txt", "cycle.csv", "blocks.csv", "zero.json"]:
        doc = run_json("selfcheck", "--in", DATA / name, "--seed", "3")
        validate(doc, "selfcheck.schema.json")
        assert doc["ok"] is True, name


def test_multiple_inputs_are_deterministic():
    files = [DATA / n for n in ["single_choice.txt", "cycle.csv", "blocks.csv", "clones.txt"]]
    args = [a for f in files for a in ("--in", f)]
    serial = run("tally", *args, "--format", "csv")
    parallel = run("tally", *args, "--format", "csv", "--jobs", "4")
    assert serial.returncode == 0
    assert serial.stdout == parallel.stdout
    assert serial.stdout.count("option,fraction,rank_like") == 4


def test_usage_errors():
    assert run().returncode == 1
    assert run("tally").returncode == 1
    assert run("tally", "--in", DATA / "cycle.csv", "--format", "xml").returncode == 1
    assert run("tally", "--in", DATA / "missing.txt").returncode == 1


def test_ties_flag():
    half = run_json("tally", "--in", DATA / "clones.txt", "--ties", "half")
    abstain = run_json("tally", "--in", DATA / "clones.txt", "--ties", "abstain")
    m_half = half["projection"]["matrix"]["scores"]
    m_abstain = abstain["projection"]["matrix"]["scores"]
    assert m_half != m_abstain
