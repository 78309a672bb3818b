import csv
import io
import json
import os
import subprocess
import sys

import jsonschema
import pytest

from hyperlam import schema_path
from hyperlam.cli import TABLE_HEADER, main, parse_grid


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def schema(name):
    return json.loads(schema_path(name).read_text())


@pytest.fixture
def triangle(tmp_path):
    path = tmp_path / "triangle.txt"
    path.write_text("2 3 3\n0 1\n0 2\n1 2\n")
    return str(path)


def test_compute_turan():
    code, text = run("compute", "--family", "turan", "--n", "6", "--k", "3", "--r", "2",
                     "--p", "2", "--format", "json")
    d = json.loads(text)
    assert code == 0 and d["lambda"] == pytest.approx(4.0, rel=1e-10)
    assert d["metadata"]["seed"] == 0 and d["metadata"]["restarts"] == 32
    jsonschema.validate(d, schema("spectral_result"))


def test_compute_complete():
    code, text = run("compute", "--family", "complete", "--n", "4", "--r", "3", "--p", "2",
                     "--format", "json")
    assert code == 0 and json.loads(text)["lambda"] == pytest.approx(3.0, rel=1e-10)


def test_compute_triangle_file(triangle):
    code, text = run("compute", "--graph", triangle, "--p", "1")
    assert code == 0
    assert "lambda: 0.666666666667" in text
    assert "certification: oracle" in text


def test_compute_csv_header(triangle):
    code, text = run("compute", "--graph", triangle, "--p", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and len(rows) == 1 and float(rows[0]["lambda"]) == pytest.approx(2.0)


def test_repeat_runs_are_byte_identical(triangle):
    argv = ("compute", "--graph", triangle, "--p", "1.5", "--format", "json", "--seed", "3")
    assert run(*argv) == run(*argv)


@pytest.mark.parametrize("argv", [
    ("compute", "--family", "turan", "--n", "2", "--k", "3", "--r", "2"),
    ("compute", "--graph", "/nonexistent/file.txt"),
    ("compute",),
    ("nonsense",),
    ("verify", "--theorem", "th1", "--grid", "q=1"),
    ("search", "--conjecture", "co1", "--r", "4", "--k", "2", "--n", "6"),
    ("search", "--conjecture", "co1", "--r", "4", "--k", "2", "--n", "8", "--budget", "-1"),
])
def test_bad_input_exits_1(argv):
    assert run(*argv)[0] == 1


def test_conflicting_graph_sources(triangle):
    assert run("compute", "--graph", triangle, "--family", "turan", "--n", "4", "--k", "2",
               "--r", "2")[0] == 1
    assert run("compute", "--graph", triangle, "--n", "4")[0] == 1


def test_malformed_file_exits_1(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("2 3 1\n0 0\n")
    assert run("compute", "--graph", str(path))[0] == 1
    assert "line 2" in capsys.readouterr().err


def test_strict_flags_uncertified_results(tmp_path):
    path = tmp_path / "g.txt"
    # n = 7 is beyond the oracle and there is no class structure to check against
    path.write_text("3 7 3\n0 1 2\n2 3 4\n4 5 6\n")
    assert run("compute", "--graph", str(path), "--p", "2")[0] == 0
    assert run("compute", "--graph", str(path), "--p", "2", "--strict")[0] == 4
    assert run("compute", "--family", "turan", "--n", "7", "--k", "3", "--r", "3",
               "--strict")[0] == 0


def test_verify_examples():
    code, text = run("verify", "--theorem", "th3", "--grid", "k=2..3,n=4..10,p=1,2")
    assert code == 0 and "status: verified on grid" in text
    assert run("verify", "--theorem", "mst", "--grid", "k=3,r=3,n=6")[0] == 0
    assert run("verify", "--theorem", "th1", "--grid", "k=2,r=2,n=4..8,p=1.5,2,3")[0] == 0


def test_verify_json_matches_schema():
    code, text = run("verify", "--theorem", "th4", "--grid", "k=2,n=4..7,p=1", "--format", "json")
    d = json.loads(text)
    assert code == 0 and d["passed"] and d["cases_checked"] > 0
    jsonschema.validate(d, schema("sweep_report"))


def test_verify_other_theorems():
    assert run("verify", "--theorem", "th41", "--grid", "n=6,k=2,samples=200")[0] == 0
    assert run("verify", "--theorem", "limits", "--grid", "family=turan,n=5,k=2,r=2")[0] == 0
    assert run("verify", "--theorem", "symmetry",
               "--grid", "family=chromatic,n=5,k=2,r=3,p=1.5")[0] == 0


def test_verify_output_independent_of_jobs(monkeypatch):
    argv = ("verify", "--theorem", "th1", "--grid", "k=3,r=2,n=4..8,p=2", "--format", "json")
    one = run(*argv, "--jobs", "1")
    monkeypatch.setenv("HYPERLAM_JOBS", "2")
    two = run(*argv)
    assert one == two


def test_search_examples():
    code, text = run("search", "--conjecture", "co1", "--r", "4", "--k", "2", "--n", "8",
                     "--p", "1,2")
    assert code == 0 and "verified on grid" in text
    code, text = run("search", "--conjecture", "co2", "--r", "4", "--k", "2", "--n", "8",
                     "--budget", "0", "--format", "json")
    assert code == 3 and json.loads(text)["status"] == "budget_exhausted"


def test_search_precondition_message(capsys):
    assert run("search", "--conjecture", "co2", "--r", "4", "--k", "3", "--n", "9")[0] == 1
    assert "complete graph" in capsys.readouterr().err


def test_bounds_formula_and_family():
    code, text = run("bounds", "--n", "6", "--k", "2", "--r", "3", "--p", "1", "--format", "json")
    rows = json.loads(text)
    names = [r["bound_name"] for r in rows]
    assert code == 0 and names == ["b3", "b4", "th4"]
    assert rows[-1]["value"] == pytest.approx(0.5)
    jsonschema.validate(rows, schema("bound_report"))
    code, text = run("bounds", "--family", "chromatic", "--n", "6", "--k", "2", "--r", "3",
                     "--p", "2", "--format", "json")
    rows = json.loads(text)
    th4 = next(r for r in rows if r["bound_name"] == "th4")
    assert th4["slack"] == pytest.approx(0, abs=1e-8) and th4["equality_case"]
    jsonschema.validate(rows, schema("bound_report"))


def test_bounds_needs_structure(triangle):
    assert run("bounds", "--graph", triangle)[0] == 1
    assert run("bounds", "--n", "6")[0] == 1


def test_construct_round_trips(tmp_path):
    code, text = run("construct", "--family", "chromatic", "--n", "5", "--k", "2", "--r", "3",
                     "--format", "json")
    d = json.loads(text)
    assert code == 0 and d["r"] == 3 and d["n"] == 5 and len(d["edges"]) == 10 - 1
    jsonschema.validate(d, schema("hypergraph"))
    path = tmp_path / "g.json"
    path.write_text(text)
    code, out = run("compute", "--graph", str(path), "--p", "2", "--format", "json")
    assert code == 0


def test_construct_sizes_override():
    code, text = run("construct", "--family", "multipartite", "--sizes", "1,2,3", "--r", "2")
    assert code == 0 and text.splitlines()[0] == "2 6 11"


def test_table_csv():
    code, text = run("table", "--bounds", "--family", "turan", "--grid", "n=5..6,k=2..3,r=2,p=2")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert code == 0 and text.splitlines()[0] == ",".join(TABLE_HEADER)
    assert {r["bound_name"] for r in rows} == {"b1", "b2"}
    assert all(float(r["slack"]) >= -1e-9 for r in rows)


def test_table_empty_grid_has_header_only():
    code, text = run("table", "--bounds", "--family", "chromatic", "--grid", "")
    assert code == 0 and text == ",".join(TABLE_HEADER) + "\n"


def test_parse_grid():
    assert parse_grid("k=2..3,n=4..6,p=1,2") == {"k": [2, 3], "n": [4, 5, 6], "p": [1, 2]}
    assert parse_grid("") == {}
    with pytest.raises(ValueError):
        parse_grid("1,2")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hyperlam", "compute", "--family", "complete",
                           "--n", "4", "--r", "3", "--format", "json"],
                          capture_output=True, text=True, check=False,
                          env={**os.environ, "HYPERLAM_BACKEND": "python"})
    assert proc.returncode == 0
    d = json.loads(proc.stdout)
    assert d["metadata"]["backend"] == "python" and d["lambda"] == pytest.approx(3.0)
