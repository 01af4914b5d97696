import csv
import io
import json

import pytest

from ssx import cli

SMALL = {
    "omega-check": ["--samples", "20"],
    "regularity": ["--samples", "20", "--nilpotent", "5", "--jordan", "5"],
    "orbit-classify": ["--samples", "2"],
    "f-table": ["--p", "4", "--q", "3", "--samples", "2"],
    "levi-table": ["--samples", "1"],
    "kahler-signature": ["--samples", "1"],
    "ma-residual": ["--samples", "1"],
    "injectivity": ["--samples", "20", "--equivalent", "5", "--lattice", "5"],
    "lattice-verify": ["--type", "B", "--n", "3"],
    "rank1-catalog": [],
    "collision-witness": [],
}


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


@pytest.mark.parametrize("sub", sorted(SMALL))
def test_subcommands_pass_and_are_deterministic(capsys, sub):
    code, out1 = run(capsys, sub, *SMALL[sub], "--seed", "5")
    assert code == 0, out1.err
    rep = json.loads(out1.out)
    assert rep["schema_version"] == 1 and rep["subcommand"] == sub
    assert rep["config"]["seed"] == 5 and "tolerances" in rep
    assert rep["claims"] and all(c["passed"] is not False for c in rep["claims"])
    _, out2 = run(capsys, sub, *SMALL[sub], "--seed", "5")
    assert out1.out == out2.out


def test_f_table_csv(capsys):
    code, out = run(capsys, "f-table", "--p", "4", "--q", "3", "--samples", "1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out.out)))
    assert len(rows) == 9
    assert {"p", "q", "stratum", "parameter", "F"} <= set(rows[0])
    F = {s: [float(r["F"]) for r in rows if r["stratum"] == s] for s in "QPR"}
    assert max(F["Q"]) < -1 < min(F["P"]) <= max(F["P"]) < 1 < min(F["R"])


def test_levi_table_csv_columns(capsys):
    code, out = run(capsys, "levi-table", "--samples", "1", "--format", "csv")
    assert code == 0
    assert out.out.splitlines()[0] == ",".join(cli.HYPERBOLOID_COLUMNS)


def test_lattice_verify_lists_witnesses(capsys):
    code, out = run(capsys, "lattice-verify", "--type", "B", "--n", "3")
    rep = json.loads(out.out)
    assert code == 0 and rep["data"]["B3"]["verdict"] == "pass" and rep["data"]["B3"]["witnesses"]


def test_failed_claim_exits_one(capsys):
    code, out = run(capsys, "collision-witness", "--p", "2", "--q", "2", "--format", "text")
    assert code == 1 and "FAIL" in out.out


@pytest.mark.parametrize("argv", [["nope"], ["f-table", "--bogus"], ["f-table", "--p", "2"],
                                  ["f-table", "--tol", "unknown=1"],
                                  ["injectivity", "--tol", "collision=1e-3"],
                                  ["injectivity", "--tau=1,1,1,1"],
                                  ["lattice-verify", "--type", "X"], []])
def test_configuration_errors_exit_two(capsys, argv):
    code, _ = run(capsys, *argv)
    assert code == 2


def test_text_and_output_file(tmp_path, capsys):
    path = tmp_path / "r.txt"
    code, out = run(capsys, "rank1-catalog", "--format", "text", "--output", str(path))
    assert code == 0 and out.out == ""
    assert "PASS" in path.read_text()


def test_orbit_classify_point_file(tmp_path, capsys):
    from ssx import hyperboloid as hy
    pts = [hy.slice_point("P", 0.4, 3, 3).to_list(), hy.point_m(3, 3).to_list()]
    f = tmp_path / "pts.json"
    f.write_text(json.dumps(pts))
    code, out = run(capsys, "orbit-classify", "--points", str(f))
    rep = json.loads(out.out)
    assert code == 0 and [r["kind"] for r in rep["rows"]] == ["ClosedP", "NilpotentM"]
