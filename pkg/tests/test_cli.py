import csv
import io
import json
import subprocess
import sys

import pytest

from kneser_topo.cli import GRID_COLUMNS, main, parse_int_range
from kneser_topo import ParameterError


def run(capsys, *argv, environ=None):
    code = main(list(argv), environ=environ or {})
    out = capsys.readouterr().out
    return code, out


def test_parse_int_range():
    assert parse_int_range("4..8") == [4, 5, 6, 7, 8]
    assert parse_int_range("6,4") == [4, 6]
    assert parse_int_range("5") == [5]
    assert parse_int_range("5..4") == []
    with pytest.raises(ParameterError):
        parse_int_range("x")


def test_enumerate(capsys):
    code, out = run(capsys, "enumerate", "--n", "4", "--k", "2", "--s", "2,1")
    data = json.loads(out)
    assert code == 0 and data["count"] == 3
    assert data["sets"] == [[1, 3], [1, 4], [2, 4]]


def test_graph(capsys):
    code, out = run(capsys, "graph", "--n", "5", "--k", "2", "--s", "2,2")
    data = json.loads(out)
    assert code == 0 and data["summary"] == "5 vertices, 5 edges" and data["chi"] == 3


@pytest.mark.parametrize("target,dim", [("ncomplex", 1), ("pair-poset", 1), ("hom", 1)])
def test_homology_targets(capsys, target, dim):
    code, out = run(capsys, "homology", "--target", target, "--n", "5", "--k", "2", "--s", "2,1")
    assert code == 0 and json.loads(out)["sphere_dim"] == dim


def test_complex_and_poset_commands(capsys):
    code, out = run(capsys, "ncomplex", "--n", "4", "--k", "2", "--s", "2,1")
    assert code == 0 and json.loads(out)["f_vector"] == [2]
    code, out = run(capsys, "pair-poset", "--n", "4", "--k", "2", "--s", "2,1")
    assert code == 0 and json.loads(out)["num_elements"] == 2


@pytest.mark.parametrize("n,k,s", [("7", "3", "2,2,1"), ("6", "2", "3,1"), ("6", "2", "2,2")])
def test_verify_theorem2(capsys, n, k, s):
    code, out = run(capsys, "verify-theorem2", "--n", n, "--k", k, "--s", s)
    assert code == 0 and json.loads(out)["pass"]


@pytest.mark.parametrize("n,s,chi", [("6", "2,2", 4), ("5", "2,1", 3)])
def test_verify_theorem3(capsys, n, s, chi):
    code, out = run(capsys, "verify-theorem3", "--n", n, "--k", "2", "--s", s)
    data = json.loads(out)
    assert code == 0 and data["checks"]["theorem3"]["chi"] == chi


def test_verify_proofs_exit_codes(capsys):
    code, out = run(capsys, "verify-proofs", "--n", "5", "--k", "2", "--s", "2,1")
    assert code == 0 and json.loads(out)["pass"]
    code, out = run(capsys, "verify-proofs", "--n", "6", "--k", "2", "--s", "2,1")
    data = json.loads(out)
    assert code == 1 and data["checks"]["thm8"]["status"] == "fail"
    assert data["checks"]["lemma5"]["status"] == "pass" and data["checks"]["thm7"]["status"] == "pass"


def test_corollary10(capsys):
    code, out = run(capsys, "corollary10", "--n", "9", "--k", "3")
    assert code == 0 and json.loads(out)["ok"]


@pytest.mark.parametrize("argv", [
    ["enumerate", "--n", "5", "--k", "3", "--s", "2,1"],         # length mismatch with --k
    ["enumerate", "--n", "5", "--s", "2,0"],                     # non-positive entry
    ["verify-theorem2", "--n", "3", "--k", "2", "--s", "2,1"],    # outside the theorem regime
    ["verify-theorem2", "--n", "6", "--k", "2", "--s", "1,1"],    # s_1 < 2
    ["graph", "--n", "5"],                                       # missing --s
    ["no-such-command"],
])
def test_invalid_parameters_exit_three(capsys, argv):
    assert main(argv, environ={}) == 3


def test_cap_exit_code(capsys):
    code = main(["homology", "--target", "pair-poset", "--n", "6", "--k", "2", "--s", "2,1",
                 "--max-simplices", "50"], environ={})
    assert code == 2
    code = main(["homology", "--target", "pair-poset", "--n", "6", "--k", "2", "--s", "2,1"],
                environ={"KNESER_TOPO_CAPS": "max_simplices=50"})
    assert code == 2
    assert main(["enumerate", "--n", "5", "--s", "2,1"], environ={"KNESER_TOPO_CAPS": "bogus=1"}) == 3


def test_output_is_deterministic(capsys, tmp_path):
    argv = ["verify-proofs", "--n", "5", "--k", "2", "--s", "2,1"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    out = tmp_path / "r.json"
    assert main(argv + ["--out", str(out)], environ={}) == 0
    assert out.read_text() == first[1]


def test_grid_csv(capsys):
    code, out = run(capsys, "grid", "--n", "4..5", "--k", "2", "--s", "2,1", "--s", "2,2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == GRID_COLUMNS
    assert [(r["n"], r["s"]) for r in rows] == [("4", "2,1"), ("4", "2,2"), ("5", "2,1"), ("5", "2,2")]
    by_key = {(r["n"], r["s"]): r for r in rows}
    assert by_key[("5", "2,2")]["chi_exact"] == "3" and by_key[("5", "2,2")]["sphere_verified"] == "True"
    assert by_key[("4", "2,2")]["thm7"] == "n/a"


def test_grid_parallel_matches_serial(capsys):
    argv = ["grid", "--n", "4..5", "--k", "2", "--s", "2,1", "--format", "csv"]
    assert run(capsys, *argv) == run(capsys, *argv, "--jobs", "2")


def test_grid_outside_regime_and_empty(capsys):
    code, out = run(capsys, "grid", "--n", "9", "--k", "3", "--s", "3,3,3", "--format", "csv")
    (row,) = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and row["chi_exact"] == "3" and row["chi_formula"] == "no formula asserted"
    code, out = run(capsys, "grid", "--n", "5..4", "--s", "2,1", "--format", "csv")
    assert code == 0 and out.strip() == ",".join(GRID_COLUMNS)


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "kneser_topo.cli", "enumerate", "--n", "4", "--s", "2,1"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["count"] == 3
