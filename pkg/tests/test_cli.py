import json

import pytest

from orbitkit.cli import run

SUB = '{"coords": [[0, 1, 0], [0, 0, 1]]}'


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_orbits_json(capsys):
    code, out, _ = call(capsys, "orbits", "--algebra", "ut3", "--p", "3")
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 11 and len(data["orbits"]) == 11


def test_orbits_csv_and_file(capsys, tmp_path):
    target = tmp_path / "orbits.csv"
    code, out, _ = call(capsys, "orbits", "--algebra", "ut:3", "--p", "5", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    lines = target.read_text().splitlines()
    assert lines[0] == "rep,size,stab_dim" and len(lines) == 30


def test_polarize_zero(capsys):
    code, out, _ = call(capsys, "polarize", "--algebra", "ut3", "--p", "3", "--lambda", "0,0,0")
    data = json.loads(out)
    assert code == 0 and data["dim"] == 3 and data["lagrangian"]["fiber_size"] == 1


def test_polarize_several(capsys):
    code, out, _ = call(capsys, "polarize", "--algebra", "heisenberg:4", "--p", "5", "--lambda", "0,0,0,0,1", "--lambda", "1,0,0,0,0")
    data = json.loads(out)
    assert code == 0 and [d["dim"] for d in data] == [3, 5]


def test_verify_passes(capsys):
    code, out, _ = call(capsys, "verify", "--algebra", "ut3", "--p", "3", "--sub", SUB)
    data = json.loads(out)
    assert code == 0 and data["pass"]


def test_branch_induce_tensor_table(capsys):
    code, out, _ = call(capsys, "branch", "--algebra", "ut3", "--p", "3", "--sub", SUB)
    assert code == 0 and len(json.loads(out)["entries"]) == 9
    code, out, _ = call(capsys, "induce", "--algebra", "ut3", "--p", "3", "--sub", '[[[0,0,1],[0,0,0],[0,0,0]]]')
    assert code == 0 and len(json.loads(out)["inductions"]) == 3
    code, out, _ = call(capsys, "tensor", "--algebra", "ut3", "--p", "3", "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 67
    code, out, _ = call(capsys, "character-table", "--algebra", "ut3", "--p", "3", "--approx")
    assert code == 0 and "approx" in json.loads(out)["characters"][0]["character"]


def test_algebra_from_json_file(capsys, tmp_path):
    alg_file = tmp_path / "alg.json"
    alg_file.write_text(json.dumps({"p": 5, "N": 3, "generators": [[[0, 1, 0], [0, 0, 0], [0, 0, 0]], [[0, 0, 1], [0, 0, 0], [0, 0, 0]]]}))
    code, out, _ = call(capsys, "orbits", "--algebra", str(alg_file))
    assert code == 0 and json.loads(out)["count"] == 25


@pytest.mark.parametrize(
    "argv",
    [
        ["orbits", "--algebra", "ut3"],
        ["orbits", "--algebra", "ut3", "--p", "4"],
        ["orbits", "--algebra", "nope", "--p", "3"],
        ["orbits", "--algebra", "ut", "--p", "3"],
        ["polarize", "--algebra", "ut3", "--p", "3"],
        ["polarize", "--algebra", "ut3", "--p", "3", "--lambda", "1,x,0"],
        ["polarize", "--algebra", "ut3", "--p", "3", "--lambda", "1,0"],
        ["branch", "--algebra", "ut3", "--p", "3"],
        ["branch", "--algebra", "ut3", "--p", "3", "--sub", "{bad json"],
        ["branch", "--algebra", "ut3", "--p", "3", "--sub", "missing.json"],
        ["tensor", "--algebra", "ut3", "--p", "3", "--lambda", "0,0,1"],
        ["orbits", "--algebra", "ut3", "--p", "3", "--budget", "0"],
        ["orbits", "--algebra", "ut3", "--p", "3", "--threads", "0"],
        ["frobnicate", "--algebra", "ut3"],
    ],
)
def test_input_errors(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 1 and out == "" and err


def test_budget_exit(capsys):
    code, _, err = call(capsys, "orbits", "--algebra", "ut4", "--p", "5", "--budget", "100")
    assert code == 3 and "budget" in err


def test_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ORBITKIT_BUDGET", "10")
    code, _, _ = call(capsys, "orbits", "--algebra", "ut3", "--p", "3")
    assert code == 3


def test_help_exits_cleanly(capsys):
    assert run(["--help"]) == 0


def test_failed_verification_exit(capsys, monkeypatch):
    import orbitkit.cli as cli

    monkeypatch.setattr(cli, "verify_all", lambda *a, **k: {"items": {"x": {"pass": False}}, "pass": False})
    code, out, err = call(capsys, "verify", "--algebra", "ut3", "--p", "3")
    assert code == 2 and json.loads(out)["pass"] is False and "failed" in err


def test_internal_error_exit(capsys, monkeypatch):
    import orbitkit.cli as cli
    from orbitkit.errors import InternalConsistencyError

    def boom(*args, **kwargs):
        raise InternalConsistencyError("synthetic")

    monkeypatch.setattr(cli, "orbit_partition", boom)
    code, _, err = call(capsys, "orbits", "--algebra", "ut3", "--p", "3")
    assert code == 2 and "synthetic" in err
