import csv
import io
import json
import os

import pytest

from coxtoda.cli import main


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def pair3(tmp_path):
    return write(tmp_path, "pair.json", {"n": 3, "Iplus": [1, 2, 3], "Iminus": [1, 2, 3]})


@pytest.fixture
def params3(tmp_path):
    return write(tmp_path, "params.json",
                 {"d": ["3/2", "1", "2/3"], "cplus": ["1", "1"], "cminus": ["1/2", "2"]})


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_factor_invert_roundtrip(tmp_path, capsys, pair3, params3):
    code, out = run(capsys, ["factor", "--pair", pair3, "--params", params3])
    assert code == 0
    obj = json.loads(out)
    mat = write(tmp_path, "X.json", {"X": obj["X"]})
    code, out = run(capsys, ["invert", "--pair", pair3, "--matrix", mat])
    assert code == 0
    got = json.loads(out)
    assert got["d"] == ["3/2", "1", "2/3"]
    # gauge-reduced output: c+ = 1, c- carries the product
    assert got["cplus"] == ["1", "1"]
    assert got["cminus"] == ["1/2", "2"]


def test_moments_and_weyl_output(capsys, pair3, params3):
    code, out = run(capsys, ["moments", "--pair", pair3, "--params", params3])
    assert code == 0
    obj = json.loads(out)
    assert obj["n"] == 3 and len(obj["h"]) == 6
    assert obj["h"][0] == "1"
    assert set(obj["weyl"]) == {"P", "Q"}


def test_mutate_involution(tmp_path, capsys, pair3, params3):
    code, out = run(capsys, ["moments", "--pair", pair3, "--params", params3])
    h = json.loads(out)["h"]
    mom = write(tmp_path, "mom.json", {"n": 3, "H0": "1", "h": h})
    code, out = run(capsys, ["transport", "--from-eps", "2,0,0",
                             "--to-eps", "2,0,0", "--moments", mom])
    assert code == 0
    seed = json.loads(out)
    sf = write(tmp_path, "seed.json", seed)
    code, out = run(capsys, ["mutate", "--seed", sf, "--directions", "1,1"])
    assert code == 0
    assert json.loads(out)["x"] == seed["x"]


def test_transport_between_charts(tmp_path, capsys, pair3, params3):
    code, out = run(capsys, ["moments", "--pair", pair3, "--params", params3])
    mom = write(tmp_path, "mom.json", {"n": 3, "H0": "1", "h": json.loads(out)["h"]})
    code, out = run(capsys, ["transport", "--from-eps", "2,0,0",
                             "--to-eps", "2,2,0", "--moments", mom])
    assert code == 0
    assert json.loads(out)["eps"] == [2, 2, 0]


def test_gbd_routes_agree(capsys, params3):
    code, out = run(capsys, ["gbd", "--from-eps", "2,0,0", "--to-eps", "2,1,0",
                             "--params", params3, "--route", "all"])
    assert code == 0
    obj = json.loads(out)
    assert obj["agree"] is True
    assert set(obj["routes"]) == {"cluster", "table", "minors"}
    assert "diff" not in obj


def test_flow_csv_format(capsys, pair3, params3):
    code, out = run(capsys, ["flow", "--pair", pair3, "--params", params3,
                             "--k", "1", "--t-end", "0.01", "--dt", "0.005"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["t", "c1", "c2", "d1", "d2", "d3", "F1", "F2", "detX"]
    assert len(rows) == 4  # header + t = 0, 0.005, 0.01
    # det X = product of d is conserved: 3/2 * 1 * 2/3 = 1
    assert abs(float(rows[-1][-1]) - 1.0) < 1e-9


def test_flow_moment_solver_json(capsys, pair3, params3):
    code, out = run(capsys, ["flow", "--pair", pair3, "--params", params3,
                             "--solver", "moment", "--t-end", "0.01",
                             "--dt", "0.01", "--emit", "json"])
    assert code == 0
    obj = json.loads(out)
    assert obj["columns"][0] == "t" and len(obj["rows"]) == 2


def test_dump_network(capsys, pair3, params3):
    code, out = run(capsys, ["dump-network", "--pair", pair3, "--params", params3])
    assert code == 0
    obj = json.loads(out)
    assert obj["n"] == 3 and obj["edges"]


def test_verify_subcommand_and_seed_env(capsys, monkeypatch):
    code, out = run(capsys, ["verify", "--suite", "integer-matrices", "--n", "3"])
    assert code == 0
    assert json.loads(out)["failures"] == 0
    monkeypatch.setenv("COXTODA_SEED", "7")
    code, out = run(capsys, ["verify", "--suite", "gbd", "--trials", "2"])
    assert code == 0
    code, out = run(capsys, ["verify", "--suite", "no-such-suite"])
    assert code == 1


def test_exit_codes(tmp_path, capsys, pair3, params3):
    # usage error: factor without --params
    code, _ = run(capsys, ["factor", "--pair", pair3])
    assert code == 1
    # malformed JSON
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run(capsys, ["factor", "--pair", str(bad), "--params", params3])
    assert code == 1
    # non-generic input: transport with degenerate moments
    mom = write(tmp_path, "deg.json", {"n": 3, "H0": "1",
                                       "h": ["1", "0", "0", "0", "1", "0"]})
    code, _ = run(capsys, ["transport", "--from-eps", "2,0,0",
                           "--to-eps", "2,1,0", "--moments", mom])
    assert code == 2
    # unknown flag
    code, _ = run(capsys, ["factor", "--nope"])
    assert code == 1


def test_console_script_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "coxtoda.cli", "--help"],
                          capture_output=True, text=True)
    # argparse --help exits 0 and prints the subcommand list
    assert "factor" in proc.stdout and "verify" in proc.stdout
