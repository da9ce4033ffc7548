import json
import math
import subprocess
import sys

import numpy as np
import pytest

from finitetrap import DriveParams, TrapParams, number_distribution, solve_steady_state
from finitetrap.cli import main
from finitetrap.export import read_table, render_csv, render_json

LAYOUTS = {
    "spectrum": ["n", "energy_mpt", "energy_deformed", "transition_frequency"],
    "deformation": ["n", "f2", "h"],
    "steady-state": ["n", "re", "im", "p"],
    "pn": ["n", "p"],
    "qfunc": ["re", "im", "value"],
    "wigner": ["re", "im", "value"],
}


def run(tmp_path, *args, name="out.csv"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out


@pytest.mark.parametrize("command, columns", LAYOUTS.items())
def test_layouts(tmp_path, command, columns):
    extra = ["--points", "11"] if command in ("qfunc", "wigner") else []
    code, out = run(tmp_path, command, "--depth", "26", "--eta", "0.75", "--rabi-ratio", "0.9", *extra)
    assert code == 0
    cols, rows, _ = read_table(out)
    assert cols == columns
    if command in ("qfunc", "wigner"):
        assert len(rows) == 121
    else:
        assert len(rows) == TrapParams(26).n_max + 1


def test_pn_matches_library(tmp_path):
    code, out = run(tmp_path, "pn", "--depth", "45", "--eta", "0.22", "--rabi-ratio", "0.85")
    assert code == 0
    _, rows, _ = read_table(out)
    p = number_distribution(solve_steady_state(TrapParams(45), DriveParams(0.22, 0.85)))
    assert [r[1] for r in rows] == list(p)


def test_deformation_without_eta_leaves_h_empty(tmp_path):
    code, out = run(tmp_path, "deformation", "--depth", "7")
    assert code == 0
    assert out.read_text().splitlines()[1].endswith(",")
    _, rows, _ = read_table(out)
    assert math.isnan(rows[1][2])


def test_squeeze_range_and_json(tmp_path):
    code, out = run(
        tmp_path, "squeeze", "--depth", "0.5", "--depth-range", "5:13:4", "--eta", "0.25", "--rabi-ratio", "0.31",
        name="s.json",
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["command"] == "squeeze"
    assert [r[0] for r in doc["rows"]] == [0.5, 5.0, 9.0, 13.0]
    assert doc["rows"][0][1] is None
    assert "0.5" in doc["meta"]["failures"]
    assert doc["rows"][3][1] < 0


def test_verify(capsys):
    assert main(["verify", "--depth", "30", "--eta", "0.22", "--rabi-ratio", "0.85"]) == 0
    line = capsys.readouterr().out
    assert line.rstrip().endswith("PASS")


def test_verify_fails_for_wrong_chi(capsys):
    assert main(["verify", "--depth", "30", "--eta", "0.22", "--rabi-ratio", "0.85", "--chi", "1+1j"]) == 1
    assert "FAIL" in capsys.readouterr().out


@pytest.mark.parametrize(
    "args",
    [
        ["pn", "--depth", "30"],
        ["pn", "--depth", "30", "40", "--eta", "0.2"],
        ["spectrum", "--depth", "30"],
        ["qfunc", "--depth", "30", "--eta", "0.2", "--points", "1", "--out", "x.csv"],
    ],
)
def test_usage_errors(capsys, args, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(args) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "UsageError"


def test_numerical_error_exit(capsys, tmp_path):
    code, _ = run(tmp_path, "pn", "--depth", "7", "--eta", "5.0")
    assert code == 3
    assert json.loads(capsys.readouterr().err)["error"] == "BranchError"


def test_bad_flag_values():
    with pytest.raises(SystemExit) as exc:
        main(["squeeze", "--depth-range", "5:1:1", "--eta", "0.2", "--out", "x"])
    assert exc.value.code == 2


@pytest.mark.parametrize("command", ["pn", "wigner", "steady-state"])
@pytest.mark.parametrize("suffix", ["csv", "json"])
def test_repeat_runs_identical(tmp_path, command, suffix):
    args = [command, "--depth", "15", "--eta", "0.75", "--rabi-ratio", "0.9", "--points", "15"]
    _, a = run(tmp_path, *args, name=f"a.{suffix}")
    _, b = run(tmp_path, *args, name=f"b.{suffix}")
    assert a.read_bytes() == b.read_bytes()
    # atomic writes leave no temporary files behind
    assert sorted(p.name for p in tmp_path.iterdir()) == sorted([a.name, b.name])


def test_json_round_trip_exact(tmp_path):
    _, out = run(tmp_path, "steady-state", "--depth", "75", "--eta", "0.22", "--rabi-ratio", "0.85", name="s.json")
    cols, rows, meta = read_table(out)
    st = solve_steady_state(TrapParams(75), DriveParams(0.22, 0.85))
    assert [complex(r[1], r[2]) for r in rows] == list(st.amps)
    assert meta["chi"] == [st.chi.real, st.chi.imag]


def test_csv_round_trip_exact(tmp_path):
    rng = np.random.default_rng(3)
    values = list(rng.normal(size=50) * 10.0 ** rng.integers(-300, 300, size=50))
    path = tmp_path / "t.csv"
    path.write_text(render_csv(["x"], [[v] for v in values]))
    assert [r[0] for r in read_table(path)[1]] == values


def test_json_rejects_nothing_lossy():
    text = render_json("x", {"a": float("nan"), "z": 1 + 2j}, ["v"], [[0.1], [float("nan")]])
    doc = json.loads(text)
    assert doc["meta"] == {"a": None, "z": [1.0, 2.0]}
    assert doc["rows"] == [[0.1], [None]]


def test_module_entry_point(tmp_path):
    out = tmp_path / "spectrum.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "finitetrap", "spectrum", "--depth", "7", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "n_max=3" in proc.stdout
    assert len(out.read_text().splitlines()) == 5
