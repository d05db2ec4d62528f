import csv
import io
import json
import math
import subprocess
import sys

import pytest

from analog_search.cli import fmt_float, main

B30 = "0.5235987755982988"
PI = math.pi


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_fmt_float():
    assert fmt_float(0.0) == "0"
    assert fmt_float(3.0) == "3"
    assert fmt_float(0.1) == "0.1"
    x = 1.1071487177940904
    assert float(fmt_float(x)) == x
    assert fmt_float(math.nan) == "nan"


def test_time_farhi_gutmann(capsys):
    code, out, _ = run(capsys, "time", "--efg", "1", "--ef", "0", "--phi", "0", "--beta", B30, "--u", "0")
    assert code == 0
    obj = json.loads(out)
    assert obj["t_first"] == pytest.approx(PI, abs=1e-12)
    assert set(obj) >= {"t_first", "period", "e_p", "e_o", "alpha", "gamma", "x", "p_floor", "degenerate"}
    assert obj["degenerate"] is False
    assert obj["p_floor"] == pytest.approx(0.25)


def test_time_spectral(capsys):
    code, out, _ = run(capsys, "time", "--ep", "1", "--eo", "1", "--alpha", "0", "--beta", B30, "--u", "0")
    assert code == 0
    assert json.loads(out)["t_first"] == pytest.approx(PI / 2, abs=1e-15)


def test_time_zero_gap(capsys):
    code, out, err = run(capsys, "time", "--efg", "0", "--ef", "0", "--phi", "0", "--beta", "0.3", "--u", "0")
    assert code == 2
    assert out == ""
    assert len(err.strip().splitlines()) == 1 and "E_o = 0" in err


def test_time_degenerate_flag(capsys):
    code, out, _ = run(capsys, "time", "--ep", "1", "--eo", "1", "--alpha", str(PI / 2), "--beta", str(PI / 2))
    assert code == 0
    obj = json.loads(out)
    assert obj["degenerate"] is True and obj["t_first"] == 0


def test_angles_are_normalized_and_echoed(capsys):
    code, out, _ = run(capsys, "time", "--efg", "1", "--ef", "1", "--phi", str(PI / 2 + 2 * PI), "--beta", B30)
    obj = json.loads(out)
    assert obj["inputs"]["phi"] == pytest.approx(PI / 2)
    assert obj["t_first"] == pytest.approx(1.10714871779409, abs=1e-12)


@pytest.mark.parametrize("argv", [
    ["time", "--efg", "1", "--ef", "1", "--ep", "1", "--beta", "0.3"],
    ["time", "--efg", "1", "--ef", "1"],
    ["time", "--efg", "1", "--beta", "0.3"],
    ["time", "--efg", "1", "--ef", "-1", "--beta", "0.3"],
    ["time", "--efg", "1", "--ef", "1", "--beta", "2.0"],
    ["time", "--efg", "nan", "--ef", "1", "--beta", "0.3"],
    ["trace", "--efg", "1", "--ef", "1", "--beta", "0.3", "--samples", "1"],
    ["trace", "--efg", "1", "--ef", "1", "--beta", "0.3", "--t-max", "-1"],
    ["trace", "--efg", "1", "--ef", "1", "--beta", "0.3", "--numeric"],
    ["sweep", "--efg", "1", "--ef", "1", "--beta", "0.3", "--sweep", "phi=0:1"],
    ["sweep", "--efg", "1", "--ef", "1", "--beta", "0.3", "--sweep", "phi=0:1:1"],
    ["sweep", "--efg", "1", "--ef", "1", "--beta", "0.3"],
    ["sweep", "--efg", "1", "--ef", "1", "--beta", "0.3", "--sweep", "zeta=0:1:3"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("analog-search: error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["time", "--format", "xml"])
    assert exc.value.code == 2


def test_convert_round_trip(capsys):
    _, out, _ = run(capsys, "convert", "--efg", "1", "--ef", "1", "--phi", str(PI / 2), "--beta", B30)
    obj = json.loads(out)
    assert (obj["ep"], obj["eo"]) == pytest.approx((1, 1))
    _, out, _ = run(capsys, "convert", "--ep", str(obj["ep"]), "--eo", str(obj["eo"]),
                    "--alpha", str(obj["alpha"]), "--beta", B30)
    back = json.loads(out)
    assert (back["efg"], back["ef"], back["phi"]) == pytest.approx((1, 1, PI / 2), abs=1e-12)


def test_convert_csv(capsys):
    _, out, _ = run(capsys, "--format", "csv", "convert", "--efg", "1", "--ef", "0", "--beta", B30)
    (row,) = rows(out)
    assert float(row["eo"]) == pytest.approx(0.5) and row["degenerate"] == "false"


def test_trace_output(capsys):
    argv = ["trace", "--ep", "1", "--eo", "1", "--alpha", "0", "--beta", B30, "--t-max", str(2 * PI), "--samples", "9"]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    lines = out.split("\n")
    assert lines[0] == "t,p_w,re_a_w,im_a_w,re_a_perp,im_a_perp"
    assert lines[1].startswith("0,")
    assert out.endswith("\n") and "\r" not in out
    data = rows(out)
    assert len(data) == 9
    assert float(data[0]["p_w"]) == pytest.approx(0.25, abs=1e-15)
    assert float(data[2]["p_w"]) >= 1 - 1e-9
    _, again, _ = run(capsys, *argv)
    assert again == out


def test_trace_numeric_agrees(capsys):
    base = ["trace", "--efg", "0", "--ef", "1", "--phi", str(PI / 2), "--beta", B30, "--t-max", "3", "--samples", "31"]
    _, exact, _ = run(capsys, *base)
    _, num, _ = run(capsys, *base, "--numeric", "--dt", "1e-3")
    for a, b in zip(rows(exact), rows(num)):
        for key in ("p_w", "re_a_w", "im_a_w", "re_a_perp", "im_a_perp"):
            assert abs(float(a[key]) - float(b[key])) < 1e-8


def test_sweep_phi(capsys):
    code, out, _ = run(capsys, "sweep", "--efg", "1", "--ef", "1", "--beta", B30, "--u", "0",
                       "--sweep", f"phi={-PI + 2 * PI / 32}:{PI}:32")
    assert code == 0
    assert out.splitlines()[0] == "phi,t_first,delta_max(p=0.99),p_at_t_first"
    data = rows(out)
    assert len(data) == 32
    assert all(abs(float(r["p_at_t_first"]) - 1) <= 1e-9 for r in data)
    half_pi = [r for r in data if abs(float(r["phi"]) - PI / 2) < 1e-12]
    assert len(half_pi) == 1 and float(half_pi[0]["t_first"]) == pytest.approx(1.10714871779409, abs=1e-12)
    assert len({r["t_first"] for r in data}) > 10


def test_sweep_energy_scaling(capsys):
    _, out, _ = run(capsys, "sweep", "--ep", "0", "--alpha", "0.7", "--beta", B30, "--sweep", "eo=1:2:2")
    r1, r2 = rows(out)
    assert float(r2["t_first"]) == pytest.approx(float(r1["t_first"]) / 2, rel=1e-15)
    assert float(r2["delta_max(p=0.99)"]) == pytest.approx(float(r1["delta_max(p=0.99)"]) / 2, rel=1e-15)


def test_sweep_two_parameters_and_degenerate(capsys):
    _, out, _ = run(capsys, "sweep", "--efg", "0", "--ef", "0", "--beta", "0.3",
                    "--sweep", "efg=0:1:2", "--sweep", "beta=0.3:0.6:3")
    data = rows(out)
    assert [float(r["efg"]) for r in data] == [0, 0, 0, 1, 1, 1]
    assert [float(r["beta"]) for r in data] == pytest.approx([0.3, 0.45, 0.6] * 2)
    assert data[0]["t_first"] == "nan"
    assert all(abs(float(r["p_at_t_first"]) - 1) < 1e-9 for r in data[3:])


def test_verify_default(capsys):
    code, out, err = run(capsys, "verify")
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and rep["seed"] == 0 and rep["draws"] == 200
    assert "all checks passed" in err


def test_verify_full_space_and_seed(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "1", "--draws", "50", "--full-space", "--n", "8", "--m", "2")
    assert code == 0
    rep = json.loads(out)
    full = [c for c in rep["checks"] if c["name"].startswith("full space")]
    assert full and full[0]["max_error"] <= 1e-6
    _, again, _ = run(capsys, "verify", "--seed", "1", "--draws", "50", "--full-space", "--n", "8", "--m", "2")
    assert again == out


def test_verify_failure_exit_1(capsys, monkeypatch):
    from analog_search import cli
    from analog_search.verify import CheckResult

    monkeypatch.setattr(cli, "run_checks", lambda *a: [CheckResult("forced", False, 1.0, 0.0, 1)])
    code, out, err = run(capsys, "verify")
    assert code == 1 and "FAILED" in err
    assert json.loads(out)["passed"] is False


def test_out_path(tmp_path, capsys):
    target = tmp_path / "t.json"
    code, out, _ = run(capsys, "time", "--efg", "1", "--ef", "0", "--beta", B30, "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["t_first"] == pytest.approx(PI)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "analog_search", "time", "--ep", "1", "--eo", "1", "--beta", B30],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["t_first"] == pytest.approx(PI / 2)


@pytest.mark.parametrize("command", ["trace", "sweep"])
def test_streaming_commands_reject_json(command, capsys):
    argv = ["--format", "json", command, "--efg", "1", "--ef", "1", "--beta", "0.5"]
    if command == "sweep":
        argv += ["--sweep", "phi=0:1:3"]
    assert main(argv) == 2
    assert "CSV only" in capsys.readouterr().err
