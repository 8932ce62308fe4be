import csv
import io
import json

import numpy as np
import pytest

from catcorr import cli, statedyn, sweep
from catcorr.statedyn import SystemParams

HEADER = "gamma_t,I_cc,C_cc,D_cc,branch_cc,I_rr,C_rr,D_rr,branch_rr"
I_DFS = 0.278071905112637652129680570511


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr().out


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_csv_header_and_rows(capsys):
    code, out = run(["sweep", "--nbar", "3", "--p", "0.2", "--points", "11", "--tmax", "5"], capsys)
    assert code == 0
    assert out.splitlines()[0] == HEADER
    rows = read_csv(out)
    assert len(rows) == 11
    assert float(rows[-1]["gamma_t"]) == 5.0


def test_sweep_identity_per_row(capsys):
    _, out = run(["sweep", "--nbar", "10", "--p", "0.35", "--points", "200"], capsys)
    rows = sweep.run_sweep(sweep.SweepConfig(SystemParams(10, 0.35), 15, 200))
    for row in rows:
        for s in ("cc", "rr"):
            assert abs(row[f"I_{s}"] - row[f"C_{s}"] - row[f"D_{s}"]) < 1e-12
            assert 0 <= row[f"D_{s}"] <= row[f"I_{s}"]


def test_sweep_partition_subset_has_null_columns(capsys):
    _, out = run(["sweep", "--nbar", "3", "--p", "0.2", "--points", "5", "--partitions", "cc"], capsys)
    for row in read_csv(out):
        assert row["I_rr"] == "" and row["branch_rr"] == ""
        assert row["I_cc"] != ""


def test_sweep_json_matches_csv(capsys):
    args = ["sweep", "--nbar", "3", "--p", "0.2", "--points", "7", "--partitions", "rr"]
    _, out_csv = run(args, capsys)
    _, out_json = run(args + ["--format", "json"], capsys)
    data = json.loads(out_json)
    assert list(data[0]) == HEADER.split(",")
    for jrow, crow in zip(data, read_csv(out_csv)):
        assert jrow["I_cc"] is None
        assert jrow["I_rr"] == pytest.approx(float(crow["I_rr"]), rel=1e-12)


def test_logstart_grid(capsys):
    _, out = run(["sweep", "--nbar", "3", "--p", "0.2", "--points", "10", "--grid", "logstart"], capsys)
    t = [float(r["gamma_t"]) for r in read_csv(out)]
    assert len(t) == 11
    assert t[0] == 0.0 and t[1] == pytest.approx(1e-6)
    assert t[-1] == pytest.approx(15.0)


def test_sweep_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli.main(["sweep", "--nbar", "7", "--p", "0.3", "--points", "50", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_twelve_significant_digits(capsys):
    _, out = run(["sweep", "--nbar", "100", "--p", "0.2", "--points", "2", "--tmax", "50"], capsys)
    row = read_csv(out)[0]
    assert row["I_cc"] == "1.27807190511"


@pytest.mark.parametrize("argv", [
    ["sweep", "--nbar", "-1", "--p", "0.2"],
    ["sweep", "--nbar", "1", "--p", "2"],
    ["sweep", "--p", "0.2"],
    ["sweep", "--nbar", "1", "--p", "0.2", "--points", "1"],
    ["sweep", "--nbar", "1", "--p", "0.2", "--partitions", "cc,xx"],
    ["sweep", "--nbar", "1", "--p", "0.2", "--grid", "cubic"],
    ["figure", "fig9"],
    ["validate", "--cases", "0"],
])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"nbar": 3, "p": 0.2, "points": 4, "tmax": 2.0}))
    _, out = run(["sweep", "--config", str(cfg)], capsys)
    rows = read_csv(out)
    assert len(rows) == 4 and float(rows[-1]["gamma_t"]) == 2.0
    _, out = run(["sweep", "--config", str(cfg), "--points", "6"], capsys)
    assert len(read_csv(out)) == 6


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"nbar": 3, "p": 0.2, "colour": "red"}))
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep", "--config", str(cfg)])
    assert exc.value.code == 2


def test_transitions_report(capsys):
    code, out = run(["transitions", "--nbar", "100", "--p", "0.2"], capsys)
    assert code == 0
    rep = json.loads(out)
    for key in ("t_c_analytic", "t_r_analytic", "dfs_duration_analytic", "t_c_detected",
                "t_r_detected", "dfs_window_detected", "complementarity_residual"):
        assert key in rep
    assert rep["t_c_analytic"] == pytest.approx(0.00127788020064, rel=1e-10)
    assert rep["t_r_analytic"] == pytest.approx(6.6631915392, rel=1e-10)
    assert abs(rep["t_c_detected"] - rep["t_c_analytic"]) < 1e-9
    assert abs(rep["t_r_detected"] - rep["t_r_analytic"]) < 1e-9
    assert abs(rep["complementarity_residual"]) < 1e-12
    start, end = rep["dfs_window_detected"]
    assert abs((end - start) - rep["dfs_duration_analytic"]) < 0.25 * rep["dfs_duration_analytic"]


def test_transitions_report_without_dfs(capsys):
    _, out = run(["transitions", "--nbar", "1", "--p", "0.2"], capsys)
    rep = json.loads(out)
    assert rep["dfs_duration_analytic"] is None
    assert rep["dfs_window_detected"] is None


def test_transitions_report_p09(capsys):
    _, out = run(["transitions", "--nbar", "100", "--p", "0.9"], capsys)
    rep = json.loads(out)
    assert rep["t_c_analytic"] == pytest.approx(0.000558014539444, rel=1e-10)
    assert abs(rep["complementarity_residual"]) < 1e-12


def test_transitions_balanced_mixture_has_note(capsys):
    code, out = run(["transitions", "--nbar", "10", "--p", "0.5"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["t_c_analytic"] is None and rep["t_r_analytic"] is None
    assert rep["t_c_detected"] is None and rep["t_r_detected"] is None
    assert "1/2" in rep["note"]


def test_validate_passes_and_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["validate", "--seed", "42", "--cases", "30", "--out", str(a)]) == 0
    assert cli.main(["validate", "--seed", "42", "--cases", "30", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["passed_cases"] == 30 and rep["failures"] == []


def test_validate_catches_coherence_sign_error(monkeypatch, capsys):
    original = statedyn.xstate_from_amplitudes

    def flipped(params, own_sq, other_sq):
        rho = original(params, own_sq, other_sq)
        return statedyn.TwoQubitXState(rho.d11, rho.d22, rho.d33, rho.d44, -rho.o14, rho.o23)

    monkeypatch.setattr(statedyn, "xstate_from_amplitudes", flipped)
    code, out = run(["validate", "--seed", "1", "--cases", "5"], capsys)
    assert code == 1
    rep = json.loads(out)
    assert rep["status"] == "fail"
    assert any(f["check"] == "symmetry" for f in rep["failures"])


def test_validate_catches_broken_positivity(monkeypatch, capsys):
    original = statedyn.xstate_from_amplitudes

    def inflated(params, own_sq, other_sq):
        rho = original(params, own_sq, other_sq)
        return statedyn.TwoQubitXState(rho.d11, rho.d22, rho.d33, rho.d44, rho.o14, rho.o23 * 1.5)

    monkeypatch.setattr(statedyn, "xstate_from_amplitudes", inflated)
    code, out = run(["validate", "--seed", "1", "--cases", "5"], capsys)
    assert code == 1
    assert any(f["check"] == "positivity" for f in json.loads(out)["failures"])


def test_figure_fig1_full_transfer(tmp_path, capsys):
    assert cli.main(["figure", "fig1", "--out", str(tmp_path)]) == 0
    files = sorted(tmp_path.glob("fig1_*.csv"))
    assert [f.name for f in files] == [
        "fig1_nbar1.csv", "fig1_nbar10.csv", "fig1_nbar100.csv", "fig1_nbar3.csv"]
    for f in files:
        rows = read_csv(f.read_text())
        assert abs(float(rows[0]["I_cc"]) - float(rows[-1]["I_rr"])) < 1e-6


def test_figure_fig3_dfs_rows(tmp_path):
    assert cli.main(["figure", "fig3", "--out", str(tmp_path)]) == 0
    params = SystemParams(100, 0.2)
    rows = read_csv((tmp_path / "fig3_nbar100.csv").read_text())
    from catcorr.transitions import detect_dfs_window
    traj = sweep.trajectory(params, "cavities", [float(r["gamma_t"]) for r in rows])
    start, end = detect_dfs_window(traj, params)
    inside = [r for r in rows if start <= float(r["gamma_t"]) <= end]
    assert len(inside) > 100
    for r in inside:
        assert float(r["D_cc"]) < 1e-3
        assert abs(float(r["C_cc"]) - I_DFS) < 1e-2


def test_figure_fig2_elements(tmp_path):
    assert cli.main(["figure", "fig2", "--out", str(tmp_path)]) == 0
    early = read_csv((tmp_path / "fig2_early.csv").read_text())
    late = read_csv((tmp_path / "fig2_late.csv").read_text())
    assert float(early[-1]["gamma_t"]) == pytest.approx(0.1)
    assert float(late[0]["gamma_t"]) == pytest.approx(2.0)
    assert float(late[0]["cc_d22"]) == pytest.approx(0.25, abs=1e-3)
    assert float(early[0]["rr_d11"]) == pytest.approx(1.0)


def test_figure_fig4_grid_and_report(tmp_path):
    assert cli.main(["figure", "fig4", "--out", str(tmp_path), "--format", "json"]) == 0
    rows = json.loads((tmp_path / "fig4_nbar100.json").read_text())
    assert rows[0]["gamma_t"] == 0.0 and rows[1]["gamma_t"] == pytest.approx(1e-6)
    rep = json.loads((tmp_path / "fig4_transitions.json").read_text())
    assert rep["t_c_detected"] == pytest.approx(0.00127788020064, rel=1e-8)
    early = [r for r in rows if r["gamma_t"] < rep["t_c_detected"]]
    late = [r for r in rows if rep["t_c_detected"] < r["gamma_t"] < 1]
    assert {r["branch_cc"] for r in early} <= {"Z", "ambiguous"}
    assert {r["branch_cc"] for r in late} == {"X"}


def test_time_grid_kinds():
    assert np.array_equal(sweep.time_grid(2.0, 3, "linear"), [0.0, 1.0, 2.0])
    g = sweep.time_grid(1.0, 4, "log-dense-start")
    assert g[0] == 0.0 and g[1] == pytest.approx(1e-6) and len(g) == 5
    with pytest.raises(ValueError):
        sweep.time_grid(1.0, 4, "cubic")
