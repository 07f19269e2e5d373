import csv
import io
import json
import subprocess
import sys

import pytest

from pinching_outage.cli import CSV_HEADER, FIGURES, ConfigError, SweepConfig, cmd_sweep, main, reproduce_table


def run(*args):
    return subprocess.run([sys.executable, "-m", "pinching_outage", *args],
                          capture_output=True, text=True)


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_default_u1_zero_onsets(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--out", str(out)]) == 0
    table = rows(out.read_text())
    assert tuple(table[0]) == CSV_HEADER
    onset = {}
    for r in table:
        key = (r["system"], r["scheme"])
        if r["user"] == "1" and r["op_analytic"] == "0" and key not in onset:
            onset[key] = float(r["snr_db"])
    expected = {("CASS", "OMA"): 81, ("PASS", "OMA"): 78, ("CASS", "NOMA"): 86, ("PASS", "NOMA"): 83}
    for key, db in expected.items():
        assert abs(onset[key] - db) <= 1
    # once zero, stays zero
    for r in table:
        if r["user"] == "1" and float(r["snr_db"]) >= onset[r["system"], r["scheme"]]:
            assert r["op_analytic"] == "0"


def test_sweep_row_order_and_cells(tmp_path):
    text = cmd_sweep(SweepConfig(60, 62, 1, output_path=str(tmp_path / "s.csv")))
    table = rows(text)
    keys = [(float(r["snr_db"]), r["system"], r["scheme"], r["user"]) for r in table]
    assert keys == sorted(keys)
    assert len(table) == 3 * 8
    for r in table:
        assert (r["op_asymptotic"] == "") == (r["user"] == "1")
        assert r["op_mc"] == r["mc_stderr"] == r["mc_trials"] == ""


def test_sweep_precision():
    table = rows(cmd_sweep(SweepConfig(90, 90, 1, systems=("PASS",), users=(2,), output_path=None)))
    digits = table[0]["op_analytic"].replace("0.", "").lstrip("0").replace(".", "")
    assert len(digits.split("e")[0]) >= 12


def test_sweep_with_monte_carlo_columns(capsys):
    main(["sweep", "--snr-start-db", "70", "--snr-stop-db", "70", "--trials", "2000", "--seed", "4"])
    table = rows(capsys.readouterr().out)
    assert all(r["mc_trials"] == "2000" for r in table)
    assert all(0 <= float(r["op_mc"]) <= 1 for r in table)


def test_empty_system_set_is_usage_error(capsys):
    assert main(["sweep", "--system", ""]) == 1
    assert "systems" in capsys.readouterr().err


@pytest.mark.parametrize("args", [
    ["sweep", "--snr-step-db", "0"],
    ["sweep", "--snr-start-db", "100", "--snr-stop-db", "90"],
    ["sweep", "--user", "3"],
    ["sweep", "--system", "DAS"],
    ["sweep", "--quad-nodes", "many"],
    ["sweep", "--side-length", "-1"],
    ["sweep", "--no-such-flag"],
    ["reproduce", "fig9"],
    ["validate", "--checks", "everything"],
])
def test_usage_errors_exit_1(args):
    assert main(args) == 1


def test_infeasible_scheme_exit_code_distinct_from_io(tmp_path):
    assert main(["sweep", "--alpha1", "0.45", "--rate", "2", "--scheme", "NOMA"]) == 1
    assert main(["sweep", "--out", str(tmp_path / "missing" / "x.csv")]) == 3


def test_infeasible_split_ignored_when_noma_not_requested(capsys):
    assert main(["sweep", "--alpha1", "0.45", "--rate", "2", "--scheme", "OMA",
                 "--snr-start-db", "60", "--snr-stop-db", "60"]) == 0


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# study\nside-length = 30\nsnr_start_db = 70\nsnr-stop-db = 71\nsystem = PASS\n")
    assert main(["sweep", "--config", str(cfg), "--snr-stop-db", "70"]) == 0
    table = rows(capsys.readouterr().out)
    assert {r["snr_db"] for r in table} == {"70"}
    assert {r["system"] for r in table} == {"PASS"}
    # D = 30 moves the PASS/OMA U1 zero point to ~81.7 dB, so U1 is still in outage at 70 dB
    assert float(next(r for r in table if r["user"] == "1")["op_analytic"]) > 0


def test_bad_config_file(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert main(["sweep", "--config", str(cfg)]) == 1
    cfg.write_text("just words\n")
    assert main(["sweep", "--config", str(cfg)]) == 1
    assert main(["sweep", "--config", str(tmp_path / "none.cfg")]) == 1


def test_sweep_deterministic_across_workers(tmp_path):
    paths = []
    for i, workers in enumerate(("1", "1", "4")):
        p = tmp_path / f"s{i}.csv"
        assert main(["sweep", "--snr-start-db", "70", "--snr-stop-db", "90", "--snr-step-db", "5",
                     "--trials", "3000", "--seed", "8", "--workers", workers, "--out", str(p)]) == 0
        paths.append(p.read_bytes())
    assert paths[0] == paths[1] == paths[2]


def test_validate_pass_and_fail_exit_codes(tmp_path):
    out = tmp_path / "v.json"
    assert main(["validate", "--checks", "conformance", "--out", str(out)]) == 0
    summary = json.loads(out.read_text())
    assert summary["passed"] and summary["failed"] == []
    assert all({"name", "statistic", "threshold", "passed"} <= set(c) for c in summary["checks"])


def test_validate_failure_names_check(tmp_path):
    out = tmp_path / "v.json"
    proc = run("validate", "--checks", "quadrature", "--out", str(out))
    assert proc.returncode == 2
    summary = json.loads(out.read_text())
    assert not summary["passed"]
    assert "FAILED: " + summary["failed"][0] in proc.stderr


def test_module_entry_point_help():
    proc = run("--help")
    assert proc.returncode == 0
    assert "reproduce" in proc.stdout


def test_reproduce_fig2_curves():
    header, table = reproduce_table("fig2", SweepConfig(mc_trials=0), (60, 70, 5))
    curves = [h for h in header[2:] if not h.endswith(("_mc", "_stderr"))]
    assert len(curves) == 6
    assert sum(h.endswith("_asymptotic") for h in curves) == 2
    assert len(table) == 3


def test_reproduce_fig4_noma_u1_above_oma():
    header, table = reproduce_table("fig4", SweepConfig(mc_trials=0))
    i_noma, i_oma = header.index("pass_noma_u1_analytic"), header.index("pass_oma_u1_analytic")
    for r in table:
        assert float(r[i_noma]) >= float(r[i_oma])
    assert {r[1] for r in table} == {"20"}


def test_reproduce_fig6_gap_positive_inverse_snr():
    header, table = reproduce_table("fig6", SweepConfig())
    j = header.index("delta2_asymptotic")
    for D in ("20", "30"):
        part = [r for r in table if r[1] == D]
        assert len(part) == 61
        snr = [float(r[0]) for r in part]
        gap = [float(r[j]) for r in part]
        assert all(g > 0 for g in gap)
        # 10 dB apart -> ten times smaller
        assert gap[0] / gap[10] == pytest.approx(10.0, rel=1e-12)
        assert snr[10] - snr[0] == 10


@pytest.mark.parametrize("fig", ["fig5", "fig7"])
def test_reproduce_u1_gap_figures(fig):
    header, table = reproduce_table(fig, SweepConfig())
    j = header.index("delta1")
    assert all(float(r[j]) >= 0 for r in table)
    assert {r[1] for r in table} == {"20", "30"}


def test_reproduce_chart(tmp_path):
    pytest.importorskip("matplotlib")
    svg = tmp_path / "f.svg"
    csv_path = tmp_path / "f.csv"
    assert main(["reproduce", "fig3", "--trials", "500", "--snr-step-db", "10",
                 "--out", str(csv_path), "--chart", str(svg)]) == 0
    assert svg.read_text().lstrip().startswith("<?xml")
    assert "cass_noma_u2_mc" in csv_path.read_text().splitlines()[0]


def test_every_figure_has_curves():
    for name, fig in FIGURES.items():
        assert fig.curves, name


def test_sweep_config_validation():
    with pytest.raises(ConfigError):
        SweepConfig(users=())
    with pytest.raises(ConfigError):
        SweepConfig(mc_trials=-1)
