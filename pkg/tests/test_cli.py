import json
import math

import pytest

from holoqutrit.harness import cli


def test_calibrate_prints_rad_per_ns(capsys):
    assert cli.main(["calibrate", "--td-ns", "6.5"]) == 0
    assert "0.4484" in capsys.readouterr().out


def test_gate_command(capsys):
    assert cli.main(["gate", "--theta", str(math.pi / 2), "--phi", "0"]) == 0
    out = capsys.readouterr().out
    assert "involution OK" in out
    assert cli.main(["gate", "--name", "HADAMARD", "--simulate"]) == 0
    assert "Frobenius error" in capsys.readouterr().out


def test_config_command(capsys):
    assert cli.main(["config"]) == 0
    assert "td_hol_ns: 6.5" in capsys.readouterr().out


def test_check_command(capsys):
    assert cli.main(["check"]) == 0
    assert "7/7 checks passed" in capsys.readouterr().out


def test_sweep_writes_outputs(tmp_path, capsys):
    out = tmp_path / "run"
    rc = cli.main(["sweep", "fig4", "--points", "3", "--out", str(out)])
    assert rc == 0
    for name in ("fig4.csv", "fig4.png", "fig4_time_evolution.png", "manifest.json"):
        assert (out / name).exists()
    man = json.loads((out / "manifest.json").read_text())
    assert man["invariant_breaches"] == []
    assert man["config"]["sweep"]["points"] == 3


def test_sweep_decoherence_no_figures(tmp_path):
    out = tmp_path / "run"
    rc = cli.main(["sweep", "fig5", "--points", "2", "--decoherence", "on", "--out", str(out),
                   "--no-figures", "--no-trajectories"])
    assert rc == 0
    assert not (out / "fig5.png").exists() and not (out / "trajectories").exists()
    man = json.loads((out / "manifest.json").read_text())
    assert man["config"]["simulation"]["decoherence"] is True


def test_exit_codes(tmp_path, capsys):
    assert cli.main(["sweep", "fig9", "--out", str(tmp_path)]) == cli.EXIT_UNKNOWN_SCENARIO
    bad = tmp_path / "bad.yaml"
    bad.write_text("device:\n  f01_ghz: 9.0\n")
    assert cli.main(["sweep", "fig4", "--config", str(bad), "--out", str(tmp_path)]) == \
        cli.EXIT_BAD_CONFIG
    with pytest.raises(SystemExit) as info:
        cli.main(["sweep"])
    assert info.value.code == 2


def test_calibration_failure_exit_code(tmp_path, monkeypatch):
    from holoqutrit import twophoton

    def fail(*a, **k):
        raise twophoton.CalibrationError("no transfer", sweep=[(1e8, 0.1)])

    monkeypatch.setattr(twophoton, "calibrate_two_photon", fail)
    rc = cli.main(["calibrate", "--two-photon", "--cache", str(tmp_path / "c.json")])
    assert rc == cli.EXIT_CALIBRATION


def test_invariant_breach_exit_code(monkeypatch, capsys):
    from holoqutrit.harness import checks
    monkeypatch.setattr(checks, "CHECKS", (lambda: checks.CheckResult("x", False, "bad"),))
    assert cli.main(["check"]) == cli.EXIT_INVARIANT


def test_sweep_spec_example_row_count(tmp_path):
    out = tmp_path / "run"
    assert cli.main(["sweep", "fig4", "--points", "21", "--decoherence", "off", "--out", str(out),
                     "--no-figures"]) == 0
    assert len((out / "fig4.csv").read_text().splitlines()) == 22
    assert len(list((out / "trajectories").glob("fig4_pt*.csv"))) == 21


def test_identical_config_gives_identical_csv(tmp_path):
    outs = []
    for name, workers in (("a", "1"), ("b", "2")):
        out = tmp_path / name
        assert cli.main(["sweep", "fig7", "--points", "4", "--out", str(out), "--no-figures",
                         "--workers", workers]) == 0
        outs.append((out / "fig7.csv").read_bytes())
    assert outs[0] == outs[1]


def test_dt_flag_reaches_manifest(tmp_path):
    out = tmp_path / "run"
    assert cli.main(["sweep", "fig4", "--points", "2", "--dt-ps", "2", "--out", str(out),
                     "--no-figures", "--no-trajectories"]) == 0
    man = json.loads((out / "manifest.json").read_text())
    assert man["integrator"]["dt_s"] == pytest.approx(2e-12)
