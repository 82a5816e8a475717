import csv
import json

import numpy as np

from holoqutrit.harness import output, plotting, scenarios
from holoqutrit.harness.config import load_config


def _result():
    cfg = load_config("fig5")
    cal = scenarios.calibrate(cfg)
    return cfg, cal, scenarios.run_hadamard_phase_sweep(cfg, cal, grid=[0.0, 1.0, 2.0])


def test_csv_manifest_and_figures(tmp_path):
    cfg, cal, res = _result()
    files = output.write_result(res, tmp_path)
    with open(tmp_path / "fig5.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["phi01_rad", "p0", "p1", "p2", "p0_mid", "p1_mid", "p2_mid",
                       "p0_closed_form", "fit_residual"]
    assert len(rows) == 4
    assert float(rows[2][1]) == res.final[1, 0]
    assert (tmp_path / "trajectories" / "fig5_pt002.csv").exists()

    files += plotting.plot_result(res, tmp_path)
    assert (tmp_path / "fig5.png").stat().st_size > 0
    assert (tmp_path / "fig5_time_evolution.png").exists()

    man_path = output.write_manifest(tmp_path / "manifest.json", cfg, res, cal, files)
    man = json.loads(open(man_path).read())
    assert man["code_version"] == "0.1.0"
    assert man["grid"]["values"] == [0.0, 1.0, 2.0]
    assert "fig5.csv" in man["files"]
    assert man["calibrations"]["ladder_pi"] is None
    assert man["integrator"]["dt_s"] == cfg.dt


def test_manifest_is_deterministic(tmp_path):
    cfg, cal, res = _result()
    a = output.write_manifest(tmp_path / "a.json", cfg, res, cal)
    b = output.write_manifest(tmp_path / "b.json", cfg, res, cal)
    assert open(a).read() == open(b).read()


def test_write_table(tmp_path):
    output.write_table(["x", "y"], [(1, 2.5), (np.float64(3), 4)], tmp_path / "t.csv")
    assert (tmp_path / "t.csv").read_text().splitlines() == ["x,y", "1.0,2.5", "3.0,4.0"]
