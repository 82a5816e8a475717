import json
import math
from dataclasses import asdict

import numpy as np
import pytest
from oracles import fig4_law, fig5_law, fig7_law

from holoqutrit import twophoton
from holoqutrit.harness import scenarios
from holoqutrit.harness.config import load_config


def cfg_for(name, **sim):
    return load_config(name, overrides={"simulation": sim} if sim else None)


def test_population_sweep_follows_law():
    res = scenarios.run_population_sweep(cfg_for("fig4"), grid=[0.0, 0.3, 0.9])
    assert np.allclose(res.final[:, 2], fig4_law([0.0, 0.3, 0.9]), atol=1e-9)
    assert res.fit["max_abs_residual"] < 1e-9
    assert np.allclose(res.final[:, 1], 0, atol=1e-12)


def test_phase_independence():
    res = scenarios.run_phase_independence_check(cfg_for("phase-independence"),
                                                 grid=np.linspace(0, 2 * math.pi, 4, endpoint=False))
    assert res.fit["max_population_spread"] < 1e-9
    assert np.ptp(np.hypot(res.extras["rho02_re"], res.extras["rho02_im"])) < 1e-9


def test_fig5_ideal_closed_form_and_mid_populations():
    grid = np.linspace(0, 2 * math.pi, 5, endpoint=False)
    res = scenarios.run_hadamard_phase_sweep(cfg_for("fig5"), grid=grid)
    assert np.allclose(res.final[:, 0], fig5_law(grid), atol=1e-9)
    assert np.allclose(res.extras["p0_mid"], 0.5, atol=1e-9)
    assert res.fit["amplitude"] == pytest.approx(0.5, abs=1e-9)


def test_fig7_ideal():
    grid = np.linspace(0, math.pi, 5)
    res = scenarios.run_hadamard_on_superposition(cfg_for("fig7"), grid=grid)
    assert np.allclose(res.final[:, 2], fig7_law(grid), atol=1e-9)


def test_fig6_ideal_inversion():
    res = scenarios.run_not_on_prepared(cfg_for("fig6"), grid=[0.0, 0.5, 1.0])
    assert res.fit["max_abs_residual_p0"] < 1e-9
    assert res.extras["p2_i"][-1] == pytest.approx(1.0, abs=1e-9)
    assert res.extras["p2_i"][1] == pytest.approx(math.sin(math.pi * 0.25 / 2) ** 2, abs=1e-9)


def test_decoherence_reduces_contrast():
    res = scenarios.run_hadamard_phase_sweep(cfg_for("fig5", decoherence=True),
                                             grid=np.linspace(0, 2 * math.pi, 4, endpoint=False))
    assert res.fit["amplitude"] < 0.5
    assert np.all(res.final[:, 1] > 0)
    assert all(r.monitors["trace_error"] < 1e-8 for r in res.records)


def test_workers_give_identical_results():
    grid = [0.2, 0.6]
    serial = scenarios.run_population_sweep(cfg_for("fig4"), grid=grid)
    parallel = scenarios.run_population_sweep(cfg_for("fig4", workers=2), grid=grid)
    assert np.array_equal(serial.final, parallel.final)


def test_calibration_cache_roundtrip(tmp_path, monkeypatch, ladder_cfg, ladder_cal):
    path = tmp_path / "cache.json"
    key = scenarios._cache_key(ladder_cfg)
    path.write_text(json.dumps({key: {"pi": asdict(ladder_cal.ladder_pi),
                                      "pi/2": asdict(ladder_cal.ladder_pi2),
                                      "composition_phase": ladder_cal.composition_phase}},
                               default=str))

    def boom(*a, **k):
        raise AssertionError("cache miss")

    monkeypatch.setattr(twophoton, "calibrate_two_photon", boom)
    cal = scenarios.calibrate(ladder_cfg, ladder=True, cache_path=str(path))
    assert cal.ladder_pi == ladder_cal.ladder_pi
    assert cal.composition_phase == ladder_cal.composition_phase
    assert scenarios.calibrate(load_config("fig4")).ladder_pi is None


def test_ladder_fig5_and_fig7(ladder_cfg, ladder_cal):
    grid = np.linspace(0, 2 * math.pi, 6, endpoint=False)
    r5 = scenarios.run_hadamard_phase_sweep(ladder_cfg, ladder_cal, grid=grid)
    assert 0.45 <= r5.fit["amplitude"] <= 0.5
    r7 = scenarios.run_hadamard_on_superposition(ladder_cfg.with_overrides(), ladder_cal, grid=grid)
    assert 0.45 <= r7.fit["amplitude"] <= 0.5
    assert np.all(r7.final[:, 1] < 1e-2)


def test_ramsey_fringes_track_detuning(ladder_cfg, ladder_cal):
    delays = np.linspace(0, 400e-9, 401)
    zero = scenarios.ramsey_fringes(ladder_cfg, ladder_cal, 0.0, [0.0])[0]
    assert zero[2] > 0.99
    pops = scenarios.ramsey_fringes(ladder_cfg, ladder_cal, 2 * math.pi * 8e6, delays)
    from holoqutrit.harness.fitting import fit_fringe_frequency
    assert fit_fringe_frequency(delays, pops[:, 2]) == pytest.approx(8e6, rel=1e-3)
    assert np.allclose(pops.sum(axis=1), 1)


@pytest.mark.slow
def test_rabi_ramsey_scenario(ladder_cfg, ladder_cal):
    cfg = load_config("rabi-ramsey", overrides={"sweep": {"ramsey_detunings_mhz": [4, 10],
                                                          "ramsey_delays": 201}})
    res = scenarios.run_two_photon_rabi_ramsey(cfg, ladder_cal, grid=[0.0, 1.0])
    assert res.final[1, 2] > 0.99
    assert np.allclose(res.final[0], [1, 0, 0])
    assert res.fit["fringe_slope"] == pytest.approx(1.0, rel=0.02)
    assert res.fit["ramsey_max_p1"] < 0.1
    assert {"ramsey", "ramsey_fringe_fit"} <= set(res.tables)


def test_ideal_fits_recover_analytic_phase():
    grid = np.linspace(0, 2 * math.pi, 8, endpoint=False)
    r5 = scenarios.run_hadamard_phase_sweep(cfg_for("fig5"), grid=grid)
    r7 = scenarios.run_hadamard_on_superposition(cfg_for("fig7"), grid=grid)
    for res in (r5, r7):
        assert res.fit["amplitude"] == pytest.approx(0.5, abs=1e-6)
        assert abs(res.fit["phase"]) < 1e-6


def test_fig6_equal_superposition_and_endpoints():
    res = scenarios.run_not_on_prepared(cfg_for("fig6"), grid=[0.0, 1 / math.sqrt(2), 1.0])
    p0f, p2f = res.extras["p0_f"], res.extras["p2_f"]
    assert p2f[0] == pytest.approx(1.0, abs=1e-9)
    assert p0f[1] == pytest.approx(0.5, abs=1e-9) and p2f[1] == pytest.approx(0.5, abs=1e-9)
    assert p0f[2] == pytest.approx(1.0, abs=1e-9)


def test_fig6_ladder_correction_stays_in_range(ladder_cal):
    cfg = load_config("fig6", overrides={"simulation": {"two_photon": "ladder"}})
    res = scenarios.run_not_on_prepared(cfg, ladder_cal, grid=np.linspace(0, 1, 6))
    for key in ("p2_i_corrected", "p2_f_corrected"):
        assert np.all(res.extras[key] >= -1e-12) and np.all(res.extras[key] <= 1 + 1e-8)


def test_coherences_depend_on_phase():
    res = scenarios.run_phase_independence_check(cfg_for("phase-independence"),
                                                 grid=[0.0, math.pi / 2])
    assert abs(res.extras["rho02_re"][0] - res.extras["rho02_re"][1]) > 0.1


def test_closed_runs_conserve_population_at_every_sample():
    res = scenarios.run_hadamard_on_superposition(cfg_for("fig7"), grid=[0.3, 1.1])
    for rec in res.records:
        assert np.max(np.abs(rec.populations.sum(axis=1) - 1)) < 1e-8
