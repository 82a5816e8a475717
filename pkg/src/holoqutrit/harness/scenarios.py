"""Simulated versions of the holonomic-gate experiments.

Each ``run_*`` function sweeps one control parameter, simulates the pulse
sequence at every grid point and returns a :class:`SweepResult` with the
trajectories, final populations and the closed-form comparison.
"""

import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from itertools import repeat

import numpy as np

from holoqutrit import qcore, twophoton
from holoqutrit.pulseshape import Envelope, ScalingPair, calibrate_2pi
from holoqutrit.harness.fitting import fit_fringe_frequency, fit_sine
from holoqutrit.harness.sequence import Timeline, simulate

log = logging.getLogger(__name__)

ABS_A_HADAMARD = math.sin(math.pi / 8)
ABS_A_NOT = math.sin(math.pi / 4)


@dataclass(frozen=True)
class Calibrations:
    """Amplitudes shared by every point of a sweep.

    ``omega_2pi`` is the holonomic 2*pi amplitude (rad/s). The ladder entries
    are only filled when a scenario needs the two-photon ladder model.
    """

    omega_2pi: float
    ladder_pi: twophoton.TwoPhotonCalibration = None
    ladder_pi2: twophoton.TwoPhotonCalibration = None
    composition_phase: float = None


@dataclass
class PointResult:
    record: object
    final: np.ndarray
    extras: dict = field(default_factory=dict)


@dataclass
class SweepResult:
    scenario: str
    axis_name: str
    axis: np.ndarray
    records: list
    final: np.ndarray
    extras: dict
    fit: dict
    fit_residual: np.ndarray
    tables: dict = field(default_factory=dict)

    def column(self, name):
        if name in ("p0", "p1", "p2"):
            return self.final[:, int(name[1])]
        return self.extras[name]


def ladder_template(cfg):
    env = Envelope(1.0, 2 * cfg.td_2ph, cfg.td_2ph)
    return twophoton.LadderDriveConfig(env, 0.0, cfg.device.delta, cfg.coupling_ratio, 0.0)


def _cache_key(cfg):
    return (f"delta={cfg.device.delta:.9e};td={cfg.td_2ph:.6e};"
            f"r={cfg.coupling_ratio:.9f};dt={cfg.dt:.3e}")


def _decode(d):
    d = dict(d)
    d["target"] = twophoton.Target(d["target"])
    return twophoton.TwoPhotonCalibration(**d)


def calibrate(cfg, ladder=None, cache_path=None):
    """Holonomic 2*pi amplitude and, if needed, the ladder pi and pi/2 pulses.

    Ladder calibrations are looked up in / stored to the JSON file at
    ``cache_path`` keyed by (delta, td, coupling ratio, dt).
    """
    omega_2pi = calibrate_2pi(cfg.td_hol)
    if ladder is None:
        ladder = cfg.two_photon == "ladder"
    if not ladder:
        return Calibrations(omega_2pi)

    cache = {}
    if cache_path and os.path.exists(cache_path):
        with open(cache_path) as fh:
            cache = json.load(fh)
    key = _cache_key(cfg)
    if key in cache:
        entry = cache[key]
        return Calibrations(omega_2pi, _decode(entry["pi"]), _decode(entry["pi/2"]),
                            entry["composition_phase"])

    template = ladder_template(cfg)
    pi = twophoton.calibrate_two_photon(twophoton.Target.PI, template, dt=cfg.dt)
    pi2 = twophoton.calibrate_two_photon(twophoton.Target.PI_OVER_2, template, dt=cfg.dt,
                                         stark_tracking=pi.stark_tracking)
    comp = twophoton.composition_phase(pi2.apply(template), dt=cfg.dt)
    log.info("ladder calibration: pi %.4g rad/s (p2=%.4f), pi/2 %.4g rad/s",
             pi.omega0, pi.p2, pi2.omega0)
    if cache_path:
        cache[key] = {"pi": asdict(pi), "pi/2": asdict(pi2), "composition_phase": comp}
        with open(cache_path, "w") as fh:
            json.dump(cache, fh, indent=2, default=str)
    return Calibrations(omega_2pi, pi, pi2, comp)


def _map(fn, cfg, cal, values):
    if cfg.workers > 1 and len(values) > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            return list(ex.map(fn, repeat(cfg), repeat(cal), values))
    return [fn(cfg, cal, v) for v in values]


def _run(cfg, tl, psi0=None):
    return simulate(tl, psi0, cfg.decoherence_params, cfg.step, cfg.record_every)


def _pops(state):
    return qcore.populations(state)


def _timeline(cfg):
    return Timeline(cfg.device.delta).idle(cfg.lead_in, "lead-in")


def _holonomic(tl, cfg, cal, abs_a, phi01, label="holonomic"):
    return tl.holonomic(ScalingPair.from_magnitude(abs_a, phi01), cfg.td_hol, phi01,
                        cal.omega_2pi, label)


def _pi2_pulse(tl, cfg, cal, phi02, label="two-photon"):
    if cfg.two_photon == "ideal":
        return tl.ideal_gate(twophoton.ideal_pi2_gate(phi02), 4 * cfg.td_2ph, label)
    lad = replace(cal.ladder_pi2.apply(ladder_template(cfg)), phi02=phi02)
    return tl.ladder_pulse(lad, label)


def _prep_pulse(tl, cfg, cal, amp_rel, label="two-photon"):
    """Two-photon preparation at ``amp_rel`` times the pi amplitude, phase 0."""
    if cfg.two_photon == "ideal":
        # the two-photon area grows with the square of the drive amplitude
        u = twophoton.ideal_rotation(math.pi * amp_rel**2, 0.0)
        return tl.ideal_gate(u, 4 * cfg.td_2ph, label)
    lad = twophoton.tracked_config(ladder_template(cfg), amp_rel * cal.ladder_pi.omega0,
                                   cal.ladder_pi.stark_tracking)
    return tl.ladder_pulse(lad, label)


# --------------------------------------------------------------------------
# population control


def _fig4_point(cfg, cal, abs_a):
    phi01 = cfg.sweep("fig4_phi01_rad")
    tl = _holonomic(_timeline(cfg), cfg, cal, abs_a, phi01).idle(cfg.tail, "tail")
    res = _run(cfg, tl)
    return PointResult(res.record, _pops(res.final))


def run_population_sweep(cfg, cal=None, grid=None):
    """Final populations after the holonomic pulse pair versus |a|, starting from |0>."""
    cal = cal or calibrate(cfg, ladder=False)
    grid = np.linspace(0.0, 1.0, cfg.points) if grid is None else np.asarray(grid, dtype=float)
    pts = _map(_fig4_point, cfg, cal, list(grid))
    final = np.array([p.final for p in pts])
    law = 4 * grid**2 * (1 - grid**2)
    resid = final[:, 2] - law
    return SweepResult("fig4", "abs_a", grid, [p.record for p in pts], final,
                       {"p2_closed_form": law}, {"max_abs_residual": float(np.max(np.abs(resid)))},
                       resid)


def _phase_point(cfg, cal, phi01):
    abs_a = cfg.sweep("phase_check_abs_a")
    tl = _holonomic(_timeline(cfg), cfg, cal, abs_a, phi01).idle(cfg.tail, "tail")
    res = _run(cfg, tl)
    state = res.final
    rho02 = state[0, 2] if state.ndim == 2 else state[0] * np.conj(state[2])
    return PointResult(res.record, _pops(state),
                       {"rho02_re": float(np.real(rho02)), "rho02_im": float(np.imag(rho02))})


def run_phase_independence_check(cfg, cal=None, grid=None):
    """Final populations at fixed |a| for several relative phases phi01."""
    cal = cal or calibrate(cfg, ladder=False)
    if grid is None:
        grid = np.linspace(0.0, 2 * math.pi, cfg.points, endpoint=False)
    grid = np.asarray(grid, dtype=float)
    pts = _map(_phase_point, cfg, cal, list(grid))
    final = np.array([p.final for p in pts])
    spread = final - final.mean(axis=0)
    extras = {k: np.array([p.extras[k] for p in pts]) for k in ("rho02_re", "rho02_im")}
    return SweepResult("phase-independence", "phi01_rad", grid, [p.record for p in pts], final,
                       extras, {"max_population_spread": float(np.max(np.ptp(final, axis=0)))},
                       np.max(np.abs(spread), axis=1))


# --------------------------------------------------------------------------
# phase control: Hadamard then two-photon pi/2


def _fig5_point(cfg, cal, phi01):
    tl = _holonomic(_timeline(cfg), cfg, cal, ABS_A_HADAMARD, phi01)
    tl.idle(cfg.gap, "gap")
    _pi2_pulse(tl, cfg, cal, 0.0)
    tl.idle(cfg.tail, "tail")
    res = _run(cfg, tl)
    mid = _pops(res.ends["holonomic"])
    return PointResult(res.record, _pops(res.final),
                       {"p0_mid": mid[0], "p1_mid": mid[1], "p2_mid": mid[2]})


def run_hadamard_phase_sweep(cfg, cal=None, grid=None):
    """p0 at the end of Hadamard + pi/2 versus the 0-1 drive phase."""
    cal = cal or calibrate(cfg)
    if grid is None:
        grid = np.linspace(0.0, 2 * math.pi, cfg.points, endpoint=False)
    grid = np.asarray(grid, dtype=float)
    pts = _map(_fig5_point, cfg, cal, list(grid))
    final = np.array([p.final for p in pts])
    extras = {k: np.array([p.extras[k] for p in pts]) for k in ("p0_mid", "p1_mid", "p2_mid")}
    extras["p0_closed_form"] = (1 + np.sin(grid)) / 2
    fit = fit_sine(grid, final[:, 0], k=1.0)
    return SweepResult("fig5", "phi01_rad", grid, [p.record for p in pts], final, extras,
                       {"offset": fit.offset, "amplitude": fit.amplitude, "phase": fit.phase,
                        "rms": fit.rms}, fit.residuals(grid, final[:, 0]))


# --------------------------------------------------------------------------
# NOT on prepared superpositions


def _fig6_point(cfg, cal, amp_rel):
    tl = _timeline(cfg)
    _prep_pulse(tl, cfg, cal, amp_rel)
    tl.idle(cfg.gap, "gap")
    _holonomic(tl, cfg, cal, ABS_A_NOT, 0.0)
    tl.idle(cfg.tail, "tail")
    res = _run(cfg, tl)
    # ideal preparations end with the idle half-window after the gate
    prepared = res.ends.get("two-photon:post", res.ends["two-photon"])
    p_i, p_f = _pops(prepared), _pops(res.final)
    return PointResult(res.record, p_f, {
        "p0_i": p_i[0], "p1_i": p_i[1], "p2_i": p_i[2],
        "p0_f": p_f[0], "p1_f": p_f[1], "p2_f": p_f[2],
        "p2_i_corrected": p_i[2] + p_i[1], "p2_f_corrected": p_f[2] + p_f[1]})


def run_not_on_prepared(cfg, cal=None, grid=None):
    """Holonomic NOT after a two-photon preparation of swept amplitude."""
    cal = cal or calibrate(cfg)
    if grid is None:
        grid = np.linspace(0.0, cfg.sweep("fig6_max_amplitude_rel"), cfg.points)
    grid = np.asarray(grid, dtype=float)
    pts = _map(_fig6_point, cfg, cal, list(grid))
    final = np.array([p.final for p in pts])
    keys = ("p0_i", "p1_i", "p2_i", "p0_f", "p1_f", "p2_f", "p2_i_corrected", "p2_f_corrected")
    extras = {k: np.array([p.extras[k] for p in pts]) for k in keys}
    resid = extras["p0_f"] - (1 - extras["p0_i"])
    resid_corr = extras["p2_f_corrected"] - (1 - extras["p2_i_corrected"])
    return SweepResult("fig6", "amplitude_rel", grid, [p.record for p in pts], final, extras,
                       {"max_abs_residual_p0": float(np.max(np.abs(resid))),
                        "max_abs_residual_p2_corrected": float(np.max(np.abs(resid_corr)))},
                       resid)


# --------------------------------------------------------------------------
# Hadamard on two-photon superpositions


def _fig7_point(cfg, cal, phi02):
    tl = _timeline(cfg)
    _pi2_pulse(tl, cfg, cal, phi02)
    tl.idle(cfg.gap, "gap")
    _holonomic(tl, cfg, cal, ABS_A_HADAMARD, 0.0)
    tl.idle(cfg.tail, "tail")
    res = _run(cfg, tl)
    return PointResult(res.record, _pops(res.final))


def run_hadamard_on_superposition(cfg, cal=None, grid=None):
    """Populations after pi/2(phi02) then the holonomic Hadamard, versus phi02."""
    cal = cal or calibrate(cfg)
    if grid is None:
        grid = np.linspace(0.0, 2 * math.pi, cfg.points, endpoint=False)
    grid = np.asarray(grid, dtype=float)
    pts = _map(_fig7_point, cfg, cal, list(grid))
    final = np.array([p.final for p in pts])
    fit = fit_sine(grid, final[:, 2], k=2.0)
    return SweepResult("fig7", "phi02_rad", grid, [p.record for p in pts], final,
                       {"p2_closed_form": (1 + np.sin(2 * grid)) / 2},
                       {"offset": fit.offset, "amplitude": fit.amplitude, "phase": fit.phase,
                        "rms": fit.rms}, fit.residuals(grid, final[:, 2]))


# --------------------------------------------------------------------------
# two-photon Rabi and Ramsey (ladder model only)


def _rabi_point(cfg, cal, amp_rel):
    tl = _timeline(cfg)
    _prep_pulse(tl, cfg, cal, amp_rel)
    tl.idle(cfg.tail, "tail")
    res = _run(cfg, tl)
    return PointResult(res.record, _pops(res.final),
                       {"max_p1": float(np.max(res.record.populations[:, 1]))})


def ramsey_fringes(cfg, cal, detuning, delays):
    """Populations after pi/2 - free delay - pi/2 at two-photon detuning ``detuning`` (rad/s).

    The second pulse carries the composition phase so that zero delay at
    zero detuning composes to a pi pulse. Closed system.
    """
    template = ladder_template(cfg)
    first = cal.ladder_pi2.apply(template)
    first = replace(first, detuning=first.detuning + detuning)
    second = replace(first, phi02=cal.composition_phase)
    u1 = twophoton.pulse_propagator(first, cfg.dt)
    u2 = twophoton.pulse_propagator(second, cfg.dt)
    psi = u1 @ qcore.ket(0)
    delays = np.asarray(delays, dtype=float)
    # free evolution under diag(0, delta - detuning/2, -detuning)
    free = np.exp(-1j * np.outer(delays, [0.0, cfg.device.delta - detuning / 2, -detuning]))
    out = (free * psi) @ u2.T
    return qcore.populations(out)


def run_two_photon_rabi_ramsey(cfg, cal=None, grid=None):
    """Two-photon Rabi curve versus amplitude and Ramsey fringes versus delay and detuning."""
    if cfg.two_photon != "ladder":
        cfg = cfg.with_overrides(two_photon="ladder")
    cal = cal if cal is not None and cal.ladder_pi is not None else calibrate(cfg, ladder=True)
    if grid is None:
        grid = np.linspace(0.0, cfg.sweep("rabi_max_amplitude_rel"), cfg.points)
    grid = np.asarray(grid, dtype=float)
    pts = _map(_rabi_point, cfg, cal, list(grid))
    final = np.array([p.final for p in pts])

    delays = np.linspace(0.0, cfg.sweep("ramsey_max_delay_ns") * 1e-9, int(cfg.sweep("ramsey_delays")))
    det_mhz = np.asarray(cfg.sweep("ramsey_detunings_mhz"), dtype=float)
    rows, fringe = [], []
    max_p1 = 0.0
    for d in det_mhz:
        pops = ramsey_fringes(cfg, cal, 2 * math.pi * d * 1e6, delays)
        max_p1 = max(max_p1, float(np.max(pops[:, 1])))
        f = fit_fringe_frequency(delays, pops[:, 2]) / 1e6
        fringe.append((d, f))
        rows.extend((d, t * 1e9, *p) for t, p in zip(delays, pops))
    fringe = np.array(fringe)
    slope, intercept = np.polyfit(fringe[:, 0], fringe[:, 1], 1)
    zero = ramsey_fringes(cfg, cal, 0.0, [0.0])[0]
    fit = {"fringe_slope": float(slope), "fringe_intercept_mhz": float(intercept),
           "ramsey_max_p1": max_p1, "ramsey_zero_delay_p2": float(zero[2]),
           "pi_omega0_rad_per_ns": cal.ladder_pi.omega0 * 1e-9,
           "pi2_omega0_rad_per_ns": cal.ladder_pi2.omega0 * 1e-9}
    tables = {
        "ramsey": (["detuning_mhz", "delay_ns", "p0", "p1", "p2"], rows),
        "ramsey_fringe_fit": (["detuning_mhz", "fringe_frequency_mhz"], fringe.tolist()),
    }
    return SweepResult("rabi-ramsey", "amplitude_rel", grid, [p.record for p in pts], final,
                       {"max_p1": np.array([p.extras["max_p1"] for p in pts])}, fit,
                       np.full(len(grid), np.nan), tables)


RUNNERS = {
    "fig4": run_population_sweep,
    "phase-independence": run_phase_independence_check,
    "fig5": run_hadamard_phase_sweep,
    "fig6": run_not_on_prepared,
    "fig7": run_hadamard_on_superposition,
    "rabi-ramsey": run_two_photon_rabi_ramsey,
}


def run_scenario(cfg, cal=None):
    return RUNNERS[cfg.scenario](cfg, cal)

