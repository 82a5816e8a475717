import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holoqutrit import qcore, twophoton
from holoqutrit.pulseshape import Envelope

DELTA = 2 * math.pi * 145.5e6


def template(omega0=1.0):
    return twophoton.LadderDriveConfig(Envelope(omega0, 18e-9, 9e-9), delta=DELTA)


def test_ladder_hamiltonian_structure():
    cfg = replace(template(2e8), phi02=0.3, detuning=1e7)
    h = twophoton.ladder_hamiltonian(cfg, 18e-9)
    assert np.allclose(h, h.conj().T)
    assert h[1, 0] == pytest.approx(1e8 * np.exp(0.3j))
    assert h[2, 1] == pytest.approx(math.sqrt(2) * 1e8 * np.exp(0.3j))
    assert h[1, 1].real == pytest.approx(DELTA - 5e6)
    assert h[2, 2].real == pytest.approx(-1e7)
    assert h[0, 2] == 0
    assert twophoton.ladder_hamiltonian(cfg, np.zeros(4)).shape == (4, 3, 3)


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_phase_frame_shifts_drive_phase(phi, shift):
    cfg = replace(template(2e8), phi02=phi)
    d = twophoton.phase_frame(shift)
    lhs = twophoton.ladder_hamiltonian(replace(cfg, phi02=phi + shift), 18e-9)
    rhs = d @ twophoton.ladder_hamiltonian(cfg, 18e-9) @ d.conj().T
    assert np.allclose(lhs, rhs, atol=1e-3)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_ideal_rotation_properties(angle, phi):
    u = twophoton.ideal_rotation(angle, phi)
    assert qcore.unitarity_error(u) < 1e-14
    assert np.allclose(u, twophoton.ideal_rotation(angle, phi + math.pi))
    assert np.allclose(twophoton.ideal_rotation(math.pi / 2, phi), twophoton.ideal_pi2_gate(phi))


def test_effective_params_and_stark():
    cfg = template()
    om = 3e8
    eff, s0, s2 = twophoton.effective_two_photon_params(cfg, om)
    assert eff == pytest.approx(math.sqrt(2) * om**2 / (2 * DELTA))
    assert s2 - s0 == pytest.approx(twophoton.differential_stark(cfg, om))
    assert twophoton.differential_stark(cfg, om) == pytest.approx(om**2 / (4 * DELTA))
    with pytest.raises(ValueError):
        twophoton.effective_two_photon_params(replace(cfg, delta=0.0), om)


def test_tracked_config_detuning_sign():
    cfg = twophoton.tracked_config(template(), 4e8, 0.8)
    assert cfg.envelope.omega0 == 4e8
    assert cfg.detuning == pytest.approx(-0.8 * twophoton.differential_stark(cfg, 4e8))
    assert twophoton.tracked_config(template(), 0.0, 0.8).detuning == 0.0


def test_validity_ratio():
    assert template(DELTA).validity_ratio == pytest.approx(1.0)


def test_calibration_rejects_resonant_intermediate():
    with pytest.raises(twophoton.CalibrationError):
        twophoton.calibrate_two_photon("pi", replace(template(), delta=0.0))


def test_calibration_reports_sweep_when_no_transfer():
    # a vanishing coupling ratio removes the two-photon path entirely
    with pytest.raises(twophoton.CalibrationError) as info:
        twophoton.calibrate_two_photon("pi", replace(template(), coupling_ratio=1e-6), dt=20e-12)
    assert info.value.sweep


def test_ladder_calibration(ladder_cal):
    pi, pi2 = ladder_cal.ladder_pi, ladder_cal.ladder_pi2
    assert pi.p2 > 0.99 and pi.max_p1 < 0.1
    assert pi2.p2 == pytest.approx(0.5, abs=1e-4)
    assert pi2.stark_tracking == pi.stark_tracking
    assert 0.55 < pi2.omega0 / pi.omega0 < 0.8


def test_composition_phase_composes_pi2_pulses(ladder_cfg, ladder_cal):
    from holoqutrit.harness.scenarios import ladder_template
    cfg = ladder_cal.ladder_pi2.apply(ladder_template(ladder_cfg))
    u = twophoton.pulse_propagator(cfg)
    d = twophoton.phase_frame(ladder_cal.composition_phase)
    forward = d @ u @ d.conj().T @ u @ qcore.ket(0)
    assert qcore.populations(forward)[2] > 0.99
    d_inv = twophoton.phase_frame(ladder_cal.composition_phase + math.pi / 2)
    back = d_inv @ u @ d_inv.conj().T @ u @ qcore.ket(0)
    assert qcore.populations(back)[0] > 0.99
