"""Fast invariant checks run by ``holoqutrit check``."""

import math
from dataclasses import dataclass

import numpy as np

from holoqutrit import dynamics, holonomy, qcore, twophoton
from holoqutrit.pulseshape import (Envelope, calibrate_2pi, make_holonomic_pair,
                                   pulse_area, tones_hamiltonian)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str

    def line(self):
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.name}: {self.detail}"


def gate_grid(n=5):
    thetas = np.linspace(0.0, math.pi, n)
    phis = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    return [holonomy.GateSpec(t, p) for t in thetas for p in phis]


def simulate_gate(g, td=6.5e-9, dt=1e-12):
    """Propagated unitary of the calibrated holonomic pulse pair for gate ``g``."""
    sp = holonomy.ab_from_angles(g)
    tones = make_holonomic_pair(sp, td, 2 * td, g.phi)
    grid = dynamics.TimeGrid(0.0, 4 * td, dt)
    u, _ = dynamics.propagate_unitary(lambda t: tones_hamiltonian(tones, t), grid,
                                      record_every=0)
    return u, tones


def _closed_form(n=7):
    worst = 0.0
    for g in gate_grid(n):
        sp = holonomy.ab_from_angles(g)
        u3 = holonomy.holonomic_unitary3(sp)
        u2 = holonomy.holonomic_unitary2(g)
        t = holonomy.basis_change_T(sp)
        conj = t.conj().T @ holonomy.cyclic_unitary_dark_bright() @ t
        worst = max(worst, qcore.frobenius(u3, conj), qcore.frobenius(qcore.block_02(u3), u2),
                    qcore.frobenius(u2 @ u2, np.eye(2)), qcore.unitarity_error(u3),
                    float(np.linalg.norm(u3 @ holonomy.dark_bright(sp).dark
                                         - holonomy.dark_bright(sp).dark)))
    return CheckResult("closed-form gate algebra", worst < 1e-12, f"max deviation {worst:.2e}")


def _propagation(dt=1e-12):
    worst = 0.0
    for name in ("NOT", "HADAMARD"):
        g = holonomy.GateSpec.named(name)
        u, _ = simulate_gate(g, dt=dt)
        worst = max(worst, qcore.frobenius(u, holonomy.holonomic_unitary3(holonomy.ab_from_angles(g))))
    return CheckResult("propagated gates match closed form", worst < 1e-6,
                       f"max Frobenius error {worst:.2e}")


def _cyclic(seed=7):
    rng = np.random.default_rng(seed)
    g = holonomy.GateSpec(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
    u, tones = simulate_gate(g)
    worst = 0.0
    for _ in range(8):
        c = rng.normal(size=2) + 1j * rng.normal(size=2)
        psi = qcore.normalize([c[0], 0, c[1]])
        worst = max(worst, qcore.populations(u @ psi)[1])
    grid = dynamics.TimeGrid(0.0, 4 * 6.5e-9, 1e-12)
    res = dynamics.parallel_transport_residual(lambda t: tones_hamiltonian(tones, t), grid)
    peak = calibrate_2pi(6.5e-9)
    ok = worst < 1e-6 and res < 1e-9 * peak
    return CheckResult("cyclicity and parallel transport", ok,
                       f"max final p1 {worst:.2e}, residual/peak {res / peak:.2e}")


def _noncommutativity(seed=11):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(50):
        n1, n2 = (v / np.linalg.norm(v) for v in rng.normal(size=(2, 3)))
        comm = holonomy.commutator(n1, n2)
        worst = max(worst, qcore.frobenius(comm, 2j * holonomy.n_dot_sigma(np.cross(n1, n2))))
    return CheckResult("noncommutativity identity", worst < 1e-14, f"max deviation {worst:.2e}")


def _calibration():
    worst = 0.0
    for td in (1e-9, 6.5e-9, 9e-9, 20e-9):
        area = pulse_area(Envelope(calibrate_2pi(td), 3 * td, td))
        worst = max(worst, abs(area / (2 * math.pi) - 1))
    return CheckResult("2*pi area calibration", worst < 1e-10, f"max relative error {worst:.2e}")


def _lindblad():
    dec = dynamics.DecoherenceParams(T1_10=430e-9)
    grid = dynamics.TimeGrid(0.0, 2e-6, 1e-11)
    rec = dynamics.propagate_lindblad(lambda t: np.zeros(np.shape(t) + (3, 3)), dec,
                                      qcore.density(qcore.ket(1)), grid, record_every=100)
    err = float(np.max(np.abs(rec.populations[:, 1] - np.exp(-rec.times / 430e-9))))
    ok = err < 1e-3 and rec.monitors["trace_error"] < 1e-8
    return CheckResult("T1 decay and trace preservation", ok,
                       f"max |p1 - exp(-t/T1)| {err:.2e}, trace drift {rec.monitors['trace_error']:.2e}")


def _two_photon_ideal():
    worst = 0.0
    for phi in np.linspace(0, 2 * math.pi, 13):
        g = twophoton.ideal_pi2_gate(phi)
        worst = max(worst, qcore.unitarity_error(g),
                    qcore.frobenius(g, twophoton.ideal_pi2_gate(phi + math.pi)))
    return CheckResult("ideal two-photon pi/2 gate", worst < 1e-12, f"max deviation {worst:.2e}")


CHECKS = (_closed_form, _propagation, _cyclic, _noncommutativity, _calibration, _lindblad,
          _two_photon_ideal)


def run_checks():
    return [check() for check in CHECKS]
