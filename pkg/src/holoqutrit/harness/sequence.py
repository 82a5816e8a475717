"""Back-to-back pulse sequences on one time axis.

Holonomic tones and ideal gates live in the double-rotating frame of the
0-1/1-2 transitions; ladder two-photon pulses live in the frame rotating at
half the (detuned) 0-2 frequency. The state is carried in the frame of the
segment being propagated and converted at segment boundaries.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from holoqutrit import dynamics, qcore, twophoton
from holoqutrit.pulseshape import make_holonomic_pair, tones_hamiltonian

HOLONOMIC = "holonomic"
LADDER = "ladder"


@dataclass(frozen=True)
class Segment:
    label: str
    start: float
    stop: float
    frame: str = HOLONOMIC
    hamiltonian: object = None
    gate: np.ndarray = None
    ladder: twophoton.LadderDriveConfig = None


@dataclass
class Timeline:
    """Sequence builder; segments are appended back to back, gaps via ``idle``."""

    delta: float
    t: float = 0.0
    segments: list = field(default_factory=list)

    def idle(self, duration, label="idle"):
        if duration > 0:
            self.segments.append(Segment(label, self.t, self.t + duration))
            self.t += duration
        return self

    def holonomic(self, sp, td, phi01, omega_2pi=None, label="holonomic"):
        t0 = self.t + 2 * td
        tones = make_holonomic_pair(sp, td, t0, phi01, omega_2pi, omega_2pi)
        self.segments.append(Segment(label, self.t, self.t + 4 * td,
                                     hamiltonian=lambda t, tones=tones: tones_hamiltonian(tones, t)))
        self.t += 4 * td
        return self

    def ideal_gate(self, u2, duration, label="two-photon"):
        """Ideal (|0>, |2>) gate applied at the center of an idle window."""
        half = duration / 2
        self.segments.append(Segment(label + ":pre", self.t, self.t + half))
        self.segments.append(Segment(label, self.t + half, self.t + half,
                                     gate=qcore.embed_02(u2)))
        self.segments.append(Segment(label + ":post", self.t + half, self.t + duration))
        self.t += duration
        return self

    def ladder_pulse(self, cfg, label="two-photon"):
        td = cfg.envelope.td
        placed = replace(cfg, envelope=cfg.envelope.shifted(self.t + 2 * td))
        self.segments.append(Segment(label, self.t, self.t + 4 * td, frame=LADDER,
                                     hamiltonian=lambda t, c=placed: twophoton.ladder_hamiltonian(c, t),
                                     ladder=placed))
        self.t += 4 * td
        return self

    @property
    def duration(self):
        return self.t


def frame_change(t, delta, detuning):
    """Diagonal map from holonomic-frame to ladder-frame amplitudes at time ``t``."""
    return np.diag([1.0, np.exp(1j * (-delta + 0.5 * detuning) * t), np.exp(1j * detuning * t)])


@dataclass
class SequenceResult:
    record: dynamics.TrajectoryRecord
    ends: dict
    final: np.ndarray


def simulate(timeline, psi0=None, dec=None, dt=1e-12, record_every=1e-12 * 250):
    """Propagate a timeline; closed system unless ``dec`` has finite times.

    Returns the concatenated trajectory and the state at the end of every
    labelled segment (``ends[label]``), both expressed in the holonomic frame.
    """
    dec = dynamics.DecoherenceParams.closed() if dec is None else dec
    closed = dec.is_closed
    state = qcore.ket(0) if psi0 is None else np.asarray(psi0, dtype=complex)
    if not closed and state.ndim == 1:
        state = qcore.density(state)
    stride = max(0, int(round(record_every / dt))) if record_every else 0

    def convert(s, f):
        return f @ s if s.ndim == 1 else f @ s @ f.conj().T

    record = None
    ends = {}
    for seg in timeline.segments:
        if seg.gate is not None:
            state = convert(state, seg.gate)
            ends[seg.label] = state.copy()
            continue
        if seg.frame == LADDER:
            state = convert(state, frame_change(seg.start, timeline.delta, seg.ladder.detuning))
        h = seg.hamiltonian or (lambda t: np.zeros(np.shape(t) + (3, 3), dtype=complex))
        grid = dynamics.TimeGrid(seg.start, seg.stop, dt)
        if closed:
            u, rec = dynamics.propagate_unitary(h, grid, psi0=state, record_every=stride)
            state = u @ state
        else:
            rec = dynamics.propagate_lindblad(h, dec, state, grid, record_every=stride)
            state = rec.states[-1]
        if seg.frame == LADDER:
            back = np.stack([frame_change(t, timeline.delta, seg.ladder.detuning).conj().T
                             for t in rec.times])
            rec.states = (np.einsum("nij,nj->ni", back, rec.states) if closed
                          else back @ rec.states @ qcore.dagger(back))
            state = convert(state, back[-1])
        record = rec if record is None else record.concat(rec)
        ends[seg.label] = state.copy()
    return SequenceResult(record, ends, state)

