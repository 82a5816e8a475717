"""Quartic super-Gaussian drive envelopes and their 2*pi area calibration."""

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

# envelope support is |t - t0| <= TRUNCATION * td
TRUNCATION = 2.0


class Transition(str, enum.Enum):
    T01 = "01"
    T12 = "12"
    T02 = "02"


@dataclass(frozen=True)
class Envelope:
    """Truncated ``omega0 * exp(-((t - t0)/td)**4 / 2)``.

    Attributes
    ----------
    omega0 : float
        Peak Rabi amplitude in rad/s.
    t0 : float
        Time of the maximum in s.
    td : float
        Width constant in s; the pulse lasts ``4 * td``.
    """

    omega0: float
    t0: float
    td: float

    def __post_init__(self):
        if not self.td > 0:
            raise ValueError(f"td must be positive, got {self.td}")
        if self.omega0 < 0:
            raise ValueError(f"omega0 must be non-negative, got {self.omega0}")

    @property
    def start(self):
        return self.t0 - TRUNCATION * self.td

    @property
    def stop(self):
        return self.t0 + TRUNCATION * self.td

    @property
    def duration(self):
        return 2 * TRUNCATION * self.td

    def __call__(self, t):
        return envelope_value(self, t)

    def scaled(self, factor):
        return Envelope(self.omega0 * factor, self.t0, self.td)

    def shifted(self, t0):
        return Envelope(self.omega0, t0, self.td)


@dataclass(frozen=True)
class DriveTone:
    """A resonant drive on one transition, described in its rotating frame."""

    envelope: Envelope
    transition: Transition
    carrier_freq: float = 0.0
    phase: float = 0.0


@dataclass(frozen=True)
class ScalingPair:
    """Complex drive weights (a, b) with |a|^2 + |b|^2 = 1."""

    a: complex
    b: complex

    def __post_init__(self):
        norm = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"|a|^2 + |b|^2 = {norm!r}, expected 1")

    @classmethod
    def from_magnitude(cls, abs_a, phi01=0.0):
        """Pair with |a| = ``abs_a``, arg a = ``phi01`` and b = -sqrt(1 - |a|^2)."""
        if not 0.0 <= abs_a <= 1.0:
            raise ValueError(f"|a| must lie in [0, 1], got {abs_a}")
        return cls(abs_a * np.exp(1j * phi01), -math.sqrt(1.0 - abs_a**2))


def envelope_value(env, t):
    """Envelope in rad/s at time(s) ``t``; exactly zero outside the truncation window."""
    t = np.asarray(t, dtype=float)
    x = (t - env.t0) / env.td
    val = env.omega0 * np.exp(-0.5 * x**4)
    val = np.where(np.abs(x) <= TRUNCATION, val, 0.0)
    return val if val.ndim else float(val)


@lru_cache(maxsize=None)
def unit_area():
    """Area of the unit envelope in units of td: integral of exp(-x^4/2) over [-2, 2]."""
    val, _ = quad(lambda x: math.exp(-0.5 * x**4), -TRUNCATION, TRUNCATION,
                  epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


@lru_cache(maxsize=None)
def unit_square_area():
    """Integral of exp(-x^4) over [-2, 2] (area of the squared unit envelope)."""
    val, _ = quad(lambda x: math.exp(-x**4), -TRUNCATION, TRUNCATION,
                  epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def pulse_area(env):
    """Time integral of the envelope over its support, in rad."""
    val, _ = quad(lambda t: env.omega0 * math.exp(-0.5 * ((t - env.t0) / env.td) ** 4),
                  env.start, env.stop, epsabs=1e-12 * max(env.omega0 * env.td, 1e-300),
                  epsrel=1e-13, limit=200)
    return val


def calibrate_2pi(td):
    """Peak amplitude (rad/s) whose truncated envelope of width ``td`` has area 2*pi."""
    if not td > 0:
        raise ValueError(f"td must be positive, got {td}")
    return 2 * math.pi / (td * unit_area())


def make_holonomic_pair(sp, td, t0, phi01, omega_2pi_01=None, omega_2pi_12=None):
    """Simultaneous 0-1 and 1-2 tones realizing the drive weights ``sp``.

    The 0-1 tone carries ``|a|`` times its calibrated 2*pi amplitude and the
    phase ``phi01``; the 1-2 tone carries ``|b|`` times its own calibrated
    amplitude at phase zero. Both calibrations default to the ideal
    ``calibrate_2pi(td)`` Rabi rate.
    """
    if not isinstance(sp, ScalingPair):
        sp = ScalingPair(*sp)
    if omega_2pi_01 is None:
        omega_2pi_01 = calibrate_2pi(td)
    if omega_2pi_12 is None:
        omega_2pi_12 = calibrate_2pi(td)
    tone01 = DriveTone(Envelope(abs(sp.a) * omega_2pi_01, t0, td), Transition.T01,
                       phase=float(phi01))
    tone12 = DriveTone(Envelope(abs(sp.b) * omega_2pi_12, t0, td), Transition.T12,
                       phase=0.0)
    return tone01, tone12


def tone_coupling(tone):
    """Coefficient of the |1><0| (0-1 tone) or |1><2| (1-2 tone) element per unit envelope.

    Frame convention: in the double-rotating frame the 0-1 tone with phase p
    enters as ``e^{ip}|1><0|`` and the 1-2 tone as ``-e^{-ip}|1><2|``. The
    |2> basis vector carries a sign so that a 1-2 tone at zero phase gives
    the negative real weight b = -cos(theta/2).
    """
    if tone.transition is Transition.T01:
        return np.exp(1j * tone.phase)
    if tone.transition is Transition.T12:
        return -np.exp(-1j * tone.phase)
    raise ValueError("0-2 tones are two-photon drives; see holoqutrit.twophoton")


_COLUMN = {Transition.T01: 0, Transition.T12: 2}


def tones_hamiltonian(tones, t):
    """Rotating-frame Hamiltonian (rad/s) of simultaneous resonant 0-1/1-2 tones.

    Returns an array of shape ``t.shape + (3, 3)``.
    """
    t = np.asarray(t, dtype=float)
    h = np.zeros(t.shape + (3, 3), dtype=complex)
    for tone in tones:
        c = 0.5 * envelope_value(tone.envelope, t) * tone_coupling(tone)
        col = _COLUMN[tone.transition]
        h[..., 1, col] += c
        h[..., col, 1] += np.conj(c)
    return h
