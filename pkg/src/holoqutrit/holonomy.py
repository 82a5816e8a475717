"""Gate algebra of the simultaneously driven three-level ladder.

Two resonant tones weighted by ``a`` (0-1) and ``b`` (1-2) couple only the
bright state to |1>. A cyclic 2*pi evolution leaves the dark state alone and
flips the sign of |1> and the bright state, which acts on the (|0>, |2>)
subspace as the rotation ``n . sigma``.
"""

import math
from dataclasses import dataclass

import numpy as np

from holoqutrit.pulseshape import ScalingPair

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])


@dataclass(frozen=True)
class GateSpec:
    """Holonomic gate angles: polar ``theta`` in [0, pi], azimuth ``phi``."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not -1e-12 <= self.theta <= math.pi + 1e-12:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")

    @classmethod
    def named(cls, name, phi=0.0):
        name = name.upper()
        if name == "NOT":
            return cls(math.pi / 2, phi)
        if name == "HADAMARD":
            return cls(math.pi / 4, phi)
        raise ValueError(f"unknown gate name {name!r}")

    @property
    def axis(self):
        return bloch_axis(self.theta, self.phi)


@dataclass(frozen=True)
class DarkBrightBasis:
    dark: np.ndarray
    bright: np.ndarray


def bloch_axis(theta, phi):
    return np.array([math.sin(theta) * math.cos(phi),
                     math.sin(theta) * math.sin(phi),
                     math.cos(theta)])


def ab_from_angles(g):
    return ScalingPair(math.sin(g.theta / 2) * np.exp(1j * g.phi), -math.cos(g.theta / 2))


def drive_hamiltonian(sp, omega_t):
    """``(omega/2) (a|1><0| + b|1><2| + h.c.)`` in rad/s.

    ``omega_t`` may be a scalar or an array of envelope samples; the result
    has shape ``np.shape(omega_t) + (3, 3)``.
    """
    omega_t = np.asarray(omega_t, dtype=float)
    h = np.zeros(omega_t.shape + (3, 3), dtype=complex)
    half = 0.5 * omega_t
    h[..., 1, 0] = half * sp.a
    h[..., 1, 2] = half * sp.b
    h[..., 0, 1] = half * np.conj(sp.a)
    h[..., 2, 1] = half * np.conj(sp.b)
    return h


def dark_bright(sp):
    a, b = complex(sp.a), complex(sp.b)
    dark = np.array([-b, 0, a], dtype=complex)
    bright = np.array([np.conj(a), 0, np.conj(b)], dtype=complex)
    return DarkBrightBasis(dark, bright)


def basis_change_T(sp):
    """Unitary T taking (|0>, |1>, |2>) amplitudes to (|D>, |1>, |B>) amplitudes."""
    a, b = complex(sp.a), complex(sp.b)
    return np.array([[-np.conj(b), 0, np.conj(a)],
                     [0, 1, 0],
                     [a, 0, b]], dtype=complex)


def cyclic_unitary_dark_bright():
    """The 2*pi cyclic evolution in the (D, 1, B) basis."""
    return np.diag([1.0, -1.0, -1.0]).astype(complex)


def holonomic_unitary3(sp):
    """Closed form of the cyclic-evolution unitary in the (|0>, |1>, |2>) basis."""
    a, b = complex(sp.a), complex(sp.b)
    c = abs(b) ** 2 - abs(a) ** 2
    return np.array([[c, 0, -2 * b * np.conj(a)],
                     [0, -1, 0],
                     [-2 * a * np.conj(b), 0, -c]], dtype=complex)


def holonomic_unitary2(g):
    """``n . sigma`` on (|0>, |2>) for the axis of ``g``."""
    ct, st = math.cos(g.theta), math.sin(g.theta)
    return np.array([[ct, np.exp(-1j * g.phi) * st],
                     [np.exp(1j * g.phi) * st, -ct]], dtype=complex)


def n_dot_sigma(n):
    return np.tensordot(np.asarray(n, dtype=float), PAULI, axes=1)


def commutator(n1, n2):
    """``[n1 . sigma, n2 . sigma]`` for unit 3-vectors."""
    for n in (n1, n2):
        if abs(np.linalg.norm(n) - 1.0) > 1e-12:
            raise ValueError("axes must be unit vectors")
    s1, s2 = n_dot_sigma(n1), n_dot_sigma(n2)
    return s1 @ s2 - s2 @ s1
