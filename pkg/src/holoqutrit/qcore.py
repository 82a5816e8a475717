"""Small dense linear algebra for a single qutrit.

States are plain ``numpy`` arrays: a pure state is a complex vector of shape
``(3,)`` in the basis (|0>, |1>, |2>), a mixed state or operator is a complex
``(3, 3)`` matrix. Hamiltonians are always given in angular-frequency units
(rad/s), i.e. already divided by hbar.
"""

import numpy as np

DIM = 3

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10


class NotHermitianError(ValueError):
    pass


def ket(level):
    """Basis vector |level> as a complex array."""
    v = np.zeros(DIM, dtype=complex)
    v[level] = 1.0
    return v


def normalize(psi):
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return psi / norm


def density(psi):
    """Projector |psi><psi| of a (normalized) pure state."""
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def populations(state):
    """Level populations (p0, p1, p2) of a pure or mixed state.

    Works on a single state or on a stack of states; the last axis (pure) or
    last two axes (mixed) carry the qutrit.
    """
    state = np.asarray(state)
    if state.shape[-2:] == (DIM, DIM):
        return np.real(np.diagonal(state, axis1=-2, axis2=-1)).copy()
    return np.abs(state) ** 2


def is_hermitian(m, tol=HERMITIAN_TOL):
    m = np.asarray(m)
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    return np.max(np.abs(m - dagger(m)), initial=0.0) <= tol * scale


def unitarity_error(u):
    """Frobenius norm of U^dagger U - I."""
    u = np.asarray(u)
    return float(np.linalg.norm(dagger(u) @ u - np.eye(u.shape[-1])))


def expm_skew_hermitian(h, dt):
    """Return exp(-i h dt) for Hermitian ``h``.

    Uses the spectral decomposition of ``h`` so the result is unitary to
    machine precision for any step size. ``h`` may be a stack of matrices with
    shape ``(..., 3, 3)``; ``dt`` broadcasts against the leading axes.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise NotHermitianError("generator is not Hermitian")
    # symmetrize away round-off before eigh, which only reads one triangle
    h = 0.5 * (h + dagger(h))
    w, v = np.linalg.eigh(h)
    phase = np.exp(-1j * w * np.asarray(dt, dtype=float)[..., None])
    return (v * phase[..., None, :]) @ dagger(v)


def frobenius(a, b=None):
    a = np.asarray(a)
    if b is not None:
        a = a - np.asarray(b)
    return float(np.linalg.norm(a))


def embed_02(u2):
    """Embed a 2x2 operator on (|0>, |2>) into the qutrit, identity on |1>."""
    u2 = np.asarray(u2, dtype=complex)
    u = np.eye(DIM, dtype=complex)
    idx = np.ix_([0, 2], [0, 2])
    u[idx] = u2
    return u


def block_02(u3):
    """The (|0>, |2>) block of a qutrit operator."""
    return np.asarray(u3)[np.ix_([0, 2], [0, 2])]
