"""Time-ordered propagation of the driven qutrit.

Both integrators hold the Hamiltonian constant over each step at its value
at the step midpoint and exponentiate exactly, which makes them second order
in ``dt`` and exactly norm (trace) preserving.

A Hamiltonian is any callable ``H_of_t(times) -> array (len(times), 3, 3)``
in rad/s. Callables that only accept scalars are also accepted and sampled
point by point.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from holoqutrit import qcore

_LINDBLAD_CHUNK = 2048


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on ``[t_start, t_end]``.

    The requested ``dt`` is shrunk, if needed, so that an integer number of
    steps covers the interval exactly.
    """

    t_start: float
    t_end: float
    dt: float

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if (self.t_end - self.t_start) / self.dt < 1 - 1e-9:
            raise ValueError("grid must contain at least one step")

    @property
    def n_steps(self):
        return max(1, math.ceil((self.t_end - self.t_start) / self.dt - 1e-9))

    @property
    def step(self):
        return (self.t_end - self.t_start) / self.n_steps

    @property
    def edges(self):
        return self.t_start + self.step * np.arange(self.n_steps + 1)

    @property
    def midpoints(self):
        return self.t_start + self.step * (np.arange(self.n_steps) + 0.5)


@dataclass(frozen=True)
class DecoherenceParams:
    """Relaxation and pure dephasing times in s; ``math.inf`` switches a channel off."""

    T1_10: float = math.inf
    T1_21: float = math.inf
    Tphi: float = math.inf

    def __post_init__(self):
        for name in ("T1_10", "T1_21", "Tphi"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def closed(cls):
        return cls()

    @classmethod
    def from_t1_t2(cls, T1, T2, T1_21=None):
        """Transmon convention: 1->2 decay twice as fast, dephasing from T2.

        The pure dephasing rate is ``1/T2 - 1/(2 T1)``, clamped at zero.
        """
        if T1_21 is None:
            T1_21 = T1 / 2
        gamma_phi = 1.0 / T2 - 1.0 / (2.0 * T1)
        Tphi = 1.0 / gamma_phi if gamma_phi > 0 else math.inf
        return cls(T1, T1_21, Tphi)

    @property
    def is_closed(self):
        return math.isinf(self.T1_10) and math.isinf(self.T1_21) and math.isinf(self.Tphi)

    def collapse_operators(self):
        ops = []
        if not math.isinf(self.T1_10):
            ops.append(math.sqrt(1.0 / self.T1_10) * np.outer(qcore.ket(0), qcore.ket(1)))
        if not math.isinf(self.T1_21):
            ops.append(math.sqrt(1.0 / self.T1_21) * np.outer(qcore.ket(1), qcore.ket(2)))
        if not math.isinf(self.Tphi):
            ops.append(math.sqrt(2.0 / self.Tphi) * np.diag([0.0, 1.0, 2.0]).astype(complex))
        return ops


@dataclass
class TrajectoryRecord:
    """Time-sliced populations and states of one run.

    ``states`` holds state vectors (n, 3), density matrices (n, 3, 3) or,
    for propagator runs, cumulative unitaries (n, 3, 3) whose column j is the
    evolved basis state |j>. ``residuals`` is the parallel-transport residual
    |<psi_0|H|psi_2>| in rad/s (NaN where it is not defined).
    """

    times: np.ndarray
    populations: np.ndarray
    states: np.ndarray
    residuals: np.ndarray
    monitors: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.times)

    @property
    def final_populations(self):
        return self.populations[-1]

    def concat(self, other):
        """Append ``other``, dropping its first sample if it repeats our last time."""
        skip = 1 if len(self) and len(other) and np.isclose(other.times[0], self.times[-1],
                                                             rtol=0, atol=1e-15) else 0
        states = other.states[skip:]
        mine = self.states
        if mine.ndim != states.ndim:
            # mixing pure and mixed snapshots: promote vectors to projectors
            if mine.ndim == 2:
                mine = np.einsum("ni,nj->nij", mine, mine.conj())
            else:
                states = np.einsum("ni,nj->nij", states, states.conj())
        monitors = dict(self.monitors)
        for k, v in other.monitors.items():
            monitors[k] = max(monitors.get(k, v), v) if "error" in k else min(monitors.get(k, v), v)
        return TrajectoryRecord(
            np.concatenate([self.times, other.times[skip:]]),
            np.concatenate([self.populations, other.populations[skip:]]),
            np.concatenate([mine, states]),
            np.concatenate([self.residuals, other.residuals[skip:]]),
            monitors,
        )

    def rows(self):
        for t, p, r in zip(self.times, self.populations, self.residuals):
            yield t * 1e9, p[0], p[1], p[2], r

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["time_ns", "p0", "p1", "p2", "residual"])
            for row in self.rows():
                w.writerow([repr(float(x)) for x in row])


def sample_hamiltonian(H_of_t, times):
    times = np.asarray(times, dtype=float)
    try:
        h = np.asarray(H_of_t(times), dtype=complex)
    except (TypeError, ValueError):
        # callable only understands scalar times
        h = None
    if h is not None and h.shape == times.shape + (3, 3):
        return h
    return np.stack([np.asarray(H_of_t(float(t)), dtype=complex) for t in times])


def _record_indices(n_steps, record_every):
    if record_every is None or record_every <= 0:
        return np.array([0, n_steps])
    idx = np.arange(0, n_steps + 1, record_every)
    if idx[-1] != n_steps:
        idx = np.append(idx, n_steps)
    return idx


def _pt_residual(u, h):
    """|<psi_0|H|psi_2>| with psi_j the columns of ``u``."""
    return np.abs(np.einsum("...i,...ij,...j->...", u[..., :, 0].conj(), h, u[..., :, 2]))


def propagate_unitary(H_of_t, grid, psi0=None, record_every=1, keep_propagators=False):
    """Time-ordered propagator over ``grid`` and the trajectory of ``psi0``.

    Parameters
    ----------
    H_of_t : callable
        Hamiltonian in rad/s.
    grid : TimeGrid
    psi0 : array_like, optional
        Initial state for the recorded trajectory, |0> by default.
    record_every : int
        Record a snapshot every this many steps (the final time is always
        recorded). ``0`` records only the start and end.
    keep_propagators : bool
        Store the cumulative unitaries instead of the evolved ``psi0``.

    Returns
    -------
    U_total : ndarray (3, 3)
    record : TrajectoryRecord
    """
    psi0 = qcore.ket(0) if psi0 is None else np.asarray(psi0, dtype=complex)
    n = grid.n_steps
    h_mid = sample_hamiltonian(H_of_t, grid.midpoints)
    steps = qcore.expm_skew_hermitian(h_mid, grid.step)

    rec_idx = _record_indices(n, record_every)
    snaps = np.empty((len(rec_idx), 3, 3), dtype=complex)
    u = np.eye(3, dtype=complex)
    j = 0
    if rec_idx[0] == 0:
        snaps[0] = u
        j = 1
    for k in range(n):
        u = steps[k] @ u
        if j < len(rec_idx) and rec_idx[j] == k + 1:
            snaps[j] = u
            j += 1

    times = grid.edges[rec_idx]
    h_rec = sample_hamiltonian(H_of_t, times)
    residuals = _pt_residual(snaps, h_rec)
    if keep_propagators:
        states = snaps
        pops = qcore.populations(snaps @ psi0)
    else:
        states = snaps @ psi0
        pops = qcore.populations(states)
    err = qcore.unitarity_error(u)
    if err > qcore.UNITARY_TOL:
        raise ArithmeticError(f"propagator lost unitarity: {err:.3e}")
    record = TrajectoryRecord(times, pops, states, residuals,
                              {"unitarity_error": err})
    return u, record


def parallel_transport_residual(H_of_t, grid):
    """Largest |<psi_0(t)|H(t)|psi_2(t)>| over the grid, in rad/s."""
    _, record = propagate_unitary(H_of_t, grid, record_every=1, keep_propagators=True)
    return float(np.max(record.residuals))


def lindblad_generator(h, collapse_ops):
    """Superoperator acting on row-major flattened density matrices.

    ``h`` may be a stack ``(..., 3, 3)``; the result has shape ``(..., 9, 9)``.
    """
    h = np.asarray(h, dtype=complex)
    eye = np.eye(3)
    gen = -1j * (np.einsum("...ij,kl->...ikjl", h, eye)
                 - np.einsum("ij,...lk->...ikjl", eye, h))
    gen = gen.reshape(h.shape[:-2] + (9, 9))
    dissipator = np.zeros((9, 9), dtype=complex)
    for c in collapse_ops:
        cdc = c.conj().T @ c
        dissipator += (np.kron(c, c.conj())
                       - 0.5 * np.kron(cdc, eye)
                       - 0.5 * np.kron(eye, cdc.T))
    return gen + dissipator


def propagate_lindblad(H_of_t, dec, rho0, grid, record_every=1):
    """Master-equation trajectory of ``rho0`` under ``H_of_t`` and the decay channels of ``dec``."""
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape == (3,):
        rho0 = qcore.density(rho0)
    ops = dec.collapse_operators()
    n = grid.n_steps
    rec_idx = _record_indices(n, record_every)
    snaps = np.empty((len(rec_idx), 3, 3), dtype=complex)
    r = rho0.reshape(9)
    j = 0
    if rec_idx[0] == 0:
        snaps[0] = rho0
        j = 1
    mids = grid.midpoints
    for lo in range(0, n, _LINDBLAD_CHUNK):
        hi = min(n, lo + _LINDBLAD_CHUNK)
        h = sample_hamiltonian(H_of_t, mids[lo:hi])
        if np.all(h == h[0]):
            props = np.broadcast_to(expm(lindblad_generator(h[0], ops) * grid.step),
                                    (hi - lo, 9, 9))
        else:
            props = expm(lindblad_generator(h, ops) * grid.step)
        for k in range(hi - lo):
            r = props[k] @ r
            if j < len(rec_idx) and rec_idx[j] == lo + k + 1:
                snaps[j] = r.reshape(3, 3)
                j += 1

    pops = qcore.populations(snaps)
    trace_err = float(np.max(np.abs(np.trace(snaps, axis1=1, axis2=2) - np.trace(rho0))))
    herm = 0.5 * (snaps + qcore.dagger(snaps))
    min_eig = float(np.min(np.linalg.eigvalsh(herm)))
    monitors = {"trace_error": trace_err, "min_eigenvalue": min_eig}
    return TrajectoryRecord(grid.edges[rec_idx], pops, snaps,
                            np.full(len(rec_idx), np.nan), monitors)
