import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import axis_of, unitary_by_conjugation

from holoqutrit import holonomy, qcore
from holoqutrit.pulseshape import ScalingPair

thetas = st.floats(0, math.pi)
phis = st.floats(0, 2 * math.pi)


@settings(max_examples=80, deadline=None)
@given(thetas, phis)
def test_closed_form_matches_conjugation(theta, phi):
    sp = holonomy.ab_from_angles(holonomy.GateSpec(theta, phi))
    u3 = holonomy.holonomic_unitary3(sp)
    assert qcore.frobenius(u3, unitary_by_conjugation(sp.a, sp.b)) < 1e-13
    t = holonomy.basis_change_T(sp)
    assert qcore.unitarity_error(t) < 1e-13
    assert qcore.frobenius(t.conj().T @ holonomy.cyclic_unitary_dark_bright() @ t, u3) < 1e-13


@settings(max_examples=80, deadline=None)
@given(thetas, phis)
def test_block_is_n_dot_sigma_involution(theta, phi):
    g = holonomy.GateSpec(theta, phi)
    u2 = holonomy.holonomic_unitary2(g)
    assert qcore.frobenius(u2, holonomy.n_dot_sigma(axis_of(theta, phi))) < 1e-14
    assert qcore.frobenius(u2 @ u2, np.eye(2)) < 1e-14
    u3 = holonomy.holonomic_unitary3(holonomy.ab_from_angles(g))
    assert qcore.frobenius(qcore.block_02(u3), u2) < 1e-14
    assert u3[1, 1] == -1


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 1), phis)
def test_dark_state_decoupled_and_bright_coupled(abs_a, phi):
    sp = ScalingPair.from_magnitude(abs_a, phi)
    db = holonomy.dark_bright(sp)
    h = holonomy.drive_hamiltonian(sp, 2.0)
    assert np.linalg.norm(h @ db.dark) < 1e-14
    assert abs(np.vdot(qcore.ket(1), h @ db.bright)) == pytest.approx(1.0)
    assert abs(np.vdot(db.dark, db.bright)) < 1e-14


def test_drive_hamiltonian_vectorized():
    sp = ScalingPair.from_magnitude(0.3)
    h = holonomy.drive_hamiltonian(sp, np.array([0.0, 1.0, 2.0]))
    assert h.shape == (3, 3, 3) and np.all(h[0] == 0)
    assert np.allclose(h[2], 2 * h[1])


def test_named_gates():
    x = holonomy.holonomic_unitary2(holonomy.GateSpec.named("NOT"))
    hd = holonomy.holonomic_unitary2(holonomy.GateSpec.named("hadamard"))
    assert np.allclose(x, [[0, 1], [1, 0]])
    assert np.allclose(hd, np.array([[1, 1], [1, -1]]) / math.sqrt(2))
    with pytest.raises(ValueError):
        holonomy.GateSpec.named("CNOT")


def test_gate_spec_rejects_bad_theta():
    with pytest.raises(ValueError):
        holonomy.GateSpec(4.0)


@settings(max_examples=50, deadline=None)
@given(thetas, phis, thetas, phis)
def test_commutator_identity(t1, p1, t2, p2):
    n1, n2 = axis_of(t1, p1), axis_of(t2, p2)
    comm = holonomy.commutator(n1, n2)
    assert qcore.frobenius(comm, 2j * holonomy.n_dot_sigma(np.cross(n1, n2))) < 1e-14


def test_commutator_requires_unit_axes():
    with pytest.raises(ValueError):
        holonomy.commutator([2, 0, 0], [0, 1, 0])
