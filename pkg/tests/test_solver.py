"""Transfer-matrix solver against closed forms and structural properties."""

import numpy as np
import pytest

from canonfactor import (Hamiltonian, j_energy_residual, node_thetas,
                         random_unimodular, transfer_matrix)


def test_free_system_is_rotation():
    ham = Hamiltonian.identity(8.0, 8)
    zs = np.linspace(-4.0, 4.0, 17)
    for t in (0.0, 0.5, 3.75, 8.0):
        M = transfer_matrix(ham, t, zs).m
        assert np.allclose(M[..., 0, 0], np.cos(zs * t), atol=5e-15)
        assert np.allclose(M[..., 0, 1], np.sin(zs * t), atol=5e-15)
        assert np.allclose(M[..., 1, 0], -np.sin(zs * t), atol=5e-15)


def test_constant_diagonal_cell_closed_form():
    # H = diag(2, 1/2): M(t,z) = [[cos zt, sin(zt)/2], [-2 sin zt, cos zt]]
    ham = Hamiltonian.constant([[2.0, 0.0], [0.0, 0.5]], span=3.0)
    for z in (0.7, 1.3 + 0.4j, 2j):
        for t in (0.4, 1.0, 3.0):
            M = transfer_matrix(ham, t, z).m
            zt = z * t
            ref = np.array([[np.cos(zt), 0.5 * np.sin(zt)],
                            [-2.0 * np.sin(zt), np.cos(zt)]])
            assert np.max(np.abs(M - ref)) < 1e-12 * max(1.0, np.abs(ref).max())


def test_interior_times_continuous():
    rng = np.random.default_rng(5)
    ham = random_unimodular(rng, 4, span=4.0)
    z = 1.1 + 0.3j
    assert np.allclose(transfer_matrix(ham, 0.0, z).m, np.eye(2))
    # M(t, z) is continuous across cell boundaries
    for node in ham.grid.nodes[1:-1]:
        left = transfer_matrix(ham, node - 1e-9, z).m
        right = transfer_matrix(ham, node + 1e-9, z).m
        assert np.max(np.abs(left - right)) < 1e-7
    assert abs(transfer_matrix(ham, 3.3, z).det - 1.0) < 1e-12


def test_unimodularity_seeded_sweep():
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(30):
        ham = random_unimodular(rng, 8, span=float(rng.uniform(3.0, 10.0)))
        zs = rng.uniform(-3, 3, 4) + 1j * rng.uniform(-0.4, 0.4, 4)
        for t in rng.uniform(0.0, ham.grid.span, 3):
            dev = np.max(np.abs(transfer_matrix(ham, t, zs).det - 1.0))
            worst = max(worst, float(dev))
    assert worst < 1e-10


def test_theta_phi_columns_and_shapes():
    ham = Hamiltonian.identity(2.0, 2)
    zs = np.array([1j, 2.0, -1.0 + 0.5j])
    tm = transfer_matrix(ham, 1.5, zs)
    assert tm.theta.shape == (3, 2)
    assert tm.phi.shape == (3, 2)
    assert np.allclose(tm.theta[:, 0], np.cos(1.5 * zs))
    assert np.allclose(tm.phi[:, 1], np.cos(1.5 * zs))


def test_node_thetas_normalization_consistent():
    rng = np.random.default_rng(23)
    ham = random_unimodular(rng, 5, span=5.0)
    z = np.array([0.5 + 0.8j, 2j])
    raw, _ = node_thetas(ham, z)
    nrm, logscale = node_thetas(ham, z, normalize=True)
    rebuilt = nrm * np.exp(logscale)[..., None]
    assert np.allclose(rebuilt, raw, rtol=1e-12)


def test_j_energy_residual_small():
    rng = np.random.default_rng(29)
    for _ in range(5):
        ham = random_unimodular(rng, 4, span=3.0)
        z = complex(rng.uniform(-1, 1), rng.uniform(0.2, 1.0))
        assert j_energy_residual(ham, ham.grid.span, z) < 1e-8
