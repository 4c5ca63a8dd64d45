"""Discretized Wiener-Hopf operators and their triangular factorization."""

import numpy as np
import pytest

from canonfactor import (SpectralPositivityError, build_toeplitz,
                         chain_preservation_check, cholesky_oracle,
                         constant_weight, factor_via_transform, read_matrix,
                         sinc_bump_weight, step_weight, write_matrix)


def test_build_toeplitz_constant():
    wh = build_toeplitz(constant_weight(2.0), 6, 0.5)
    assert np.allclose(wh.matrix, 2.0 * np.eye(6))
    assert wh.symbol_bounds == (2.0, 2.0)
    assert wh.cond == 1.0


def test_build_toeplitz_step_structure():
    wh = build_toeplitz(step_weight(2.0, 1.0), 32, 0.2)
    A = wh.matrix
    assert np.allclose(A, A.T)
    # Toeplitz: constant diagonals
    assert np.allclose(np.diff(np.diag(A, 1)), 0.0, atol=1e-15)
    assert wh.min_eig > 0
    # symbol bounds bracket the spectrum (Grenander-Szego)
    assert wh.min_eig >= wh.symbol_bounds[0] - 1e-10
    assert wh.max_eig <= wh.symbol_bounds[1] + 1e-10


def test_cholesky_oracle_hand_value():
    class Plain:
        matrix = np.array([[2.0, 1.0], [1.0, 2.0]])
    L = cholesky_oracle(Plain())
    ref = np.array([[np.sqrt(2.0), 0.0],
                    [1.0 / np.sqrt(2.0), np.sqrt(1.5)]])
    assert np.allclose(L, ref, atol=1e-15)


def test_cholesky_oracle_rejects_indefinite():
    class Plain:
        matrix = np.array([[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(SpectralPositivityError):
        cholesky_oracle(Plain())


def test_chain_preservation_check_values():
    eps = 1e-3
    A = np.array([[1.0, 5.0], [eps, 1.0]])
    assert abs(chain_preservation_check(A) - eps) < 1e-18
    assert chain_preservation_check(np.triu(np.ones((5, 5)))) == 0.0
    B = np.zeros((3, 3))
    B[2, 0] = 3.0
    B[2, 1] = 4.0
    assert abs(chain_preservation_check(B) - 5.0) < 1e-15


def test_factor_constant_weight_is_scaled_identity():
    A, rep = factor_via_transform(constant_weight(4.0), 4.0, 8)
    assert np.allclose(A, 2.0 * np.eye(8))
    assert rep.residual < 1e-14
    assert rep.leakage == 0.0


def test_factor_step_weight_small():
    A, rep = factor_via_transform(step_weight(2.0, 1.0), 9.6, 96)
    assert rep.residual < 1e-3
    assert rep.vs_cholesky < 1e-2
    # rep.leakage is the below-diagonal mass *before* it is zeroed, a
    # discretization diagnostic; ~1e-5 at this coarse n
    assert rep.leakage < 1e-4
    assert np.array_equal(A, np.triu(A))    # stored factor is triangular
    assert rep.cond ** 2 < 1.2 * 2.0
    assert rep.min_abs_diag > 0


def test_factor_bump_weight_small(bump_mu):
    A, rep = factor_via_transform(bump_mu, 9.6, 96)
    assert rep.residual < 1e-3
    assert rep.vs_cholesky < 2e-2
    assert rep.cond ** 2 < 1.2 * 1.5


def test_factor_report_is_parsable():
    _, rep = factor_via_transform(constant_weight(1.0), 2.0, 4)
    text = str(rep)
    assert "residual=" in text
    assert "leakage=" in text
    assert "cond=" in text


def test_vanishing_weight_degenerates():
    # w = 0 on [-1/2, 1/2]: the discrete operator stays positive at any
    # finite size but its floor collapses as the grid refines
    lows = [build_toeplitz(step_weight(0.0, 0.5), n, 0.05).min_eig
            for n in (32, 64, 128)]
    assert lows[0] > lows[1] > lows[2] > 0


def test_matrix_file_round_trip(tmp_path):
    rng = np.random.default_rng(19)
    A = rng.normal(size=(7, 5))
    path = tmp_path / "m.txt"
    write_matrix(A, path)
    back = read_matrix(path)
    assert np.array_equal(back, A)
