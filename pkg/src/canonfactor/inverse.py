"""Inverse spectral problem: from a bounded weight w to a unimodular
Hamiltonian on [0, R] whose boundary density reproduces w.

Route: the Toeplitz matrix I + eta*k((j-l)eta) is exactly the Gram
matrix of the sampled exponentials sqrt(eta/2pi) e^{i x t_j} in
L2(w dx) (Poisson summation over the Nyquist window), so its Cholesky
factor performs the causal orthonormalization that defines the wave
family.  Solving L y = 1 evaluates the orthonormalized waves at x = 0,
and the wave value at time 2t determines the first column of sqrt(H) at
time t; the second column follows from symmetry and det = 1.

The wave grid oversamples the Hamiltonian grid twice (wave times live on
[0, 2R]), so each H cell owns two wave samples.
"""

import numpy as np
from scipy.linalg import LinAlgError, cholesky, solve_triangular, toeplitz

from .accelerant import accelerant_from_weight
from .errors import DomainError, SpectralPositivityError
from .hamiltonian import Grid, Hamiltonian


class InversionReport:
    """Diagnostics attached to an inverse_spectral run."""

    def __init__(self, n_cells, eta, min_eig, max_eig, max_det_dev):
        self.n_cells = n_cells
        self.eta = eta
        self.min_eig = min_eig
        self.max_eig = max_eig
        self.cond = max_eig / min_eig if min_eig > 0 else np.inf
        self.max_det_dev = max_det_dev
        self.ill_conditioned = self.cond > 1e12

    def __repr__(self):
        return (f"InversionReport(n={self.n_cells}, eta={self.eta:.4g}, "
                f"eig=[{self.min_eig:.4g}, {self.max_eig:.4g}], "
                f"cond={self.cond:.4g})")


def _cells_from_wave(p):
    """Per-cell sqrt(H) from wave values at x = 0, then H = S @ S.

    p[i] = a11 - i*a21 of sqrt(H) on cell i; a22 completes det = 1, which
    is the det-normalization gauge (no further rescaling needed).
    """
    a11 = np.real(p)
    a12 = -np.imag(p)
    if np.any(a11 <= 0):
        raise SpectralPositivityError(
            "recovered wave has a nonpositive diagonal entry; the weight "
            "data is inconsistent with a positive definite kernel")
    a22 = (1.0 + a12 * a12) / a11
    S = np.empty((len(p), 2, 2))
    S[:, 0, 0] = a11
    S[:, 0, 1] = a12
    S[:, 1, 0] = a12
    S[:, 1, 1] = a22
    return S @ S


def wave_values_at_zero(mu, R, N):
    """y_j ~ P_{t_j}(0) on the wave grid t_j = j*eta, eta = R/N, plus eta.

    Exposed separately so tests can probe the discretization directly.
    """
    mu.require_positive()
    if R <= 0 or N < 2:
        raise DomainError("need R > 0 and N >= 2 cells")
    eta = float(R) / int(N)
    M = 2 * int(N)
    kern = accelerant_from_weight(mu, R=(M - 1) * eta, M=M)
    col = eta * kern(eta * np.arange(M))
    col[0] += 1.0
    W = toeplitz(col)
    try:
        L = cholesky(W, lower=True)
    except LinAlgError as exc:
        raise SpectralPositivityError(
            "discretized Wiener-Hopf matrix is not positive definite; "
            "the weight must stay bounded away from zero") from exc
    y = solve_triangular(L, np.ones(M), lower=True)
    return y, eta, W


def inverse_spectral(mu, R, N, report=False):
    """Unimodular Hamiltonian on [0, R] with boundary density ~ w.

    Constant weights are handled in closed form (no kernel: w = c gives
    H = diag(1/c, c)); everything else goes through the sampled
    accelerant, which requires w = 1 outside a finite window (use
    truncate_weight first when it is not).
    """
    mu.require_positive()
    if R <= 0 or N < 2:
        raise DomainError("need R > 0 and N >= 2 cells")
    N = int(N)
    if mu.is_constant:
        c = mu.c1
        ham = Hamiltonian.constant([[1.0 / c, 0.0], [0.0, c]],
                                   span=float(R), n_cells=N)
        if report:
            # the operator is c times the identity; its spectrum is {c}
            return ham, InversionReport(N, float(R) / N, c, c, 0.0)
        return ham
    if mu.tail != 1.0:
        raise DomainError(
            "weight tail differs from 1; apply truncate_weight first")

    y, eta, W = wave_values_at_zero(mu, R, N)
    # H cell i covers [i, i+1]*R/N, i.e. wave times [2i, 2i+2]*eta.  The
    # discrete orthogonal system lags the continuous wave by half a step
    # (y_j sits at t_j + eta/2), so the mean of the two samples inside a
    # cell is the unbiased midpoint value; it restores second-order
    # round-trip accuracy where either sample alone is first-order.
    p = 0.5 * (y[0::2] + y[1::2])
    cells = _cells_from_wave(p.astype(complex))
    grid = Grid(np.linspace(0.0, float(R), N + 1))
    ham = Hamiltonian(grid, cells, unimodular=True)
    if report:
        eigs = np.linalg.eigvalsh(W)
        rep = InversionReport(N, eta, float(eigs[0]), float(eigs[-1]),
                              float(np.max(np.abs(ham.dets - 1.0))))
        return ham, rep
    return ham
