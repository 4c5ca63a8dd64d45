"""Triangular factorization of truncated Wiener-Hopf matrices.

The discrete model of the operator with symbol w on a window of length
R is the N x N Toeplitz matrix

    W[j, l] = delta_{jl} + h k((j - l) h),    h = R / N,

with k the kernel of w (Fourier transform of w - 1).  W is the Gram
matrix of the sampled exponentials e_j = sqrt(h/2pi) e^{i x t_j},
t_j = j h, in L2(w dx) over the Nyquist window |x| <= pi/h, up to
aliasing.  The upper factor is assembled by pairing the exponentials
against sampled waves of the Hamiltonian recovered from w, and is
compared against a direct Cholesky oracle.
"""

from dataclasses import dataclass, field

import numpy as np

from .accelerant import accelerant_from_weight
from .errors import DomainError, SpectralPositivityError, ValidationError
from .inverse import inverse_spectral
from .transform import wave_amplitudes


@dataclass
class DiscreteWienerHopf:
    """Truncated discrete Wiener-Hopf matrix with its spectral frame."""

    n: int
    h: float
    matrix: np.ndarray
    symbol_bounds: tuple
    min_eig: float
    max_eig: float

    @property
    def cond(self):
        return self.max_eig / self.min_eig


def build_toeplitz(mu, n, h):
    """Discrete Wiener-Hopf matrix of the weight mu at step h, size n."""
    mu.require_numeric()
    if n < 1 or h <= 0:
        raise ValidationError("need n >= 1 and h > 0")
    if mu.is_constant:
        c = mu.tail
        W = np.eye(n) + (c - 1.0) * np.eye(n)
        lo = hi = c
    else:
        kern = accelerant_from_weight(mu, (n - 1) * h if n > 1 else h, max(n, 2))
        col = h * kern(h * np.arange(n))
        col[0] += 1.0
        from scipy.linalg import toeplitz
        W = toeplitz(col)
        eigs = np.linalg.eigvalsh(W)
        lo, hi = float(eigs[0]), float(eigs[-1])
    if lo <= 0.0:
        raise SpectralPositivityError(
            f"matrix not positive definite (min eigenvalue {lo:.3e}); "
            "the symbol must be bounded away from zero")
    return DiscreteWienerHopf(n, float(h), W, (mu.c1, mu.c2), lo, hi)


def cholesky_oracle(wh):
    """Lower Cholesky factor of the discrete matrix, W = L L^T."""
    try:
        return np.linalg.cholesky(wh.matrix)
    except np.linalg.LinAlgError:
        raise SpectralPositivityError(
            "Cholesky failed: matrix is not positive definite")


def chain_preservation_check(A):
    """max over k of ||(I - P_k) A P_k||_F, P_k = first-k projection.

    Zero iff A maps each leading coordinate block into itself, i.e. is
    upper triangular as stored (time-increasing coordinate order).
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if n < 2:
        return 0.0
    sq = A * A
    colsum_below = np.cumsum(sq[::-1], axis=0)[::-1]   # sum over i >= k
    blocks = np.cumsum(colsum_below, axis=1)            # then over j < k
    leaks = [blocks[k, k - 1] for k in range(1, n)]
    return float(np.sqrt(max(max(leaks), 0.0)))


@dataclass
class FactorReport:
    """Key-value summary of a factorization run."""

    n: int
    h: float
    residual: float
    cond: float
    leakage: float
    vs_cholesky: float
    min_abs_diag: float
    symbol_bounds: tuple
    notes: dict = field(default_factory=dict)

    def __str__(self):
        lines = [
            f"n={self.n}",
            f"h={self.h:.6g}",
            f"residual={self.residual:.6e}",
            f"cond={self.cond:.6e}",
            f"leakage={self.leakage:.6e}",
            f"vs_cholesky={self.vs_cholesky:.6e}",
            f"min_abs_diag={self.min_abs_diag:.6e}",
            f"symbol_bounds={self.symbol_bounds[0]:.6g},{self.symbol_bounds[1]:.6g}",
        ]
        for key, val in self.notes.items():
            lines.append(f"{key}={val:.6e}")
        return "\n".join(lines)


def _factor_quadrature(X, n_nodes_target, breakpoints, gl_order=16):
    """GL panel nodes/weights on [0, X], honoring interior breakpoints."""
    n_panels = max(int(np.ceil(n_nodes_target / gl_order)), 4)
    edges = np.unique(np.concatenate([
        np.linspace(0.0, X, n_panels + 1),
        [p for p in breakpoints if 0.0 < p < X]]))
    xg, wg = np.polynomial.legendre.leggauss(gl_order)
    mids = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    nodes = (mids[:, None] + half[:, None] * xg[None, :]).ravel()
    wq = (half[:, None] * wg[None, :]).ravel()
    return nodes, wq


def factor_via_transform(mu, R, n, oversample=16):
    """Upper triangular factor A with A^T A ~= the discrete matrix.

    Recovers the Hamiltonian of mu on [0, R/2] (n cells, so wave cells
    line up with the discrete times t_j = j R/n), samples the waves
    phi_j = sqrt(h/2pi) P_{t_j} on the Nyquist window, and fills
    A[i, j] = <e_j, phi_i>_{L2(w dx)}.  Rows with negative diagonal are
    sign-flipped (A^T A is unchanged); entries below the diagonal are
    zeroed and their pre-zero mass reported as leakage.
    """
    mu.require_positive()
    if n < 1 or R <= 0:
        raise ValidationError("need n >= 1 and R > 0")
    h = float(R) / n
    wh = build_toeplitz(mu, n, h)

    if mu.is_constant:
        c = mu.tail
        A = np.sqrt(c) * np.eye(n)
        report = FactorReport(n, h, 0.0, 1.0, 0.0, 0.0, float(np.sqrt(c)),
                              (c, c))
        return A, report

    ham = inverse_spectral(mu, R / 2.0, n)
    X = np.pi / h
    nodes, wq = _factor_quadrature(X, oversample * n, mu.breakpoints)
    alphas, wave_nodes = wave_amplitudes(ham, nodes)   # (n, Q)
    t = h * np.arange(n)
    dens = np.asarray(mu(nodes), dtype=float)

    # A = 2 Re int_0^X conj(alpha_i e^{ix t_i}) e^{ix t_j} w(x) dx h/2pi;
    # the integrand is conjugate-even in x, so the half-window suffices.
    phase = np.exp(1j * nodes[None, :] * t[:, None])   # (n, Q)
    B = np.conj(alphas * phase) * (dens * wq)[None, :] * (h / np.pi)
    A = (B @ phase.T).real

    diag = np.diag(A).copy()
    signs = np.where(diag < 0.0, -1.0, 1.0)
    A *= signs[:, None]
    leakage = chain_preservation_check(A)
    A = np.triu(A)

    scale = np.linalg.norm(wh.matrix, 2)
    residual = np.linalg.norm(wh.matrix - A.T @ A, 2) / scale
    L = cholesky_oracle(wh)
    vs_chol = np.linalg.norm(A - L.T, 2) / np.linalg.norm(L, 2)
    report = FactorReport(
        n, h, float(residual), float(np.linalg.cond(A)),
        float(leakage / max(np.linalg.norm(A), 1e-300)),
        float(vs_chol), float(np.abs(np.diag(A)).min()),
        (mu.c1, mu.c2))
    return A, report


def write_matrix(A, path):
    """Write a dense matrix as `#matrix v1` text (one row per line)."""
    A = np.asarray(A, dtype=float)
    with open(path, "w") as fh:
        fh.write(f"#matrix v1 {A.shape[0]} {A.shape[1]}\n")
        for row in A:
            fh.write(" ".join(repr(float(x)) for x in row) + "\n")


def read_matrix(path):
    """Read a `#matrix v1` file back into an ndarray."""
    with open(path) as fh:
        header = fh.readline().split()
        if header[:2] != ["#matrix", "v1"]:
            raise ValidationError(f"{path}: not a #matrix v1 file")
        rows = [np.array([float(x) for x in line.split()])
                for line in fh if line.strip()]
    A = np.vstack(rows)
    if A.shape != (int(header[2]), int(header[3])):
        raise ValidationError(f"{path}: shape mismatch with header")
    return A
