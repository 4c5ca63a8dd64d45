"""Waves P_t(z), the spectral transform, and the reproducing kernel.

Inside a cell where H is the constant matrix H_c, the row vector
q = (1, -i) sqrt(H_c) is a left eigenvector of J H_c with eigenvalue -i
(this is where det sqrt(H) = 1 enters), so the wave

    P_{2 tau}(z) = e^{i tau z} (Psi+ - i Psi-),   Psi = sqrt(H) Theta,

collapses to a single exponential alpha_c(z) e^{i z t} in wave time
t = 2 tau, with alpha_c(z) = e^{-i z a_c} q_c Theta(a_c, z) frozen at
the cell's left node a_c.  All time integrals downstream (transform,
kernels, isometry, factor columns) use these per-cell amplitudes and
closed-form exponential integrals.
"""

import numpy as np
from scipy.special import sici

from .errors import DomainError, ValidationError
from .hamiltonian import J
from .solver import node_thetas, transfer_matrix


def sqrt_psd_2x2(A):
    """Unique PSD square root of a symmetric PSD 2x2 matrix.

    Closed form (A + sqrt(det) I)/sqrt(tr + 2 sqrt(det)); the zero matrix
    returns zero.
    """
    A = np.asarray(A, dtype=float)
    if A.shape != (2, 2):
        raise ValidationError("expected a 2x2 matrix")
    scale = max(abs(A).max(), 1.0)
    if abs(A[0, 1] - A[1, 0]) > 1e-12 * scale:
        raise DomainError("matrix is not symmetric")
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    tr = A[0, 0] + A[1, 1]
    if min(A[0, 0], A[1, 1]) < -1e-12 * scale or det < -1e-12 * scale ** 2:
        raise DomainError("matrix is not positive semidefinite")
    s = np.sqrt(max(det, 0.0))
    denom = tr + 2.0 * s
    if denom <= 0.0:
        return np.zeros((2, 2))
    return (A + s * np.eye(2)) / np.sqrt(denom)


def _sqrt_cells(cells):
    """Vectorized PSD square roots of a (K, 2, 2) stack."""
    a, b, d = cells[:, 0, 0], cells[:, 0, 1], cells[:, 1, 1]
    det = np.maximum(a * d - b * b, 0.0)
    s = np.sqrt(det)
    denom = a + d + 2.0 * s
    out = np.zeros_like(cells)
    ok = denom > 0
    root = np.sqrt(denom[ok])
    out[ok, 0, 0] = (a[ok] + s[ok]) / root
    out[ok, 0, 1] = b[ok] / root
    out[ok, 1, 0] = b[ok] / root
    out[ok, 1, 1] = (d[ok] + s[ok]) / root
    return out


def _csinc(u):
    """sin(u)/u for complex u with the removable singularity filled."""
    u = np.asarray(u, dtype=complex)
    small = np.abs(u) < 1e-6
    safe = np.where(small, 1.0, u)
    return np.where(small, 1.0 - u * u / 6.0, np.sin(safe) / safe)


def _exp_segment(z, u, v):
    """int_u^v e^{izt} dt = (v-u) e^{iz(u+v)/2} sinc(z(v-u)/2)."""
    z = np.asarray(z, dtype=complex)
    half = 0.5 * (v - u)
    return 2.0 * half * np.exp(1j * z * (u + v) / 2.0) * _csinc(z * half)


def wave_amplitudes(ham, z, t_max=None):
    """Per-cell amplitudes alpha_c(z) with P_t(z) = alpha_c(z) e^{izt}.

    Valid for wave times t in [2 a_c, 2 b_c] (cell c's interval doubled).
    Returns (alphas, wave_nodes): alphas has shape (K,) + z.shape, and
    wave_nodes = 2 * grid nodes, truncated to cells reaching t_max.
    """
    if not ham.unimodular:
        raise DomainError("waves need a unimodular Hamiltonian")
    z = np.asarray(z, dtype=complex)
    starts = ham.grid.nodes[:-1]
    if t_max is None:
        k_use = ham.grid.n_cells
    else:
        if t_max > 2.0 * ham.grid.span + 1e-12:
            raise DomainError(
                f"wave time {t_max:g} beyond 2*span = {2 * ham.grid.span:g}")
        k_use = max(1, int(np.searchsorted(starts, t_max / 2.0, side="left")))

    sub = ham
    if k_use < ham.grid.n_cells:
        from .hamiltonian import Grid, Hamiltonian
        sub = Hamiltonian(Grid(ham.grid.nodes[:k_use + 1]),
                          ham.cells[:k_use], unimodular=True)
    S = _sqrt_cells(ham.cells[:k_use])
    # q_c = (1, -i) sqrt(H_c): row0 - i*row1
    q = S[:, 0, :] - 1j * S[:, 1, :]                     # (k_use, 2)

    flat = z.reshape(-1)
    alphas = np.empty((k_use,) + flat.shape, dtype=complex)
    # chunk z so the (k_use+1, chunk, 2) node sweep stays modest in memory
    chunk = max(1, int(4e6 / max(k_use, 1)))
    a = starts[:k_use, None]
    for lo in range(0, flat.size, chunk):
        zs = flat[lo:lo + chunk]
        thetas, logs = node_thetas(sub, zs, normalize=True)
        arg = -1j * zs[None, :] * a + logs[:k_use]
        if arg.size and np.max(arg.real) > 700.0:
            raise DomainError("wave amplitudes overflow; reduce Im z or span")
        inner = (q[:, None, :] * thetas[:k_use]).sum(axis=-1)
        alphas[:, lo:lo + chunk] = np.exp(arg) * inner
    return alphas.reshape((k_use,) + z.shape), 2.0 * ham.grid.nodes[:k_use + 1]


class KreinWave:
    """Wave sample: value P_t(z) and the components it came from."""

    def __init__(self, t, z, psi_plus, psi_minus, value):
        self.t = t
        self.z = z
        self.psi_plus = psi_plus
        self.psi_minus = psi_minus
        self.value = value

    def __repr__(self):
        return f"KreinWave(t={self.t:g}, z={self.z:g}, value={self.value:g})"


def krein_wave(ham, t, z):
    """P_t(z) = e^{i(t/2)z} (Psi+ - i Psi-) with Psi = sqrt(H) Theta(t/2)."""
    if not ham.unimodular:
        raise DomainError("waves need a unimodular Hamiltonian")
    t = float(t)
    if t < 0 or t > 2.0 * ham.grid.span:
        raise DomainError(f"t = {t:g} outside [0, {2 * ham.grid.span:g}]")
    z = complex(z)
    tau = t / 2.0
    theta = transfer_matrix(ham, tau, z).theta
    cell = ham.grid.cell_index(min(tau, ham.grid.span * (1.0 - 1e-15)))
    S = sqrt_psd_2x2(ham.cells[cell])
    psi = S @ theta
    value = np.exp(1j * z * tau) * (psi[0] - 1j * psi[1])
    return KreinWave(t, z, complex(psi[0]), complex(psi[1]), complex(value))


def _j_pair(theta_z, theta_lam):
    """<J a, b> = sum (J a)_i conj(b_i) for 2-vectors."""
    return ((J @ theta_z) * np.conj(theta_lam)).sum()


def reproducing_kernel(ham, r, z, lam):
    """k_{r,lam}(z) = e^{ir(z - conj lam)/2} <J Theta(r/2, z), Theta(r/2,
    lam)> / (pi (z - conj lam)), with the removable singularity at
    z = conj(lam) filled by a Richardson central difference.
    """
    if r <= 0 or r > 2.0 * ham.grid.span:
        raise DomainError(f"r = {r:g} outside (0, {2 * ham.grid.span:g}]")
    z, lam = complex(z), complex(lam)
    lbar = np.conj(lam)
    delta = z - lbar
    tau = r / 2.0
    th_lam = transfer_matrix(ham, tau, lam).theta

    def numer(zz):
        th = transfer_matrix(ham, tau, zz).theta
        return np.exp(1j * r * (zz - lbar) / 2.0) * _j_pair(th, th_lam)

    if abs(delta) >= 1e-6:
        return complex(numer(z) / (np.pi * delta))
    # N(conj lam) = 0, so the kernel is N'(mid)/pi up to O(delta^2)
    mid = lbar + delta / 2.0
    hstep = 1e-3 * max(1.0, abs(mid))
    d1 = (numer(mid + hstep) - numer(mid - hstep)) / (2.0 * hstep)
    d2 = (numer(mid + hstep / 2) - numer(mid - hstep / 2)) / hstep
    return complex((4.0 * d2 - d1) / (3.0 * np.pi))


def f_mu_apply(ham, f, z_grid, t_max=None):
    """(1/sqrt(2pi)) int f(t) P_t(z) dt for piecewise-constant f.

    f is a HalfLineFunction supported on [0, r] in wave time (tail must
    be absent or zero); the integral is exact per refined cell.
    """
    if f.tail not in (None, 0.0):
        raise DomainError("f must be supported inside its grid")
    r = f.grid.span if t_max is None else float(t_max)
    z = np.asarray(z_grid, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    alphas, wave_nodes = wave_amplitudes(ham, z, t_max=r)
    edges = np.unique(np.concatenate([
        f.grid.nodes, np.clip(wave_nodes, 0.0, r)]))
    edges = edges[edges <= r + 1e-15]
    out = np.zeros(z.shape, dtype=complex)
    for u, v in zip(edges[:-1], edges[1:]):
        if v - u <= 1e-15:
            continue
        mid = 0.5 * (u + v)
        fv = float(f(min(mid, f.grid.span * (1 - 1e-15))))
        if fv == 0.0:
            continue
        c = min(int(np.searchsorted(wave_nodes, mid) - 1), alphas.shape[0] - 1)
        out += fv * alphas[c] * _exp_segment(z, u, v)
    out /= np.sqrt(2.0 * np.pi)
    return complex(out[0]) if scalar else out


def wave_norm_sq(ham, r, z):
    """int_0^r |P_t(z)|^2 dt from the per-cell amplitudes, closed form."""
    z = complex(z)
    alphas, wave_nodes = wave_amplitudes(ham, np.array([z]), t_max=r)
    lo = np.minimum(wave_nodes[:-1], r)
    hi = np.minimum(wave_nodes[1:], r)
    y = 2.0 * z.imag
    if abs(y) < 1e-12:
        seg = hi - lo
    else:
        seg = (np.exp(-y * lo) - np.exp(-y * hi)) / y
    return float(np.sum(np.abs(alphas[:, 0]) ** 2 * seg))


def _plancherel_tail(f, X, w_tail):
    """Exact int_{|x|>X} |F f|^2 w dx for identity waves (P_t = e^{ixt}).

    F f = (1/sqrt(2pi)) sum f_j (e^{ixb_j} - e^{ixa_j})/(ix); expanding
    the square gives integrals int_{|x|>X} e^{ix tau}/x^2 dx with the
    closed form 2 [cos(tau X)/X - |tau| (pi/2 - Si(|tau| X))].
    """
    a = f.grid.nodes[:-1]
    b = f.grid.nodes[1:]
    fv = f.values

    def T(tau):
        tau = np.abs(tau)
        si = sici(tau * X)[0]
        return 2.0 * (np.cos(tau * X) / X - tau * (np.pi / 2.0 - si))

    taus_pp = b[:, None] - b[None, :]
    taus_mm = a[:, None] - a[None, :]
    taus_pm = b[:, None] - a[None, :]
    taus_mp = a[:, None] - b[None, :]
    ff = fv[:, None] * fv[None, :]
    total = np.sum(ff * (T(taus_pp) + T(taus_mm) - T(taus_pm) - T(taus_mp)))
    return w_tail * total / (2.0 * np.pi)


def isometry_residual(ham, mu, f, X=1e3, n_gl=8):
    """| ||F f||^2_{L2(mu), truncated at X} + tail - ||f||^2_{L2} |.

    The window integral is Gauss-Legendre on panels resolving the
    oscillation of |F f|^2; the tail beyond X is exact (via Si) when the
    Hamiltonian is the identity on the support of f and w has an exact
    constant tail inside X, else it is estimated from the asymptotic
    mean of |x F f(x)|^2 over the outer decade of the window.
    """
    mu.require_positive()
    if mu.tail is None:
        raise DomainError("isometry quadrature needs a constant-tail weight")
    r = f.grid.span
    if r > 2.0 * ham.grid.span:
        raise DomainError("f support exceeds the wave range")
    norm_f = float(np.dot(f.grid.widths, f.values ** 2))

    n_panels = int(np.ceil(4.0 * X * max(r, 1.0) / np.pi))
    edges = np.unique(np.concatenate([
        np.linspace(-X, X, n_panels + 1),
        [p for p in mu.breakpoints if -X < p < X], [0.0]]))
    xg, wg = np.polynomial.legendre.leggauss(n_gl)
    mids = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    nodes = (mids[:, None] + half[:, None] * xg[None, :]).ravel()
    wq = (half[:, None] * wg[None, :]).ravel()

    F = f_mu_apply(ham, f, nodes)
    dens = np.asarray(mu(nodes), dtype=float)
    window = float(np.sum(wq * np.abs(F) ** 2 * dens))

    k_use = int(np.searchsorted(ham.grid.nodes[:-1], r / 2.0, side="left"))
    ident = np.allclose(ham.cells[:max(k_use, 1)],
                        np.eye(2), rtol=0.0, atol=1e-13)
    if ident and mu.tail_bound is None and mu.window <= X:
        tail = _plancherel_tail(f, X, mu.tail)
    else:
        outer = np.abs(nodes) >= 0.7 * X
        c_avg = float(np.mean((np.abs(nodes[outer] * F[outer]) ** 2)
                              * dens[outer]))
        tail = 2.0 * c_avg / X
    return abs(window + tail - norm_f)
