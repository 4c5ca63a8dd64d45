"""Weyl function, boundary spectral density, and the Szego functional.

The half-line limit m(z) = lim Phi^-/Theta^- is certified through the
nested Weyl disks: at each grid node the candidate values fill a disk of
radius |det M| / (2 |Im(Theta^- conj(Theta^+))|), and the disks shrink
as the sweep advances.  Both the radius and the candidate value are
ratios of same-scaled matrix entries, so per-step renormalization of M
(needed once Im z * t is large) cancels exactly.

Boundary densities are Poisson-smoothed values Im m(x + i*eps) pushed to
eps -> 0 by polynomial extrapolation along a geometric eps ladder; the
ladder floor is tied to the certified disk diameter at the grid end.
"""

import numpy as np
from scipy.integrate import quad

from .errors import ConvergenceError, DomainError
from .solver import propagator


def _cell_substeps(width, im_max):
    # cap |Im z| * step so cell propagators stay well inside float range
    return max(1, int(np.ceil(im_max * width / 200.0)))


def weyl_sweep(ham, z, tol=1e-12):
    """March the transfer matrix, tracking Weyl-disk values and diameters.

    Returns (m, diameter) shaped like z: the disk value at the node with
    the smallest diameter seen so far, and that diameter.  Stops early
    once every point is certified below tol.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag <= 0):
        raise DomainError("Weyl function needs Im z > 0")
    im_max = float(np.max(z.imag))

    M = np.zeros(z.shape + (2, 2), dtype=complex)
    M[..., 0, 0] = 1.0
    M[..., 1, 1] = 1.0
    best_d = np.full(z.shape, np.inf)
    best_m = np.full(z.shape, 1j, dtype=complex)

    for cell, width in zip(ham.cells, ham.grid.widths):
        nsub = _cell_substeps(width, im_max)
        P = propagator(cell, width / nsub, z)
        for _ in range(nsub):
            M = P @ M
            scale = np.max(np.abs(M), axis=(-2, -1), keepdims=True)
            M /= scale
        tp, tm = M[..., 0, 0], M[..., 1, 0]
        fm = M[..., 1, 1]
        det = tp * fm - M[..., 0, 1] * tm
        denom = 2.0 * np.abs((tm * np.conj(tp)).imag)
        with np.errstate(divide="ignore", invalid="ignore"):
            diam = np.where(denom > 0, 2.0 * np.abs(det) / denom, np.inf)
            m_here = np.where(np.abs(tm) > 0, fm / tm, np.inf + 0j)
        take = diam < best_d
        best_d = np.where(take, diam, best_d)
        best_m = np.where(take, m_here, best_m)
        if np.all(best_d <= tol):
            break
    return best_m, best_d


def weyl_function(ham, z, tol=1e-12):
    """m(z) once the Weyl disk has diameter <= tol, else ConvergenceError."""
    scalar = np.isscalar(z) or getattr(z, "ndim", 0) == 0
    m, d = weyl_sweep(ham, np.atleast_1d(np.asarray(z, dtype=complex)), tol)
    worst = float(np.max(d))
    if worst > tol:
        err = ConvergenceError(
            f"Weyl disk diameter {worst:.3e} > tol {tol:.1e} at grid end "
            f"(span {ham.grid.span:g}); extend the Hamiltonian or relax tol")
        err.last_residual = worst
        raise err
    return complex(m.ravel()[0]) if scalar else m


def herglotz_b_residual(ham, y_max):
    """Im m(iy)/y at y = y_max; tends to the linear coefficient b = 0."""
    if y_max <= 0:
        raise DomainError("y_max must be positive")
    m = weyl_function(ham, 1j * float(y_max), tol=1e-10)
    return float(np.imag(m)) / float(y_max)


def boundary_values(ham, x, eps=2.4, ratio=0.75, eps_min=None):
    """Extrapolate m(x + i*eps) to the real axis along a geometric ladder.

    Returns (m0, spread): the extrapolated boundary value and the size of
    the extrapolation step at which the diagonal stabilized (a stability
    indicator, not a rigorous bound).  eps_min defaults to 3/span, where
    the certified disk diameter at the grid end is ~e^{-6}.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    span = ham.grid.span
    if eps_min is None:
        eps_min = 3.0 / span
    if eps <= eps_min:
        raise DomainError("ladder start eps must exceed the eps_min floor")
    ladder = [float(eps)]
    while ladder[-1] * ratio >= eps_min:
        ladder.append(ladder[-1] * ratio)

    tab = [weyl_sweep(ham, x + 1j * e, tol=0.0)[0].astype(complex)
           for e in ladder]
    n = len(ladder)
    diag = [tab[0].copy()]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            ei, eij = ladder[i], ladder[i - j]
            tab[i] = (eij * tab[i] - ei * tab[i - 1]) / (eij - ei)
        diag.append(tab[j].copy())
    diag = np.stack(diag)                       # (n, nx)
    steps = np.abs(np.diff(diag, axis=0))       # (n-1, nx)
    pick = np.argmin(steps, axis=0) + 1
    m0 = np.take_along_axis(diag, pick[None, :], axis=0)[0]
    spread = np.take_along_axis(steps, (pick - 1)[None, :], axis=0)[0]
    return m0, spread


def spectral_density(ham, x, eps=2.4, **ladder_kw):
    """Boundary density Im m(x + i0) via the extrapolated ladder."""
    scalar = np.isscalar(x) or getattr(x, "ndim", 0) == 0
    m0, _ = boundary_values(ham, x, eps=eps, **ladder_kw)
    w = np.imag(m0)
    return float(w.ravel()[0]) if scalar else w


# -- Szego functional ---------------------------------------------------------

def szego_K(mu, z):
    """log of the Poisson mean of mu minus the Poisson mean of log w.

    Nonnegative by Jensen; exactly zero for constant weights.  Constant
    tails are handled in closed form: only the deviation w - tail is
    integrated numerically, so no truncation correction is needed.
    Isolated zeros of the density are fine (log w stays integrable);
    densities negative on a set of positive measure are not.
    """
    mu.require_numeric()
    if mu.c1 < 0:
        raise DomainError("szego_K needs a nonnegative density")
    z = complex(z)
    if z.imag <= 0:
        raise DomainError("szego_K needs Im z > 0")
    if mu.is_constant:
        return 0.0
    if mu.tail is None:
        raise DomainError("szego_K needs a constant-tail weight")
    tail = mu.tail
    u, v = z.real, z.imag

    def poisson(t):
        return (v / np.pi) / ((t - u) ** 2 + v ** 2)

    X = max(mu.window, abs(u) + 50.0 * v, 50.0)
    if mu.tail_bound is not None:
        # push X out until the residual tail deviation is negligible
        while mu.tail_deviation(X) * 2.0 * v / (np.pi * X) > 1e-13 and X < 1e7:
            X *= 2.0
    # Integrate each breakpoint segment separately.  A single qagp call
    # over the full (possibly huge) range lets the extrapolation table
    # settle on a wrong limit near kinks while reporting a tiny error
    # estimate; per-segment calls do not.
    W = min(X, max(mu.window, abs(u) + 50.0 * v, 50.0))
    pts = {p for p in mu.breakpoints if -X < p < X}
    pts.update((-W, W))
    # geometric sub-edges on the far tails keep each segment's dynamic
    # range small enough for quad to converge without a huge limit
    e = W
    while e * 4.0 < X:
        e *= 4.0
        pts.update((-e, e))
    edges = [-X] + sorted(pts) + [X]

    def segmented(f):
        total = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            if hi > lo:
                total += quad(f, lo, hi, limit=800,
                              epsabs=1e-13, epsrel=1e-12)[0]
        return total

    dev1 = segmented(lambda t: (float(mu(t)) - tail) * poisson(t))
    dev2 = segmented(lambda t: np.log(float(mu(t)) / tail) * poisson(t))
    return float(np.log(tail + dev1) - (np.log(tail) + dev2))
