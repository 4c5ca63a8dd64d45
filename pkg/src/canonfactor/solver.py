"""Transfer matrices for the canonical system J dM/dt = z H(t) M, M(0) = I.

With J = [[0,-1],[1,0]] the system reads M' = -z J H M.  On a cell where
H is the constant matrix C, the generator G = J C is trace free with
G^2 = -det(C) I, so the propagator over a step of width s is the closed
form

    exp(-z s G) = cos(z s d) I - z s * sinch(z s d) G,     d = sqrt(det C),

valid for every complex z including the degenerate cells det C = 0.  All
entries of M(t, z) are entire functions of z, and det M(t, z) = 1 because
tr G = 0.
"""

import numpy as np

from .errors import DomainError
from .hamiltonian import J

_GL_CACHE = {}


def gauss_legendre(order, a, b):
    """Nodes and weights on [a, b], cached per order."""
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    x, w = _GL_CACHE[order]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def sinch(x):
    """sin(x)/x, series below |x| = 1e-4 to avoid cancellation at 0."""
    x = np.asarray(x, dtype=complex)
    small = np.abs(x) < 1e-4
    out = np.empty_like(x)
    xs = x[small]
    out[small] = 1.0 - xs * xs / 6.0 + xs ** 4 / 120.0
    xb = x[~small]
    out[~small] = np.sin(xb) / xb
    return out


def propagator(cell, width, z):
    """exp(-z * width * J * cell) for one constant cell.

    Parameters
    ----------
    cell : (2, 2) symmetric PSD matrix
    width : positive step
    z : complex scalar or array

    Returns
    -------
    ndarray, shape z.shape + (2, 2)
    """
    z = np.asarray(z, dtype=complex)
    d = np.sqrt(max(cell[0, 0] * cell[1, 1] - cell[0, 1] * cell[1, 0], 0.0))
    G = J @ cell
    theta = z * width * d
    c = np.cos(theta)
    s = z * width * sinch(theta)
    out = np.multiply.outer(c, np.eye(2)) - np.multiply.outer(s, G)
    return out


class TransferMatrix:
    """Value M(t, z) of the fundamental solution.

    ``theta`` is the first column (the solution with value (1, 0) at t = 0),
    ``phi`` the second.  For an array of z the matrix has shape (nz, 2, 2).
    """

    def __init__(self, t, z, matrix):
        self.t = t
        self.z = z
        self.m = matrix

    @property
    def theta(self):
        return self.m[..., :, 0]

    @property
    def phi(self):
        return self.m[..., :, 1]

    @property
    def det(self):
        m = self.m
        return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def transfer_matrix(ham, t, z):
    """M(t, z) by multiplying exact cell propagators left to right.

    t must lie inside the grid; the final partial cell is handled with the
    same closed form.  z may be a scalar or an array.
    """
    if t < 0 or t > ham.grid.span + 1e-12 * max(1.0, ham.grid.span):
        raise DomainError(f"t = {t} outside grid span [0, {ham.grid.span}]")
    t = min(t, ham.grid.span)
    z = np.asarray(z, dtype=complex)
    M = np.broadcast_to(np.eye(2, dtype=complex), z.shape + (2, 2)).copy()
    nodes = ham.grid.nodes
    for k in range(ham.grid.n_cells):
        if nodes[k] >= t:
            break
        step = min(t, nodes[k + 1]) - nodes[k]
        M = propagator(ham.cells[k], step, z) @ M
    return TransferMatrix(t, z, M)


def node_thetas(ham, z, normalize=False):
    """First-column solutions Theta(t_k, z) at every grid node.

    Returns (thetas, logscale): thetas has shape (K+1,) + z.shape + (2,).
    With ``normalize`` each row is rescaled to sup-norm ~1 and the
    accumulated log of the removed factors is returned per z (otherwise
    logscale is zeros).  Scale-invariant quantities (Weyl ratios, disk
    radii) can be read off the normalized rows directly.
    """
    z = np.asarray(z, dtype=complex)
    theta = np.zeros(z.shape + (2,), dtype=complex)
    theta[..., 0] = 1.0
    logscale = np.zeros(z.shape)
    out = [theta.copy()]
    scales = [logscale.copy()]
    widths = ham.grid.widths
    for k in range(ham.grid.n_cells):
        # sub-step so cosh growth stays far from overflow inside one cell
        grow = np.max(np.abs(np.imag(z))) * widths[k]
        nsub = max(1, int(np.ceil(grow / 200.0)))
        step = widths[k] / nsub
        for _ in range(nsub):
            P = propagator(ham.cells[k], step, z)
            theta = np.einsum("...ij,...j->...i", P, theta)
            if normalize:
                mag = np.maximum(np.abs(theta[..., 0]), np.abs(theta[..., 1]))
                mag = np.where(mag > 0, mag, 1.0)
                theta = theta / mag[..., None]
                logscale = logscale + np.log(mag)
        out.append(theta.copy())
        scales.append(logscale.copy())
    return np.stack(out), np.stack(scales)


def j_energy_residual(ham, r, z, order=8, rtol=1e-10, max_order=64):
    """Defect of the energy identity at time r:

        <J Theta(r), Theta(r)> = 2i Im(z) * int_0^r <H Theta, Theta> dt.

    The right side is integrated per cell with Gauss-Legendre quadrature,
    doubling the order until the relative change drops below ``rtol``.
    Returns |LHS - RHS|.
    """
    if r < 0 or r > ham.grid.span:
        raise DomainError(f"r = {r} outside grid span")
    z = complex(z)
    Mr = transfer_matrix(ham, r, z)
    th = Mr.theta
    lhs = np.vdot(th, J @ th)   # sum (J th)_j conj(th_j)

    def rhs(p):
        total = 0.0 + 0.0j
        nodes = ham.grid.nodes
        for k in range(ham.grid.n_cells):
            a = nodes[k]
            if a >= r:
                break
            b = min(r, nodes[k + 1])
            x, w = gauss_legendre(p, a, b)
            M0 = transfer_matrix(ham, a, z).m
            Hc = ham.cells[k]
            for xi, wi in zip(x, w):
                th_i = (propagator(Hc, xi - a, z) @ M0)[:, 0]
                total += wi * np.vdot(th_i, Hc @ th_i)
        return 2j * z.imag * total

    prev = rhs(order)
    while order < max_order:
        order *= 2
        cur = rhs(order)
        if abs(cur - prev) <= rtol * max(1.0, abs(cur)):
            prev = cur
            break
        prev = cur
    return abs(lhs - prev)
