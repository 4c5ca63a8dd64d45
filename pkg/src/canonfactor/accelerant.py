"""Accelerants: the regular part k of the convolution kernel delta + k.

k(t) = (1/2pi) int (w(x) - 1) e^{-ixt} dx, so w - 1 must be integrable;
weights with tail != 1 go through truncate_weight first.  All desk
weights are even, making k real and even; odd weights are rejected
rather than half-supported.
"""

import numpy as np

from .errors import DomainError, UnsupportedFeatureError, ValidationError
from .measures import SpectralMeasure


def truncate_weight(mu, j):
    """Replace w by 1 outside [-j, j]; bounds widen to include 1."""
    if j <= 0:
        raise DomainError("truncation radius must be positive")
    j = float(j)
    if mu.tail == 1.0 and mu.window <= j and mu.tail_bound is None:
        return mu          # already 1 beyond [-j, j]

    def dens(x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) <= j, mu(x), 1.0)

    out = SpectralMeasure(
        dens, min(mu.c1, 1.0), max(mu.c2, 1.0), tail=1.0, window=j,
        label="truncated", params=dict(mu.params, j=j, base=mu.label),
        breakpoints=sorted({-j, j, *(b for b in mu.breakpoints
                                     if -j < b < j)}))
    return out


class Accelerant:
    """Sampled kernel on [0, R] plus optional closed form and band limit."""

    def __init__(self, times, values, closed_form=None, band_limit=None):
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValidationError("times/values must be matching 1-d arrays")
        if times[0] != 0.0 or np.any(np.diff(times) <= 0):
            raise ValidationError("times must start at 0, strictly increase")
        self.times = times
        self.values = values
        self.closed_form = closed_form
        self.band_limit = band_limit

    @property
    def radius(self):
        return float(self.times[-1])

    def __call__(self, t):
        """k(t), even in t; closed form when known, else interpolation."""
        t = np.abs(np.asarray(t, dtype=float))
        if self.closed_form is not None:
            return np.asarray(self.closed_form(t), dtype=float)
        if self.band_limit is not None:
            inside = np.interp(t, self.times, self.values)
            return np.where(t > self.band_limit, 0.0, inside)
        return np.interp(t, self.times, self.values)


def _check_even(mu):
    probe = np.array([0.37, 1.21, 2.9, mu.window * 0.63 + 0.11])
    if not np.allclose(mu(probe), mu(-probe), rtol=0, atol=1e-12):
        raise UnsupportedFeatureError(
            "only even weights are supported (real symmetric accelerant)")


def _numeric_kernel(mu, times):
    """(1/pi) int_0^X (w(x)-1) cos(xt) dx on GL panels resolving cos(x*t)."""
    if mu.tail != 1.0:
        raise DomainError(
            "w - 1 is not integrable (tail != 1); apply truncate_weight")
    X = mu.window
    if mu.tail_bound is not None:
        while mu.tail_deviation(X) * X > 1e-10 and X < 1e6:
            X *= 2.0
    t_max = max(times[-1], 1.0)
    # ~6 nodes per period of the fastest oscillation
    n_panels = int(np.ceil(X * t_max / np.pi)) + len(mu.breakpoints) + 4
    edges = np.unique(np.concatenate([
        np.linspace(0.0, X, n_panels + 1),
        [b for b in np.abs(mu.breakpoints) if 0 < b < X]]))
    xg, wg = np.polynomial.legendre.leggauss(8)
    mids = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    nodes = (mids[:, None] + half[:, None] * xg[None, :]).ravel()
    wq = (half[:, None] * wg[None, :]).ravel()
    dev = (np.asarray(mu(nodes), dtype=float) - 1.0) * wq
    # all sample times at once: values[m] = (1/pi) sum dev * cos(x * t_m)
    return (np.cos(np.outer(times, nodes)) @ dev) / np.pi


def accelerant_from_weight(mu, R, M):
    """Sample k at M uniform points on [0, R]; closed form when available."""
    mu.require_numeric()
    if R <= 0 or M < 2:
        raise DomainError("need R > 0 and at least two sample points")
    times = np.linspace(0.0, float(R), int(M))
    if mu.is_constant:
        if mu.tail != 1.0:
            raise DomainError(
                "w - 1 is not integrable for constant w != 1; truncate first")
        return Accelerant(times, np.zeros_like(times),
                          closed_form=lambda t: np.zeros_like(
                              np.asarray(t, dtype=float)))
    closed = mu.closed_form_accelerant()
    if closed is not None:
        return Accelerant(times, np.asarray(closed(times), dtype=float),
                          closed_form=closed, band_limit=mu._accel_band)
    _check_even(mu)
    return Accelerant(times, _numeric_kernel(mu, times))
