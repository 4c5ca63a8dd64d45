"""Spectral measures: absolutely continuous weights w(x) dx on the line.

Only measures with empty singular part are supported by the numeric
operations; the field exists so data carrying a singular component fails
loudly instead of silently dropping it.

The desk weights used throughout tests and demos are closed forms:

    constant     w = c
    step         w = inner on [-a, a], outer elsewhere
    cosine-bump  w = 1 + A cos^2(pi x / (2a)) on [-a, a]
    sinc-bump    w = 1 + A (sin(Bx)/(Bx))^2        (band-limited accelerant)

Each closed form knows its accelerant k(t) = (1/2pi) int (w-1) e^{-ixt} dx
exactly when w - 1 is integrable.
"""

import numpy as np

from .errors import DomainError, UnsupportedFeatureError, ValidationError


def _sinc(u):
    """sin(u)/u with the removable singularity filled in."""
    u = np.asarray(u, dtype=float)
    return np.sinc(u / np.pi)


class SpectralMeasure:
    """Absolutely continuous measure w(x) dx with density bounds.

    Parameters
    ----------
    density : callable
        Vectorized x -> w(x).
    c1, c2 : float
        Essential bounds 0 < c1 <= w <= c2 (c1 = 0 allowed for degenerate
        test weights; most operations require c1 > 0).
    tail : float or None
        Limit value of w at +-infinity, None if not constant-tail.
    window : float
        Half width X such that |w(x) - tail| <= tail_bound(X) for |x| >= X.
    tail_bound : callable or None
        Decreasing bound on |w - tail| beyond the window; None means the
        deviation vanishes identically outside the window.
    herglotz_a, herglotz_b : float
        Recorded coefficients of the integral representation; b must be >= 0.
        Kept for completeness, unused by the numeric operations.
    """

    def __init__(self, density, c1, c2, tail=None, window=0.0,
                 tail_bound=None, singular=None, herglotz_a=0.0,
                 herglotz_b=0.0, label="custom", params=None,
                 breakpoints=()):
        if not (0 <= c1 <= c2):
            raise ValidationError(f"need 0 <= c1 <= c2, got c1={c1}, c2={c2}")
        if herglotz_b < 0:
            raise ValidationError("herglotz_b must be nonnegative")
        self._density = density
        self.c1 = float(c1)
        self.c2 = float(c2)
        self.tail = None if tail is None else float(tail)
        self.window = float(window)
        self.tail_bound = tail_bound
        self.singular = list(singular) if singular else []
        self.herglotz_a = float(herglotz_a)
        self.herglotz_b = float(herglotz_b)
        self.label = label
        self.params = dict(params or {})
        self.breakpoints = [float(b) for b in breakpoints]  # kinks of w
        self._accel = None       # optional closed-form accelerant callable
        self._accel_band = None  # support radius of k when finite

    def __call__(self, x):
        return np.asarray(self._density(np.asarray(x, dtype=float)))

    def require_numeric(self):
        if self.singular:
            raise UnsupportedFeatureError(
                "measure carries a singular part; numeric operations "
                "support purely absolutely continuous measures")

    def require_positive(self):
        self.require_numeric()
        if self.c1 <= 0:
            raise DomainError("operation needs a density bounded away from 0")

    @property
    def is_constant(self):
        return self.label == "constant"

    def closed_form_accelerant(self):
        """Callable k(t) when known exactly, else None."""
        return self._accel

    def tail_deviation(self, X):
        """Upper bound for |w(x) - tail| on |x| >= X."""
        if self.tail is None:
            raise DomainError("measure has no constant tail")
        if X >= self.window:
            return 0.0 if self.tail_bound is None else float(self.tail_bound(X))
        return max(self.c2 - self.tail, self.tail - self.c1)

    def __repr__(self):
        ps = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"SpectralMeasure({self.label}{', ' + ps if ps else ''})"


# -- closed-form families ----------------------------------------------------

def constant_weight(c):
    if c <= 0:
        raise DomainError("constant weight must be positive")
    m = SpectralMeasure(lambda x: np.full_like(x, c, dtype=float), c, c,
                        tail=c, window=0.0, label="constant", params={"c": c})
    return m


def step_weight(inner=2.0, half_width=1.0, outer=1.0):
    """w = inner on [-a, a], outer outside."""
    if inner < 0 or outer <= 0 or half_width <= 0:
        raise DomainError("step weight needs inner >= 0, outer > 0, a > 0")
    a = float(half_width)

    def dens(x):
        return np.where(np.abs(x) <= a, float(inner), float(outer))

    m = SpectralMeasure(dens, min(inner, outer), max(inner, outer),
                        tail=outer, window=a, label="step",
                        params={"inner": inner, "half_width": a,
                                "outer": outer},
                        breakpoints=(-a, a))
    if outer == 1.0:
        amp = inner - 1.0
        m._accel = lambda t: amp * a / np.pi * _sinc(a * np.asarray(t, float))
    return m


def cosine_bump_weight(amplitude=1.0, half_width=1.0):
    """w = 1 + A cos^2(pi x / (2a)) for |x| <= a, 1 outside."""
    if half_width <= 0:
        raise DomainError("half_width must be positive")
    A, a = float(amplitude), float(half_width)
    b = np.pi / a

    def dens(x):
        x = np.asarray(x, float)
        return 1.0 + np.where(np.abs(x) <= a,
                              A * np.cos(np.pi * x / (2 * a)) ** 2, 0.0)

    # (1/2pi) int_{-a}^{a} A cos^2(pi x/2a) e^{-ixt} dx, written with
    # cos^2 = (1 + cos(bx))/2 so every singularity is a removable sinc one
    def accel(t):
        t = np.asarray(t, dtype=float)
        s = _sinc(a * t) + 0.5 * (_sinc(a * (b - t)) + _sinc(a * (b + t)))
        return (A * a / (2 * np.pi)) * s

    m = SpectralMeasure(dens, min(1.0, 1.0 + A), max(1.0, 1.0 + A),
                        tail=1.0, window=a, label="cosine-bump",
                        params={"amplitude": A, "half_width": a},
                        breakpoints=(-a, a))
    m._accel = accel
    return m


def sinc_bump_weight(amplitude=0.5, scale=1.0):
    """w = 1 + A (sin(Bx)/(Bx))^2; accelerant is the triangle on [-2B, 2B]."""
    A, B = float(amplitude), float(scale)
    if B <= 0:
        raise DomainError("scale must be positive")

    def dens(x):
        return 1.0 + A * _sinc(B * np.asarray(x, float)) ** 2

    def accel(t):
        t = np.asarray(t, dtype=float)
        return (A / (2 * B)) * np.clip(1.0 - np.abs(t) / (2 * B), 0.0, None)

    m = SpectralMeasure(dens, min(1.0, 1.0 + A), max(1.0, 1.0 + A),
                        tail=1.0, window=200.0 / B,
                        tail_bound=lambda X: abs(A) / (B * X) ** 2,
                        label="sinc-bump", params={"amplitude": A, "scale": B})
    m._accel = accel
    m._accel_band = 2 * B   # k vanishes beyond this
    return m


def sampled_weight(x, w, tail=1.0):
    """Piecewise-linear interpolant of samples, constant ``tail`` outside.

    ``tail=None`` extends by the edge samples instead and leaves the
    measure without a declared tail, so entropy-style functionals that
    need one will refuse it.
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    if x.ndim != 1 or x.shape != w.shape or x.size < 2:
        raise ValidationError("need matching 1-d sample arrays, length >= 2")
    if not np.all(np.diff(x) > 0):
        raise ValidationError("sample abscissae must be strictly increasing")
    if np.any(w < 0):
        raise ValidationError("density samples must be nonnegative")

    lo = float(w[0] if tail is None else tail)
    hi = float(w[-1] if tail is None else tail)

    def dens(q):
        return np.interp(q, x, w, left=lo, right=hi)

    ext = (lo, hi) if tail is None else (tail,)
    c1 = float(min(w.min(), *ext))
    c2 = float(max(w.max(), *ext))
    return SpectralMeasure(dens, c1, c2, tail=tail,
                           window=float(max(abs(x[0]), abs(x[-1]))),
                           label="sampled", params={"n": x.size},
                           breakpoints=x)


WEIGHT_FAMILIES = {
    "constant": constant_weight,
    "step": step_weight,
    "cosine-bump": cosine_bump_weight,
    "sinc-bump": sinc_bump_weight,
}


def weight_by_name(name, **params):
    try:
        fam = WEIGHT_FAMILIES[name]
    except KeyError:
        raise DomainError(
            f"unknown weight family {name!r}; know {sorted(WEIGHT_FAMILIES)}")
    return fam(**params)


# -- file format: '#weight v1', rows 'x w(x)' --------------------------------

_WEIGHT_HEADER = "#weight v1"


def write_weight(measure, path, x):
    """Sample the density on abscissae x and write the tabular format."""
    x = np.asarray(x, dtype=float)
    w = measure(x)
    lines = [_WEIGHT_HEADER]
    lines += [f"{repr(float(a))} {repr(float(b))}" for a, b in zip(x, w)]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_weight(path, tail=1.0):
    with open(path) as fh:
        raw = [ln.strip() for ln in fh if ln.strip()]
    if not raw or raw[0] != _WEIGHT_HEADER:
        raise ValidationError(f"{path}: missing '{_WEIGHT_HEADER}' header")
    xs, ws = [], []
    for ln in raw[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValidationError(f"{path}: expected 2 columns, got {ln!r}")
        xs.append(float(parts[0])); ws.append(float(parts[1]))
    return sampled_weight(xs, ws, tail=tail)
