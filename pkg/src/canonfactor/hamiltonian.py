"""Grids, Hamiltonians, and their structural operations.

A Hamiltonian here is a piecewise-constant map t -> H(t) on [0, T] with
2x2 real symmetric positive semidefinite cells.  The signature matrix is
fixed once for the whole package:

    J = [[0, -1],
         [1,  0]]

and every formula downstream (transfer matrices, Weyl limits, waves) is
derived consistently with this choice.
"""

import numpy as np

from .errors import DomainError, ValidationError

# Fixed sign convention; J^2 = -I, J^{-1} = -J = J^T.
J = np.array([[0.0, -1.0], [1.0, 0.0]])
J.setflags(write=False)

DET_TOL = 1e-9          # unimodular cells: |det - 1| below this
PSD_TOL = 1e-12         # PSD slack on the determinant


class Grid:
    """Strictly increasing breakpoints 0 = t_0 < t_1 < ... < t_K.

    Cells are the half-open intervals [t_k, t_{k+1}); the function value on
    the last cell also serves for t = t_K.
    """

    def __init__(self, nodes):
        nodes = np.asarray(nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValidationError("grid needs at least two nodes")
        if nodes[0] != 0.0:
            raise ValidationError("grid must start at t = 0")
        if not np.all(np.diff(nodes) > 0):
            raise ValidationError("grid nodes must be strictly increasing")
        if not np.all(np.isfinite(nodes)):
            raise ValidationError("grid nodes must be finite")
        nodes.setflags(write=False)
        self.nodes = nodes

    @property
    def n_cells(self):
        return self.nodes.size - 1

    @property
    def widths(self):
        return np.diff(self.nodes)

    @property
    def span(self):
        return float(self.nodes[-1])

    def cell_index(self, t):
        """Index of the cell containing t (last cell closed on the right)."""
        if t < 0 or t > self.nodes[-1]:
            raise DomainError(f"t = {t} outside grid [0, {self.nodes[-1]}]")
        k = int(np.searchsorted(self.nodes, t, side="right") - 1)
        return min(k, self.n_cells - 1)

    def __eq__(self, other):
        return isinstance(other, Grid) and np.array_equal(self.nodes, other.nodes)

    def __repr__(self):
        return f"Grid({self.n_cells} cells on [0, {self.span:g}])"


class Hamiltonian:
    """Piecewise-constant 2x2 symmetric PSD matrix function on a grid.

    Parameters
    ----------
    grid : Grid
    cells : array_like, shape (K, 2, 2)
        One symmetric PSD matrix per grid cell.
    unimodular : bool
        Declare det H(t) = 1 per cell; validated on construction.
    """

    def __init__(self, grid, cells, unimodular=False):
        if not isinstance(grid, Grid):
            grid = Grid(grid)
        cells = np.asarray(cells, dtype=float)
        if cells.shape != (grid.n_cells, 2, 2):
            raise ValidationError(
                f"cells shape {cells.shape} does not match grid with "
                f"{grid.n_cells} cells")
        cells.setflags(write=False)
        self.grid = grid
        self.cells = cells
        self.unimodular = bool(unimodular)
        report = validate(self)
        if not report.ok:
            raise ValidationError("; ".join(report.issues))

    # -- constructors ----------------------------------------------------

    @classmethod
    def identity(cls, span, n_cells=1):
        g = Grid(np.linspace(0.0, span, n_cells + 1))
        return cls(g, np.tile(np.eye(2), (n_cells, 1, 1)), unimodular=True)

    @classmethod
    def constant(cls, matrix, span, n_cells=1, unimodular=None):
        m = np.asarray(matrix, dtype=float)
        if unimodular is None:
            unimodular = abs(np.linalg.det(m) - 1.0) <= DET_TOL
        g = Grid(np.linspace(0.0, span, n_cells + 1))
        return cls(g, np.tile(m, (n_cells, 1, 1)), unimodular=unimodular)

    @classmethod
    def from_entries(cls, nodes, h1, h, h2, unimodular=False):
        h1 = np.asarray(h1, float); h = np.asarray(h, float); h2 = np.asarray(h2, float)
        cells = np.stack(
            [np.stack([h1, h], axis=-1), np.stack([h, h2], axis=-1)], axis=-2)
        return cls(Grid(nodes), cells, unimodular=unimodular)

    # -- views ------------------------------------------------------------

    @property
    def h1(self):
        return self.cells[:, 0, 0]

    @property
    def h(self):
        return self.cells[:, 0, 1]

    @property
    def h2(self):
        return self.cells[:, 1, 1]

    @property
    def dets(self):
        return self.h1 * self.h2 - self.h * self.h

    def at(self, t):
        """Cell matrix at time t."""
        return self.cells[self.grid.cell_index(t)]

    # -- structural operations --------------------------------------------

    def dual(self):
        """Dual Hamiltonian J^T H J (swaps h1 <-> h2 and flips h)."""
        cells = np.einsum("ij,kjl,lm->kim", J.T, self.cells, J)
        return Hamiltonian(self.grid, cells, unimodular=self.unimodular)

    def dilate(self, y):
        """Time rescaling t -> H(t / y): grid nodes multiply by y.

        Cell matrices are untouched, so PSD/unimodularity and cell
        eigenvalues are preserved exactly.
        """
        if not np.isfinite(y) or y <= 0:
            raise DomainError(f"dilation factor must be positive, got {y}")
        return Hamiltonian(Grid(self.grid.nodes * y), self.cells,
                           unimodular=self.unimodular)

    def sqrt_cells(self):
        """Per-cell symmetric PSD square roots, shape (K, 2, 2).

        Closed form: sqrt(A) = (A + sqrt(det A) I) / sqrt(tr A + 2 sqrt(det A)).
        """
        from .transform import sqrt_psd_2x2
        return np.stack([sqrt_psd_2x2(c) for c in self.cells])

    def __eq__(self, other):
        return (isinstance(other, Hamiltonian)
                and self.grid == other.grid
                and np.array_equal(self.cells, other.cells)
                and self.unimodular == other.unimodular)

    def __repr__(self):
        tag = "unimodular, " if self.unimodular else ""
        return f"Hamiltonian({tag}{self.grid.n_cells} cells on [0, {self.grid.span:g}])"


def random_unimodular(rng, n_cells, span):
    """Random unimodular Hamiltonian for property tests.

    Cell widths are uniformly jittered; entries are built as
    h1 = e^u, h2 = (1 + h^2)/h1 so that det = 1 holds to rounding.
    """
    widths = rng.uniform(0.5, 1.5, n_cells)
    nodes = np.concatenate([[0.0], np.cumsum(widths)])
    nodes *= span / nodes[-1]
    h1 = np.exp(rng.uniform(-0.8, 0.8, n_cells))
    h = rng.uniform(-0.6, 0.6, n_cells)
    h2 = (1.0 + h * h) / h1
    return Hamiltonian.from_entries(nodes, h1, h, h2, unimodular=True)


class ValidationReport:
    def __init__(self, ok, issues, max_det_deviation):
        self.ok = ok
        self.issues = issues
        self.max_det_deviation = max_det_deviation

    def __bool__(self):
        return self.ok


def validate(ham):
    """Check symmetry, PSD-ness and (if declared) unimodularity per cell.

    Returns a ValidationReport rather than raising, so callers can decide.
    """
    issues = []
    c = ham.cells
    if not np.allclose(c[:, 0, 1], c[:, 1, 0], rtol=0, atol=0):
        issues.append("cells must be exactly symmetric")
    if np.any(c[:, 0, 0] < -PSD_TOL) or np.any(c[:, 1, 1] < -PSD_TOL):
        issues.append("negative diagonal entry (not PSD)")
    dets = c[:, 0, 0] * c[:, 1, 1] - c[:, 0, 1] * c[:, 1, 0]
    if np.any(dets < -PSD_TOL):
        bad = int(np.argmin(dets))
        issues.append(f"cell {bad} has det = {dets[bad]:.3g} < 0 (not PSD)")
    max_dev = float(np.max(np.abs(dets - 1.0))) if dets.size else 0.0
    if ham.unimodular and max_dev > DET_TOL:
        bad = int(np.argmax(np.abs(dets - 1.0)))
        issues.append(
            f"declared unimodular but cell {bad} has det = {dets[bad]:.12g}")
    return ValidationReport(not issues, issues, max_dev)


# -- file format ------------------------------------------------------------
#
#   #canon-hamiltonian v1
#   t_start t_end h1 h h2        (one row per cell, full decimal precision)

_HAM_HEADER = "#canon-hamiltonian v1"


def _fmt(x):
    # shortest decimal string that round-trips the float64 exactly
    return repr(float(x))


def write_hamiltonian(ham, path):
    lines = [_HAM_HEADER]
    n = ham.grid.nodes
    for k in range(ham.grid.n_cells):
        c = ham.cells[k]
        lines.append(" ".join(_fmt(v) for v in
                              (n[k], n[k + 1], c[0, 0], c[0, 1], c[1, 1])))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_hamiltonian(path, unimodular=None):
    with open(path) as fh:
        raw = [ln.strip() for ln in fh if ln.strip()]
    if not raw or raw[0] != _HAM_HEADER:
        raise ValidationError(f"{path}: missing '{_HAM_HEADER}' header")
    starts, ends, cells = [], [], []
    for ln in raw[1:]:
        parts = ln.split()
        if len(parts) != 5:
            raise ValidationError(f"{path}: expected 5 columns, got {ln!r}")
        t0, t1, h1, h, h2 = (float(p) for p in parts)
        starts.append(t0); ends.append(t1)
        cells.append([[h1, h], [h, h2]])
    nodes = np.array(starts + [ends[-1]])
    if not np.array_equal(nodes[1:-1], np.array(ends[:-1])):
        raise ValidationError(f"{path}: cell intervals do not tile the grid")
    cells = np.array(cells)
    if unimodular is None:
        dets = cells[:, 0, 0] * cells[:, 1, 1] - cells[:, 0, 1] ** 2
        unimodular = bool(np.all(np.abs(dets - 1.0) <= DET_TOL))
    return Hamiltonian(Grid(nodes), cells, unimodular=unimodular)
