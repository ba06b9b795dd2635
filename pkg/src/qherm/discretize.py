"""Finite representations of x, p, f(x) and g(p) on one-dimensional grids.

Conventions: hbar = 1 and ``p = -i d/dx``. Periodic grids use the discrete
Fourier frequencies ``k_j = 2 pi j / (x_max - x_min)`` for
``j = -n/2, ..., n/2 - 1``; Dirichlet grids use finite differences.
"""
from dataclasses import dataclass
from math import pi
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import (DimensionMismatchError, NonFiniteSampleError,
                     UnderResolvedBasisError)
from .linalg import as_matrix

BOUNDARIES = ("periodic", "dirichlet")
BASES = ("position", "fourier", "positive_momentum", "abstract")


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n_points: int
    boundary: str = "periodic"

    def __post_init__(self):
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ValueError("grid bounds must be finite")
        if not self.x_max > self.x_min:
            raise ValueError(f"x_max ({self.x_max}) must exceed x_min ({self.x_min})")
        if int(self.n_points) != self.n_points or self.n_points < 8:
            raise ValueError(f"n_points must be an integer >= 8, got {self.n_points}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")

    @property
    def length(self):
        return self.x_max - self.x_min

    @property
    def spacing(self):
        if self.boundary == "periodic":
            return self.length / self.n_points
        return self.length / (self.n_points + 1)

    @property
    def points(self):
        j = np.arange(self.n_points)
        if self.boundary == "dirichlet":
            j = j + 1
        return self.x_min + self.spacing * j

    @property
    def frequencies(self):
        """Fourier frequencies in ascending (symmetric) order."""
        n = self.n_points
        j = np.arange(-(n // 2), n - n // 2)
        return 2 * pi * j / self.length

    @property
    def k_max(self):
        return float(np.abs(self.frequencies).max())

    def require_periodic(self, what):
        if self.boundary != "periodic":
            raise ValueError(f"{what} needs a periodic grid, got {self.boundary}")


@dataclass(frozen=True)
class OperatorRep:
    """A matrix tagged with the grid and basis it acts on."""
    matrix: np.ndarray
    grid: Optional[Grid] = None
    basis: str = "position"

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")
        object.__setattr__(self, "matrix", as_matrix(self.matrix))
        if self.basis in ("position", "fourier"):
            if self.grid is None:
                raise ValueError(f"{self.basis} basis requires a grid")
            n = self.grid.n_points
            if self.matrix.shape != (n, n):
                raise DimensionMismatchError(
                    f"matrix shape {self.matrix.shape} does not match grid size {n}")

    @property
    def n(self):
        return self.matrix.shape[0]

    def like(self, matrix):
        """Same grid and basis, new matrix."""
        return OperatorRep(matrix, self.grid, self.basis)

    def __matmul__(self, other):
        if isinstance(other, OperatorRep):
            check_compatible(self, other)
            return self.like(self.matrix @ other.matrix)
        return self.matrix @ other


def check_compatible(*reps):
    first = reps[0]
    for rep in reps[1:]:
        if rep.matrix.shape[1] != first.matrix.shape[0] or rep.basis != first.basis \
                or rep.grid != first.grid:
            raise DimensionMismatchError(
                f"incompatible operators: {first.basis}{first.matrix.shape} vs "
                f"{rep.basis}{rep.matrix.shape}")


def _sample(f, points, label="x"):
    # overflow is reported below as a non-finite sample, not as a warning
    with np.errstate(all="ignore"):
        values = np.asarray(f(points), dtype=complex)
    if values.shape == ():
        values = np.full(points.shape, complex(values))
    bad = ~np.isfinite(values)
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        raise NonFiniteSampleError(f"{label}={float(points[j])!r}", complex(values[j]))
    return values


def fourier_matrix(grid):
    """Unitary DFT ``F`` with ``(F psi)_k = sum_j exp(-i k x_j) psi_j / sqrt(n)``."""
    grid.require_periodic("the Fourier transform")
    k = grid.frequencies
    x = grid.points
    return np.exp(-1j * np.outer(k, x)) / np.sqrt(grid.n_points)


def position_op(grid):
    return OperatorRep(np.diag(grid.points).astype(complex), grid)


def momentum_op(grid, scheme="fourier"):
    """The momentum operator ``-i d/dx``."""
    if scheme == "fourier":
        return func_of_p(grid, lambda k: k)
    if scheme != "central_difference":
        raise ValueError(f"unknown scheme {scheme!r}")
    n = grid.n_points
    D = np.diag(np.ones(n - 1), 1) - np.diag(np.ones(n - 1), -1)
    if grid.boundary == "periodic":
        D[0, -1] = -1.0
        D[-1, 0] = 1.0
    return OperatorRep(-0.5j / grid.spacing * D, grid)


def kinetic_op(grid):
    """``p^2``: Fourier-diagonal on periodic grids, three-point Laplacian otherwise."""
    if grid.boundary == "periodic":
        return func_of_p(grid, lambda k: k * k)
    n = grid.n_points
    L = 2.0 * np.eye(n) - np.diag(np.ones(n - 1), 1) - np.diag(np.ones(n - 1), -1)
    return OperatorRep(L.astype(complex) / grid.spacing ** 2, grid)


def func_of_x(grid, f):
    return OperatorRep(np.diag(_sample(f, grid.points)), grid)


def func_of_p(grid, g):
    """``F^H diag(g(k)) F`` on a periodic grid."""
    grid.require_periodic("functions of p")
    values = _sample(g, grid.frequencies, label="p")
    F = fourier_matrix(grid)
    return OperatorRep((F.conj().T * values[None, :]) @ F, grid)


def antiderivative(grid, f, x0=0.0):
    """``int_{x0}^{x_j} f(y) dy`` at every grid point by the trapezoid rule."""
    x = grid.points
    nodes = np.union1d(x, [x0])
    values = _sample(f, nodes)
    running = cumulative_trapezoid(values, nodes, initial=0.0)
    running -= running[np.searchsorted(nodes, x0)]
    return running[np.searchsorted(nodes, x)]


def hermite_functions(x, n_basis, scale=1.0):
    """Normalized Hermite functions, one per row, by the stable three-term recurrence."""
    xi = np.asarray(x, dtype=float) / scale
    out = np.empty((n_basis, xi.size))
    out[0] = pi ** -0.25 * np.exp(-0.5 * xi * xi) / np.sqrt(scale)
    if n_basis > 1:
        out[1] = np.sqrt(2.0) * xi * out[0]
    for n in range(1, n_basis - 1):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * xi * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite_truncation(grid, n_basis, scale=1.0, tol=1e-6):
    """Map from grid values to coefficients in the first ``n_basis`` Hermite functions.

    Rows are quadrature-weighted samples, so the map is an isometry on its
    range (rows orthonormal) when the grid resolves the basis.
    """
    if n_basis < 1 or scale <= 0:
        raise ValueError("n_basis must be positive and scale > 0")
    reach = scale * np.sqrt(2 * n_basis + 1) * 1.5
    if grid.x_max < reach or grid.x_min > -reach:
        raise UnderResolvedBasisError(
            f"grid [{grid.x_min}, {grid.x_max}] does not cover +-{reach:.3g} "
            f"needed for {n_basis} Hermite functions")
    W = hermite_functions(grid.points, n_basis, scale) * np.sqrt(grid.spacing)
    top = float(np.linalg.norm(W[-1]))
    if abs(top - 1.0) > tol:
        raise UnderResolvedBasisError(f"top Hermite function has grid norm {top:.8f}")
    return W.astype(complex)


def window_vectors(grid, n_centers=5, modulations=(0, 4)):
    """Unit Gaussian test vectors supported in the central half of the grid.

    Width is a 32nd of the interval, so the tails are below 1e-13 at the
    grid edges; each bump is also modulated by ``exp(i 2 pi m x / L)``.
    """
    x = grid.points
    L = grid.length
    sigma = L / 32
    centers = np.linspace(grid.x_min + 0.25 * L, grid.x_max - 0.25 * L, n_centers)
    cols = []
    for c in centers:
        bump = np.exp(-0.5 * ((x - c) / sigma) ** 2)
        for m in modulations:
            v = bump * np.exp(2j * pi * m * (x - c) / L)
            cols.append(v / np.linalg.norm(v))
    return np.array(cols).T
