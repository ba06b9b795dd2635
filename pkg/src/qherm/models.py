"""Hamiltonian families: complex and real Morse, gauged, Hatano-Nelson, SUSY.

Units are hbar = 2m = 1 (``H = p^2 + V``) except for the gauged family,
which keeps its explicit ``1/(2m)``.
"""
from dataclasses import dataclass
from math import atan, atan2, hypot
from typing import Callable, Optional

import numpy as np

from .discretize import (Grid, OperatorRep, func_of_x, kinetic_op,
                         momentum_op, window_vectors)
from .errors import OverflowRiskError

CATALOG = ("morse-complex", "morse-real", "gauge", "hatano-nelson", "susy")

# bound states: Re E < 0 and |Im E| < BOUND_REL * |Re E| + BOUND_ABS
BOUND_REL = 1e-3
BOUND_ABS = 1e-6


def default_morse_grid():
    return Grid(-4.0, 16.0, 2048, "dirichlet")


@dataclass(frozen=True)
class MorseParams:
    A: float
    B: float
    C: float

    def __post_init__(self):
        if self.A == 0:
            raise ValueError("Morse parameter A must be nonzero")
        for name in ("A", "B", "C"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"Morse parameter {name} must be finite")

    @property
    def theta(self):
        """Imaginary shift ``2 arctan(B/A)`` that maps V to its conjugate."""
        return 2.0 * atan(self.B / self.A)

    @property
    def modulus(self):
        return hypot(self.A, self.B)

    def potential(self, x):
        z = complex(self.A, self.B)
        x = np.asarray(x, dtype=complex)
        return z * z * np.exp(-2 * x) - (2 * self.C + 1) * z * np.exp(-x)

    @property
    def real_shift(self):
        """Imaginary shift ``arg(A + iB)`` taking V to the real Morse potential.

        Equals ``theta / 2`` when ``A > 0``.
        """
        return atan2(self.B, self.A)

    def real_potential(self, x):
        a = self.modulus
        x = np.asarray(x, dtype=float)
        return a * a * np.exp(-2 * x) - (2 * self.C + 1) * a * np.exp(-x)

    def bound_energies(self):
        """``-(C - n)^2`` for ``0 <= n < C``."""
        n = np.arange(0, int(np.ceil(self.C)))
        n = n[n < self.C]
        return -(self.C - n) ** 2.0


def complex_morse(grid, params):
    K = kinetic_op(grid)
    return K.like(K.matrix + func_of_x(grid, params.potential).matrix)


def real_morse(grid, params):
    K = kinetic_op(grid)
    return K.like(K.matrix + func_of_x(grid, params.real_potential).matrix)


def bound_states(eigenvalues, rel=BOUND_REL, abs_tol=BOUND_ABS):
    """Boolean mask of eigenvalues identified as bound states."""
    w = np.asarray(eigenvalues, dtype=complex)
    return (w.real < 0) & (np.abs(w.imag) < rel * np.abs(w.real) + abs_tol)


@dataclass(frozen=True)
class GaugeField:
    phi: Callable
    x0: float = 0.0
    mass: float = 1.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")


def gauged_hamiltonian(grid, gauge, V=None, scheme=None):
    """``(p - phi(x))^2 / 2m + V(x)``.

    ``scheme`` defaults to Fourier on periodic grids and central differences
    on Dirichlet grids.
    """
    if scheme is None:
        scheme = "fourier" if grid.boundary == "periodic" else "central_difference"
    P = momentum_op(grid, scheme).matrix
    Phi = func_of_x(grid, gauge.phi).matrix
    K = P - Phi
    H = K @ K / (2 * gauge.mass)
    if V is not None:
        H = H + func_of_x(grid, V).matrix
    return OperatorRep(H, grid)


def hatano_nelson_chain(n_sites, t=1.0, g=0.0):
    """Open chain with hopping ``-t e^{+g}`` above and ``-t e^{-g}`` below the diagonal."""
    if n_sites < 2:
        raise ValueError("n_sites must be >= 2")
    if abs(g) * n_sites > 300:
        raise OverflowRiskError(f"g*n_sites = {abs(g) * n_sites:.3g} exceeds 300")
    H = np.diag(np.full(n_sites - 1, -t * np.exp(g)), 1) \
        + np.diag(np.full(n_sites - 1, -t * np.exp(-g)), -1)
    return OperatorRep(H.astype(complex), None, "abstract")


def open_chain_energies(n_sites, t=1.0):
    j = np.arange(1, n_sites + 1)
    return np.sort(-2 * t * np.cos(j * np.pi / (n_sites + 1)))


@dataclass(frozen=True)
class SusyParams:
    """Superpotential ``g`` with optional analytic derivative and antiderivative.

    ``antiderivative`` is ``G(x) = int_0^x g``; both fall back to numerics.
    """
    g: Callable
    k: float = 0.0
    dg: Optional[Callable] = None
    antiderivative: Optional[Callable] = None
    name: str = "custom"

    def sample(self, x):
        values = np.asarray(self.g(np.asarray(x, dtype=float)))
        if np.iscomplexobj(values) and np.any(values.imag != 0):
            raise ValueError("the superpotential g must be real-valued")
        values = np.broadcast_to(values.real.astype(float), np.shape(x)).copy()
        if not np.all(np.isfinite(values)):
            raise ValueError("g is not finite on the grid")
        return values

    def derivative_on(self, grid):
        x = grid.points
        if self.dg is not None:
            return np.broadcast_to(np.asarray(self.dg(x), dtype=float), x.shape).copy()
        values = self.sample(x)
        if grid.boundary == "periodic":
            return (np.roll(values, -1) - np.roll(values, 1)) / (2 * grid.spacing)
        return np.gradient(values, grid.spacing)

    def G(self, x):
        x = np.asarray(x, dtype=float)
        if self.antiderivative is not None:
            return np.asarray(self.antiderivative(x), dtype=float)
        from scipy.integrate import quad
        return np.array([quad(lambda y: float(self.g(np.array(y))), 0.0, xi)[0]
                         for xi in np.ravel(x)]).reshape(x.shape)


def susy_catalog(name, scale=1.0, k=0.0):
    """Built-in superpotentials: ``tanh``, ``linear`` and ``const``.

    ``scale`` multiplies ``g`` (the constant value for ``const``).
    """
    c = float(scale)
    if name == "tanh":
        return SusyParams(lambda x: c * np.tanh(x), k, lambda x: c / np.cosh(x) ** 2,
                          lambda x: c * np.log(np.cosh(x)), "tanh")
    if name == "linear":
        return SusyParams(lambda x: c * np.asarray(x, dtype=float), k,
                          lambda x: np.full(np.shape(x), c), lambda x: 0.5 * c * np.square(x),
                          "linear")
    if name == "const":
        return SusyParams(lambda x: np.full(np.shape(x), c), k,
                          lambda x: np.zeros(np.shape(x)), lambda x: c * np.asarray(x, dtype=float),
                          "const")
    raise ValueError(f"unknown superpotential {name!r}; choose tanh, linear or const")


def susy_potential(grid, params):
    g = params.sample(grid.points)
    return -g * g + params.k - 1j * params.derivative_on(grid)


def susy_hamiltonian(grid, params):
    """``p^2 - g^2 + k - i g'``."""
    K = kinetic_op(grid)
    return K.like(K.matrix + np.diag(susy_potential(grid, params)))


def susy_factorization_residual(grid, params, test_vectors=None):
    """Distance between ``H`` and ``(p - g)(p + g)`` for ``k = 0``.

    Returns ``(full, windowed)``: the relative Frobenius residual of the whole
    matrix, and the largest relative residual on interior test vectors
    (see :func:`qherm.discretize.window_vectors`), which excludes the wrap-around
    of non-periodic ``g`` on periodic grids.
    """
    H = susy_hamiltonian(grid, params).matrix
    scheme = "fourier" if grid.boundary == "periodic" else "central_difference"
    P = momentum_op(grid, scheme).matrix
    Gm = np.diag(params.sample(grid.points)).astype(complex)
    R = H - (P - Gm) @ (P + Gm)
    full = np.linalg.norm(R) / np.linalg.norm(H)
    W = window_vectors(grid) if test_vectors is None else test_vectors
    windowed = np.max(np.linalg.norm(R @ W, axis=0) / np.linalg.norm(H @ W, axis=0))
    return float(full), float(windowed)
