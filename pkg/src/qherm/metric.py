"""Candidate metric operators and finite-truncation diagnostics.

A metric must be Hermitian, positive definite, bounded and intertwine
``eta H = H^dagger eta``. At any fixed truncation the first and last are
measured directly; boundedness is only visible as norm growth across
truncations (:func:`boundedness_probe`), and the failure of the domain
condition is shown with explicit integrals (:func:`domain_failure_demo`).
"""
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import pi
from typing import List, Optional

import numpy as np

from .discretize import (Grid, OperatorRep, antiderivative, check_compatible,
                         func_of_p, func_of_x, momentum_op, window_vectors)
from .errors import DimensionMismatchError, OverflowRiskError
from .linalg import TINY, eig_hermitian, fro, operator_norm
from .quadrature import integrate

EXP_LIMIT = 300.0
GROWTH_FACTOR = 2.0
PLATEAU_REL = 0.05
CLASSIFICATIONS = ("bounded-plateau", "growing", "inconclusive")


@dataclass(frozen=True)
class MetricDiagnostics:
    """Hermiticity, positivity, intertwining and norm of a candidate metric.

    ``intertwining_windowed`` restricts the intertwining residual to interior
    test vectors; it is ``None`` when no grid is available.
    """
    hermiticity_residual: float
    min_eigenvalue: float
    intertwining_residual: float
    op_norm: float
    intertwining_windowed: Optional[float] = None

    def as_record(self):
        return {
            "hermiticity_residual": self.hermiticity_residual,
            "min_eigenvalue": self.min_eigenvalue,
            "intertwining_residual": self.intertwining_residual,
            "op_norm": self.op_norm,
            "intertwining_windowed": self.intertwining_windowed,
        }


@dataclass(frozen=True)
class NormGrowthReport:
    truncation_sizes: List[int]
    norms: List[float]
    classification: str

    def __post_init__(self):
        if len(self.truncation_sizes) != len(self.norms) or len(self.norms) < 3:
            raise ValueError("need at least three (size, norm) pairs")
        if any(b <= a for a, b in zip(self.truncation_sizes, self.truncation_sizes[1:])):
            raise ValueError("truncation sizes must be strictly increasing")
        if self.classification not in CLASSIFICATIONS:
            raise ValueError(f"unknown classification {self.classification!r}")


def _check_exponent(value, what):
    if value > EXP_LIMIT:
        raise OverflowRiskError(f"{what}: exponent {value:.4g} exceeds {EXP_LIMIT:g}")


def eta_exp_p(grid, theta):
    """``exp(-theta p)``, diagonal in the Fourier basis."""
    grid.require_periodic("exp(-theta p)")
    _check_exponent(abs(theta) * grid.k_max, "exp(-theta p)")
    return func_of_p(grid, lambda k: np.exp(-theta * k))


def eta_gauge(grid, gauge):
    """``exp(2 int_{x0}^x Im phi)`` as a positive diagonal."""
    exponent = 2.0 * antiderivative(grid, lambda y: np.imag(gauge.phi(y)), gauge.x0).real
    _check_exponent(np.abs(exponent).max(), "gauge metric")
    return OperatorRep(np.diag(np.exp(exponent)).astype(complex), grid)


def eta_susy(grid, params, scheme="fourier"):
    """``g(x) - i d/dx = g(x) + p``."""
    if grid.boundary != "periodic":
        scheme = "central_difference"
    G = func_of_x(grid, params.sample).matrix
    return OperatorRep(G + momentum_op(grid, scheme).matrix, grid)


def intertwining(eta, H):
    return eta @ H - H.conj().T @ eta


def diagnose(eta, H, test_vectors=None):
    """Measure the metric conditions for ``eta`` against ``H``.

    Residuals use Frobenius norms; ``op_norm`` is the spectral norm. The
    windowed intertwining residual is
    ``max_w ||(eta H - H^dagger eta) w|| / (||eta|| ||H|| ||w||)`` over
    interior Gaussian test vectors.
    """
    if eta.matrix.shape != H.matrix.shape:
        raise DimensionMismatchError(
            f"eta {eta.matrix.shape} and H {H.matrix.shape} differ in shape")
    if eta.basis != H.basis or eta.grid != H.grid:
        raise DimensionMismatchError("eta and H live on different grids or bases")
    E = eta.matrix
    A = H.matrix
    herm = fro(E - E.conj().T) / max(fro(E), TINY)
    sym = 0.5 * (E + E.conj().T)
    min_eig = float(eig_hermitian(sym, vectors=False).eigenvalues[0])
    R = intertwining(E, A)
    scale = max(fro(E) * fro(A), TINY)
    raw = fro(R) / scale
    windowed = None
    W = test_vectors
    if W is None and eta.grid is not None and eta.basis == "position":
        W = window_vectors(eta.grid)
    if W is not None:
        windowed = float(np.max(np.linalg.norm(R @ W, axis=0)
                                / (scale * np.linalg.norm(W, axis=0))))
    return MetricDiagnostics(float(herm), min_eig, float(raw), operator_norm(E), windowed)


def classify_growth(norms, factor=GROWTH_FACTOR, plateau=PLATEAU_REL):
    """Heuristic label for a norm sequence over doubling truncations."""
    norms = np.asarray(norms, dtype=float)
    ratios = norms[1:] / norms[:-1]
    if np.all(ratios >= factor):
        return "growing"
    if abs(norms[-1] - norms[-2]) < plateau * max(abs(norms[-1]), abs(norms[-2])):
        return "bounded-plateau"
    return "inconclusive"


def probe_threads():
    """Concurrency cap from ``QHERM_THREADS`` (default 1)."""
    raw = os.environ.get("QHERM_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"QHERM_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"QHERM_THREADS must be a positive integer, got {raw!r}")
    return value


def boundedness_probe(eta_family, sizes, threads=None):
    """Operator norms of ``eta_family(size)`` across increasing truncations.

    The classification is heuristic: ``growing`` when every step at least
    doubles the norm, ``bounded-plateau`` when the last two norms agree to
    5%, otherwise ``inconclusive``.
    """
    sizes = [int(s) for s in sizes]
    if len(sizes) < 3:
        raise ValueError("boundedness_probe needs at least three sizes")
    sizes = sorted(sizes)
    threads = probe_threads() if threads is None else threads

    def norm_at(size):
        return operator_norm(eta_family(size).matrix)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            norms = list(pool.map(norm_at, sizes))
    else:
        norms = [norm_at(s) for s in sizes]
    return NormGrowthReport(sizes, norms, classify_growth(norms))


def periodic_family(build, x_min=-pi, x_max=pi):
    """Family indexed by point count on a fixed periodic interval.

    On the default ``[-pi, pi)`` the frequency cutoff equals half the point count.
    """
    return lambda n: build(Grid(x_min, x_max, n, "periodic"))


def exp_p_family(theta=1.0, x_min=-pi, x_max=pi):
    return periodic_family(lambda grid: eta_exp_p(grid, theta), x_min, x_max)


def resolvent_family(x_min=-pi, x_max=pi):
    """``(1 + p^2)^{-1}``, a bounded function of p."""
    return periodic_family(lambda grid: func_of_p(grid, lambda k: 1.0 / (1.0 + k * k)),
                           x_min, x_max)


def identity_family(x_min=-pi, x_max=pi):
    return periodic_family(lambda grid: OperatorRep(np.eye(grid.n_points), grid),
                           x_min, x_max)


def domain_integrand_1(x):
    """``phi(x) * (eta psi)(x)`` with ``phi = exp(x - e^x)``, ``psi = exp(-x^2)``, ``theta = pi``."""
    x = np.asarray(x, dtype=float)
    return np.exp(x - np.exp(x) - x * x - 2j * pi * x + pi * pi)


def domain_integrand_2(x):
    """``(eta phi)(x) * psi(x) = -exp(x + e^x) exp(-x^2)``."""
    x = np.asarray(x, dtype=float)
    return -np.exp(x + np.exp(x) - x * x)


@dataclass(frozen=True)
class DomainFailureRow:
    L: float
    I1: complex
    I2: complex
    I1_converged: bool
    I2_converged: bool
    I1_exhausted: bool
    I2_exhausted: bool


def _shell_integrals(f, L_values, rtol, budget):
    """Cumulative integrals over [-L, L], one adaptive panel pair per shell."""
    out = []
    total = 0.0 + 0.0j
    ok = True
    exhausted = False
    prev = 0.0
    for L in L_values:
        if prev == 0.0:
            parts = [integrate(f, -L, L, rtol=rtol, budget=budget)]
        else:
            parts = [integrate(f, -L, -prev, rtol=rtol, budget=budget),
                     integrate(f, prev, L, rtol=rtol, budget=budget)]
        for r in parts:
            total += r.value
            ok = ok and r.converged
            exhausted = exhausted or r.exhausted
        out.append((total, ok, exhausted))
        prev = L
    return out


def domain_failure_demo(L_values, rtol=1e-10, budget=10**6):
    """Truncated inner products showing ``(phi, eta psi)`` exists but ``(eta phi, psi)`` does not.

    ``I1(L)`` converges as L grows; ``I2(L)`` blows up, and once its integrand
    overflows the panel reports budget exhaustion (the value is then the
    truncated sum over the finite part).
    """
    L_values = [float(L) for L in L_values]
    if not L_values or L_values[0] <= 0 or any(b <= a for a, b in zip(L_values, L_values[1:])):
        raise ValueError("L values must be positive and strictly increasing")
    first = _shell_integrals(domain_integrand_1, L_values, rtol, budget)
    second = _shell_integrals(domain_integrand_2, L_values, rtol, budget)
    return [DomainFailureRow(L, a[0], b[0], a[1], b[1], a[2], b[2])
            for L, a, b in zip(L_values, first, second)]
