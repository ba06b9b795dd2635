"""Dense complex linear algebra.

Matrices are plain ``numpy`` complex arrays; :func:`as_matrix` is the single
gate that validates shape and finiteness. Relative residuals throughout the
package use the Frobenius norm, while :func:`operator_norm` is the spectral
norm (largest singular value).
"""
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla
from scipy.optimize import linear_sum_assignment

from . import _hqr
from .errors import (ConvergenceError, HermiticityError, NonFiniteError,
                     SingularMatrixError)

HERMITIAN_TOL = 1e-10
GENERAL_TOL = 1e-8
TINY = 1e-300


def as_matrix(M, square=False):
    """Return ``M`` as a finite 2-D complex128 array (copying if needed)."""
    A = np.asarray(M)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    A = np.ascontiguousarray(A, dtype=np.complex128)
    if not np.all(np.isfinite(A)):
        raise NonFiniteError("matrix has non-finite entries")
    if square and A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A


def fro(M):
    return float(np.linalg.norm(M))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted by (real, imaginary) part, with optional vectors.

    ``residuals[j] = ||A v_j - lambda_j v_j|| / ||A||_F`` when eigenvectors
    were requested, else ``None``.
    """
    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None
    residuals: Optional[np.ndarray] = None
    tolerance: float = GENERAL_TOL

    def __len__(self):
        return len(self.eigenvalues)


def canonical_order(values):
    """Indices sorting complex values by real part, then imaginary part."""
    values = np.asarray(values)
    return np.lexsort((np.arange(len(values)), values.imag, values.real))


def multiset_distance(a, b):
    """Largest pairwise gap under the optimal one-to-one matching of ``a`` and ``b``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError("multisets differ in size")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def adjoint(M):
    return as_matrix(M).conj().T.copy()


def operator_norm(M):
    """Largest singular value of ``M``."""
    A = as_matrix(M)
    return float(sla.svdvals(A, check_finite=False)[0])


def power_norm(M, iters=2000, tol=1e-13, seed=0):
    """Largest singular value by power iteration on ``M^H M``."""
    A = as_matrix(M)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.shape[1]) + 1j * rng.standard_normal(A.shape[1])
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(iters):
        w = A.conj().T @ (A @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        new = np.sqrt(nw)
        if abs(new - sigma) <= tol * new:
            return float(new)
        sigma = new
    return float(sigma)


def inverse(M):
    """Return ``(M^{-1}, cond_1(M))`` via partial-pivoting LU."""
    A = as_matrix(M, square=True)
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrixError
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min() < TINY:
        raise SingularMatrixError(f"pivot magnitude {pivots.min():.3e} below 1e-300")
    inv = sla.lu_solve((lu, piv), np.eye(A.shape[0], dtype=complex), check_finite=False)
    if not np.all(np.isfinite(inv)):
        raise SingularMatrixError("inverse overflowed")
    cond = float(np.linalg.norm(A, 1) * np.linalg.norm(inv, 1))
    if cond > 1e14:
        raise SingularMatrixError(f"condition estimate {cond:.3e} exceeds 1e14")
    return inv, cond


def hermiticity_of(A):
    return fro(A - A.conj().T) / max(fro(A), TINY)


def _residuals(A, values, vectors):
    scale = max(fro(A), TINY)
    R = A @ vectors - vectors * values[None, :]
    return np.linalg.norm(R, axis=0) / scale


def eig_hermitian(M, vectors=True):
    """Spectrum of a Hermitian matrix (LAPACK divide and conquer)."""
    A = as_matrix(M, square=True)
    res = hermiticity_of(A)
    if res > HERMITIAN_TOL:
        raise HermiticityError(res, HERMITIAN_TOL)
    A = 0.5 * (A + A.conj().T)
    if not vectors:
        w = sla.eigh(A, eigvals_only=True, check_finite=False)
        return Spectrum(np.asarray(w, dtype=float), tolerance=HERMITIAN_TOL)
    w, V = sla.eigh(A, check_finite=False)
    return Spectrum(np.asarray(w, dtype=float), V, _residuals(A, w, V), HERMITIAN_TOL)


def eig_general(M, vectors=False, balance=True):
    """Spectrum of a general complex matrix.

    Balancing, Householder reduction to Hessenberg form, then single-shift
    QR with Wilkinson shifts. Raises :class:`ConvergenceError` when the
    sweep budget (40 per dimension) runs out.
    """
    A = as_matrix(M, square=True)
    n = A.shape[0]
    H = A.copy()
    scale = _hqr.balance(H) if balance else np.ones(n)
    Q = np.eye(n, dtype=np.complex128)
    _hqr.hessenberg(H, Q, vectors)
    eigs = np.empty(n, dtype=np.complex128)
    status, sweeps = _hqr.hessenberg_qr(H, Q, vectors, vectors, eigs)
    if status != _hqr.OK:
        raise ConvergenceError(f"QR iteration did not converge within {sweeps} sweeps (n={n})")
    order = canonical_order(eigs)
    eigs = eigs[order]
    if not vectors:
        return Spectrum(eigs)
    X = _hqr.triangular_eigenvectors(np.triu(H))
    V = (Q @ X) * scale[:, None]
    V = V[:, order]
    V /= np.linalg.norm(V, axis=0)[None, :]
    return Spectrum(eigs, V, _residuals(A, eigs, V))


def inverse_iteration(M, values, iters=3, seed=0):
    """Eigenvectors for the given eigenvalues by shifted inverse iteration.

    Returns a :class:`Spectrum` holding ``values`` (in the order given), the
    unit eigenvectors and their residuals.
    """
    A = as_matrix(M, square=True)
    n = A.shape[0]
    values = np.asarray(values, dtype=complex)
    rng = np.random.default_rng(seed)
    V = np.empty((n, values.size), dtype=complex)
    scale = max(fro(A), TINY)
    for j, lam in enumerate(values):
        shift = lam + 1e-14 * scale * (1 + 1j)
        lu = sla.lu_factor(A - shift * np.eye(n), check_finite=False)
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        for _ in range(iters):
            x = sla.lu_solve(lu, x / np.linalg.norm(x), check_finite=False)
            if not np.all(np.isfinite(x)):
                raise ConvergenceError(f"inverse iteration overflowed at {lam}")
        V[:, j] = x / np.linalg.norm(x)
    return Spectrum(values, V, _residuals(A, values, V))
