"""Inner products built from eigenvectors alone.

Given eigenvectors with real eigenvalues, declare them orthonormal: the
coordinates of a span vector in that basis define the inner product, and the
coordinate map is an isometry onto C^k in which ``H`` becomes ``diag(E)``.
Nothing here assumes the eigenvectors span the ambient space.
"""
from dataclasses import dataclass
from math import sqrt

import numpy as np

from .discretize import OperatorRep
from .errors import EigenpairResidualError, RankDeficientError
from .linalg import TINY, as_matrix, fro, operator_norm
from .transform import TransformPair

GRAM_LIMIT = 1e12
EIGENPAIR_TOL = 1e-6


def _canonical_columns(Psi):
    """Unit columns whose first significant component is real and positive."""
    Psi = Psi / np.linalg.norm(Psi, axis=0)[None, :]
    for j in range(Psi.shape[1]):
        col = Psi[:, j]
        lead = np.flatnonzero(np.abs(col) > 1e-8 * np.abs(col).max())[0]
        Psi[:, j] = col * (abs(col[lead]) / col[lead])
    return Psi


@dataclass(frozen=True)
class EigenSet:
    """Eigenvector columns with real eigenvalues, ordered by ascending energy."""
    Psi: np.ndarray
    E: np.ndarray
    gram_condition: float

    @classmethod
    def from_vectors(cls, Psi, E, imag_tol=1e-6):
        Psi = as_matrix(Psi)
        E = np.asarray(E)
        if Psi.shape[1] > Psi.shape[0]:
            raise ValueError("more eigenvectors than ambient dimensions")
        if E.shape != (Psi.shape[1],):
            raise ValueError("need one eigenvalue per column")
        if np.iscomplexobj(E):
            worst = np.max(np.abs(E.imag)) if E.size else 0.0
            if worst > imag_tol * max(1.0, np.max(np.abs(E.real))):
                raise ValueError(f"eigenvalues are not real (|Im E| up to {worst:.3e})")
            E = E.real
        if np.any(np.linalg.norm(Psi, axis=0) == 0):
            raise ValueError("zero eigenvector column")
        order = np.argsort(E, kind="stable")
        Psi = _canonical_columns(Psi[:, order])
        s = np.linalg.svd(Psi, compute_uv=False)
        gram = float((s[0] / s[-1]) ** 2) if s[-1] > 0 else np.inf
        return cls(Psi, np.asarray(E[order], dtype=float), gram)

    @classmethod
    def from_spectrum(cls, spectrum, mask=None, imag_tol=1e-6):
        if spectrum.eigenvectors is None:
            raise ValueError("spectrum has no eigenvectors")
        mask = np.ones(len(spectrum), bool) if mask is None else np.asarray(mask)
        return cls.from_vectors(spectrum.eigenvectors[:, mask], spectrum.eigenvalues[mask],
                                imag_tol)

    @property
    def size(self):
        return self.Psi.shape[1]

    def require_conditioned(self, limit=GRAM_LIMIT):
        if not np.isfinite(self.gram_condition) or self.gram_condition > limit:
            raise RankDeficientError(
                f"Gram condition {self.gram_condition:.3e} exceeds {limit:.0e}")


# counterexample ----------------------------------------------------------

def counterexample_sequence(n, m):
    """Distances between ``u_n = e_n / sqrt(n)`` and ``u_m`` in both norms.

    Uses explicit vectors in an orthonormal basis of size ``max(n, m)`` and
    the unbounded diagonal weight ``W e_k = k e_k``. Returns
    ``(||u_n - u_m||, ||u_n - u_m||_w)``.
    """
    if n < 1 or m < 1:
        raise ValueError("indices start at 1")
    N = max(n, m)
    basis = np.eye(N)
    weight = np.diag(np.arange(1, N + 1, dtype=float))
    u_n = basis[:, n - 1] / sqrt(n)
    u_m = basis[:, m - 1] / sqrt(m)
    d = u_n - u_m
    return sqrt(float(d @ d)), sqrt(float(d @ (weight @ d)))


def cauchy_profile(max_n):
    """Rows ``(n, ||u_n - u_2n||, ||u_n - u_2n||_w)`` for ``n = 1..max_n``."""
    if max_n < 2:
        raise ValueError("max_n must be at least 2")
    return [(n, *counterexample_sequence(n, 2 * n)) for n in range(1, max_n + 1)]


# span inner product -------------------------------------------------------

class VInnerProduct:
    """``(u, v)_V = c_u^dagger c_v`` with least-squares coordinates in the eigenbasis."""

    def __init__(self, eigs):
        eigs.require_conditioned()
        self.eigs = eigs
        self.dual = np.linalg.pinv(eigs.Psi)

    def coords(self, u):
        return self.dual @ np.asarray(u, dtype=complex)

    def __call__(self, u, v):
        return complex(np.vdot(self.coords(u), self.coords(v)))

    def norm(self, u):
        return float(np.linalg.norm(self.coords(u)))

    def gram(self):
        """Gram matrix of the eigenvectors themselves (the identity by construction)."""
        C = self.coords(self.eigs.Psi)
        return C.conj().T @ C


def build_v_inner_product(eigs):
    return VInnerProduct(eigs)


def build_T(eigs):
    """Coordinate map sending ``psi_n`` to ``e_n``, paired with ``Psi`` as its inverse.

    ``T`` is ``k x N`` and ``T_inv`` is ``N x k``; ``T T_inv = I_k`` while
    ``T_inv T`` is the oblique projector onto the span.
    """
    eigs.require_conditioned()
    T = np.linalg.pinv(eigs.Psi)
    return TransformPair(OperatorRep(T, None, "abstract"),
                         OperatorRep(eigs.Psi, None, "abstract"),
                         sqrt(eigs.gram_condition))


def eigenpair_residuals(H, eigs):
    A = H.matrix if isinstance(H, OperatorRep) else as_matrix(H)
    R = A @ eigs.Psi - eigs.Psi * eigs.E[None, :]
    return np.linalg.norm(R, axis=0) / max(fro(A), TINY)


def _check_pairs(H, eigs, tol):
    res = eigenpair_residuals(H, eigs)
    if res.size and res.max() > tol:
        raise EigenpairResidualError(
            f"eigenpair residual {res.max():.3e} exceeds {tol:.0e} (column {int(res.argmax())})")


def hermitize(H, eigs, tol=EIGENPAIR_TOL):
    """``H_hat = T H T^{-1}`` on the span, and ``||H_hat - diag(E)||_F / ||H_hat||_F``."""
    _check_pairs(H, eigs, tol)
    pair = build_T(eigs)
    A = H.matrix if isinstance(H, OperatorRep) else as_matrix(H)
    H_hat = pair.T.matrix @ (A @ pair.T_inv.matrix)
    residual = fro(H_hat - np.diag(eigs.E)) / max(fro(H_hat), TINY)
    return H_hat, float(residual)


def verify_hermitian_in_v(H, eigs, trials, rng, tol=EIGENPAIR_TOL, check_pairs=True):
    """Largest ``|(phi, H psi)_V - (H phi, psi)_V|`` over random span pairs.

    Each asymmetry is divided by ``||phi||_V ||psi||_V ||H||_V``, where
    ``||H||_V`` is the norm of ``H`` restricted to the span in the V-norm.
    ``H`` is applied in the ambient space; only the inner products go
    through coordinates. ``check_pairs=False`` skips the eigenpair
    precondition, which the perturbation detector deliberately violates.
    """
    if check_pairs:
        _check_pairs(H, eigs, tol)
    A = H.matrix if isinstance(H, OperatorRep) else as_matrix(H)
    ip = VInnerProduct(eigs)
    k = eigs.size
    H_v = ip.coords(A @ eigs.Psi)
    scale = max(operator_norm(H_v), TINY)
    worst = 0.0
    for _ in range(int(trials)):
        c_phi = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        c_psi = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        phi = eigs.Psi @ c_phi
        psi = eigs.Psi @ c_psi
        lhs = ip(phi, A @ psi)
        rhs = ip(A @ phi, psi)
        worst = max(worst, abs(lhs - rhs) / (ip.norm(phi) * ip.norm(psi) * scale))
    return float(worst)


def perturb_eigenvalue(H, eigs, index, shift):
    """``H + shift * psi_index chi_index^dagger``: moves one eigenvalue by ``shift``.

    ``chi`` is the dual row from the coordinate map, so the other
    eigenpairs are untouched.
    """
    A = H.matrix if isinstance(H, OperatorRep) else as_matrix(H)
    dual = np.linalg.pinv(eigs.Psi)
    B = A + shift * np.outer(eigs.Psi[:, index], dual[index])
    return H.like(B) if isinstance(H, OperatorRep) else B
