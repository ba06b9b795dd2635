"""Similarity transforms that map the non-Hermitian models to Hermitian ones.

``apply_similarity`` realizes ``T H T^{-1}``. The explicit transforms are the
complex shift ``exp(-theta p / 2)`` for the Morse family, the gauge factor
``T_g T_u`` for ``(p - phi)^2 / 2m + V``, and ``sqrt(p) exp(iG(x))`` for the
SUSY family in a positive-momentum window.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .discretize import (OperatorRep, antiderivative, func_of_p,
                         window_vectors)
from .errors import BranchError, DimensionMismatchError, OverflowRiskError
from .linalg import TINY, as_matrix, fro, inverse

EXP_LIMIT = 300.0


@dataclass(frozen=True)
class TransformPair:
    T: OperatorRep
    T_inv: OperatorRep
    condition: float

    @classmethod
    def from_matrix(cls, T, grid=None, basis="position"):
        """Pair a square matrix with its LU inverse and condition estimate."""
        inv, cond = inverse(T)
        return cls(OperatorRep(T, grid, basis), OperatorRep(inv, grid, basis), cond)

    def inverse_residual(self):
        n = self.T_inv.matrix.shape[1]
        return float(np.linalg.norm(self.T.matrix @ self.T_inv.matrix - np.eye(n)))

    def compose(self, first):
        """The pair for ``self.T @ first.T`` (apply ``first``, then ``self``)."""
        T = OperatorRep(self.T.matrix @ first.T.matrix, self.T.grid, self.T.basis)
        T_inv = OperatorRep(first.T_inv.matrix @ self.T_inv.matrix, first.T_inv.grid,
                            first.T_inv.basis)
        return TransformPair(T, T_inv, self.condition * first.condition)


def _diag_pair(values, grid):
    values = np.asarray(values, dtype=complex)
    mags = np.abs(values)
    return TransformPair(OperatorRep(np.diag(values), grid),
                         OperatorRep(np.diag(1.0 / values), grid),
                         float(mags.max() / mags.min()))


def apply_similarity(pair, H):
    """``T H T^{-1}`` with the grid and basis of ``T``."""
    T = pair.T.matrix
    T_inv = pair.T_inv.matrix
    A = H.matrix if isinstance(H, OperatorRep) else as_matrix(H)
    if T.shape[1] != A.shape[0] or A.shape[1] != T_inv.shape[0]:
        raise DimensionMismatchError(
            f"cannot conjugate {A.shape} by T {T.shape} / T^-1 {T_inv.shape}")
    return OperatorRep(T @ A @ T_inv, pair.T.grid, pair.T.basis)


def hermiticity_residual(M):
    """``||M - M^dagger||_F / ||M||_F``."""
    A = M.matrix if isinstance(M, OperatorRep) else as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {A.shape}")
    return fro(A - A.conj().T) / max(fro(A), TINY)


def windowed_hermiticity(M, test_vectors):
    """``max_w ||(M - M^dagger) w|| / (||M||_F ||w||)`` over the given vectors."""
    A = M.matrix if isinstance(M, OperatorRep) else as_matrix(M)
    W = np.asarray(test_vectors)
    R = (A - A.conj().T) @ W
    return float(np.max(np.linalg.norm(R, axis=0) / (max(fro(A), TINY) * np.linalg.norm(W, axis=0))))


def hatano_nelson_gauge(n_sites, g):
    """``diag(exp(g j))``, which removes the imaginary gauge of the open chain."""
    if abs(g) * n_sites > EXP_LIMIT:
        raise OverflowRiskError(f"g*n_sites = {abs(g) * n_sites:.3g} exceeds {EXP_LIMIT:g}")
    j = np.arange(n_sites)
    d = np.exp(g * j)
    return TransformPair(OperatorRep(np.diag(d), None, "abstract"),
                         OperatorRep(np.diag(1.0 / d), None, "abstract"),
                         float(np.exp(abs(g) * (n_sites - 1))))


def morse_shift_transform(grid, theta):
    """``T = exp(-theta p / 2)``: shifts x by ``i theta / 2``."""
    grid.require_periodic("the Morse shift transform")
    if abs(theta) * grid.k_max / 2 > EXP_LIMIT:
        raise OverflowRiskError(
            f"theta*k_max/2 = {abs(theta) * grid.k_max / 2:.4g} exceeds {EXP_LIMIT:g}")
    T = func_of_p(grid, lambda k: np.exp(-0.5 * theta * k))
    T_inv = func_of_p(grid, lambda k: np.exp(0.5 * theta * k))
    k = grid.frequencies
    return TransformPair(T, T_inv, float(np.exp(0.5 * abs(theta) * (k.max() - k.min()))))


def morse_scalar_law(params, x):
    """``max |V(x + i theta) - conj(V(x))| / max |V|`` over the points ``x``."""
    x = np.asarray(x, dtype=float)
    V = params.potential(x)
    shifted = params.potential(x + 1j * params.theta)
    return float(np.max(np.abs(shifted - np.conj(V))) / np.max(np.abs(V)))


def morse_real_shift_law(params, x):
    """``max |V(x + i s) - V_real(x)| / max |V_real|`` with ``s = arg(A + iB)``."""
    x = np.asarray(x, dtype=float)
    shifted = params.potential(x + 1j * params.real_shift)
    target = params.real_potential(x)
    return float(np.max(np.abs(shifted - target)) / np.max(np.abs(target)))


def gauge_factorize(grid, gauge):
    """``T = T_g T_u`` with ``T_g = exp(-i int Re phi)`` and ``T_u = exp(int Im phi)``.

    Integrals run from ``gauge.x0`` by the trapezoid rule.
    """
    integral = antiderivative(grid, gauge.phi, gauge.x0)
    if np.abs(integral.imag).max() > EXP_LIMIT:
        raise OverflowRiskError("gauge transform exponent exceeds 300")
    T_g = _diag_pair(np.exp(-1j * integral.real), grid)
    T_u = _diag_pair(np.exp(integral.imag), grid)
    return T_g, T_u


def gauge_transform(grid, gauge):
    T_g, T_u = gauge_factorize(grid, gauge)
    return T_g.compose(T_u)


def unitarity_residual(pair):
    T = pair.T.matrix
    return float(np.linalg.norm(T.conj().T @ T - np.eye(T.shape[1])))


# positive-momentum representation -----------------------------------------

def momentum_window(n_modes, p_min, p_max):
    if p_min <= 0:
        raise BranchError(f"sqrt(p) needs p_min > 0, got {p_min}")
    if not p_max > p_min or n_modes < 8:
        raise ValueError("need p_max > p_min and at least 8 modes")
    return np.linspace(p_min, p_max, n_modes)


def position_in_momentum(p, edges="one-sided"):
    """``x = +i d/dp`` by central differences.

    ``edges="one-sided"`` uses second-order one-sided stencils in the first
    and last rows; ``edges="zero"`` drops the ghost points, which keeps the
    matrix exactly Hermitian.
    """
    n = p.size
    dp = p[1] - p[0]
    D = (np.diag(np.ones(n - 1), 1) - np.diag(np.ones(n - 1), -1)) / (2 * dp)
    if edges == "one-sided":
        D[0, :3] = np.array([-3.0, 4.0, -1.0]) / (2 * dp)
        D[-1, -3:] = np.array([1.0, -4.0, 3.0]) / (2 * dp)
    elif edges != "zero":
        raise ValueError(f"unknown edge treatment {edges!r}")
    return 1j * D


def momentum_window_vectors(p, n_centers=5):
    """Unit Gaussian bumps in the central half of the momentum window."""
    span = p[-1] - p[0]
    sigma = span / 24
    centers = np.linspace(p[0] + 0.3 * span, p[-1] - 0.3 * span, n_centers)
    W = np.exp(-0.5 * ((p[:, None] - centers[None, :]) / sigma) ** 2).astype(complex)
    return W / np.linalg.norm(W, axis=0)


def hermitian_function(M, f):
    """``f(M)`` for Hermitian ``M`` through its eigendecomposition."""
    w, U = np.linalg.eigh(0.5 * (M + M.conj().T))
    return (U * f(w)[None, :]) @ U.conj().T


def windowed_relative(lhs, rhs, W):
    """``max_w ||(lhs - rhs) w|| / ||rhs w||``."""
    num = np.linalg.norm((lhs - rhs) @ W, axis=0)
    den = np.maximum(np.linalg.norm(rhs @ W, axis=0), TINY)
    return float(np.max(num / den))


def sqrt_p_identity_residual(p, power=1, W=None):
    """Windowed distance between ``sqrt(p) x^n sqrt(p)`` and ``p (x + i/(2p))^n``."""
    X = position_in_momentum(p, "one-sided")
    P = np.diag(p).astype(complex)
    S = np.diag(np.sqrt(p)).astype(complex)
    shifted = X + 0.5j * np.diag(1.0 / p)
    lhs = S @ np.linalg.matrix_power(X, power) @ S
    rhs = P @ np.linalg.matrix_power(shifted, power)
    if W is None:
        W = momentum_window_vectors(p)
    return windowed_relative(lhs, rhs, W)


def _analytic_g(params, M):
    """``g(M)`` for a general matrix, for the built-in superpotentials."""
    n = M.shape[0]
    probe = params.sample(np.array([0.0, 1.0]))
    if params.name == "const":
        return probe[0] * np.eye(n)
    if params.name == "linear":
        return probe[1] * M
    if params.name == "tanh":
        c = probe[1] / np.tanh(1.0)
        E = sla.expm(2 * M)
        return c * np.linalg.solve((E + np.eye(n)).T, (E - np.eye(n)).T).T
    raise ValueError("the shifted-argument form needs a built-in superpotential")


def susy_transform(n_modes, p_min, p_max, params):
    """``T = sqrt(p) exp(iG(x))`` and ``H_hat = p^2 - 2 sqrt(p) g(x) sqrt(p)``.

    Works in the momentum representation on ``[p_min, p_max]`` with
    ``p_min > 0``; ``x`` is ``+i d/dp`` (Hermitian truncation), and functions
    of ``x`` are evaluated on its eigendecomposition. Only ``k = 0`` is
    supported.
    """
    if params.k != 0:
        raise ValueError("the SUSY transform is only defined for k = 0")
    p = momentum_window(n_modes, p_min, p_max)
    X = position_in_momentum(p, "zero")
    S = np.sqrt(p)
    gX = hermitian_function(X, params.sample)
    phase = hermitian_function(X, lambda w: np.exp(1j * params.G(w)))
    phase_inv = phase.conj().T
    T = S[:, None] * phase
    T_inv = phase_inv / S[None, :]
    H_hat = np.diag(p * p).astype(complex) - 2 * (S[:, None] * gX * S[None, :])
    pair = TransformPair(OperatorRep(T, None, "positive_momentum"),
                         OperatorRep(T_inv, None, "positive_momentum"),
                         float(np.sqrt(p_max / p_min)))
    return pair, OperatorRep(H_hat, None, "positive_momentum")


def susy_momentum_hamiltonian(n_modes, p_min, p_max, params):
    """``(p - g(x))(p + g(x))`` in the same momentum window (``k = 0``)."""
    p = momentum_window(n_modes, p_min, p_max)
    X = position_in_momentum(p, "zero")
    gX = hermitian_function(X, params.sample)
    P = np.diag(p).astype(complex)
    return OperatorRep((P - gX) @ (P + gX), None, "positive_momentum")


def susy_checks(n_modes, p_min, p_max, params):
    """Residuals for the SUSY construction, keyed by check name.

    ``identity_n1``/``identity_n2``: ``sqrt(p) x^n sqrt(p) = p (x + i/(2p))^n``.
    ``hhat_hermiticity``: ``H_hat`` against its adjoint.
    ``similarity_vs_hhat``: ``T H T^{-1}`` against ``H_hat`` on interior vectors.
    ``shifted_form``: ``H_hat`` against ``p^2 - 2 p g(x + i/(2p))`` on interior
    vectors (built-in ``g`` only).
    """
    p = momentum_window(n_modes, p_min, p_max)
    W = momentum_window_vectors(p)
    pair, H_hat = susy_transform(n_modes, p_min, p_max, params)
    H = susy_momentum_hamiltonian(n_modes, p_min, p_max, params)
    out = {
        "identity_n1": sqrt_p_identity_residual(p, 1, W),
        "identity_n2": sqrt_p_identity_residual(p, 2, W),
        "hhat_hermiticity": hermiticity_residual(H_hat),
        "similarity_vs_hhat": windowed_relative(apply_similarity(pair, H).matrix,
                                                H_hat.matrix, W),
    }
    if params.name in ("tanh", "linear", "const"):
        X = position_in_momentum(p, "one-sided")
        P = np.diag(p).astype(complex)
        shifted = X + 0.5j * np.diag(1.0 / p)
        form = P @ P - 2 * P @ _analytic_g(params, shifted)
        out["shifted_form"] = windowed_relative(form, H_hat.matrix, W)
    return out
