import numpy as np
import pytest

from qherm import completion, models
from qherm.errors import EigenpairResidualError, RankDeficientError
from qherm.linalg import eig_general
from qherm.transform import hermiticity_residual


@pytest.fixture(scope="module")
def chain_set():
    H = models.hatano_nelson_chain(12, 1.0, 0.3)
    return H, completion.EigenSet.from_spectrum(eig_general(H.matrix, vectors=True))


@pytest.mark.parametrize("n, m", [(1, 2), (3, 17), (40, 41)])
def test_counterexample_distances(n, m):
    ambient, weighted = completion.counterexample_sequence(n, m)
    assert ambient == pytest.approx(np.sqrt(1 / n + 1 / m), abs=1e-14)
    assert weighted == pytest.approx(np.sqrt(2), abs=1e-14)


def test_cauchy_profile_ambient_shrinks_weighted_does_not():
    rows = completion.cauchy_profile(16)
    ambient = [r[1] for r in rows]
    assert all(b < a for a, b in zip(ambient, ambient[1:]))
    assert np.allclose([r[2] for r in rows], np.sqrt(2))
    with pytest.raises(ValueError):
        completion.cauchy_profile(1)


def test_eigenset_orders_and_normalizes(rng):
    Psi = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    eigs = completion.EigenSet.from_vectors(Psi, np.array([2.0, -1.0, 0.5]))
    assert list(eigs.E) == [-1.0, 0.5, 2.0]
    assert np.allclose(np.linalg.norm(eigs.Psi, axis=0), 1.0)
    # the lowest energy column is the old second column up to a phase
    overlap = np.vdot(eigs.Psi[:, 0], Psi[:, 1]) / np.linalg.norm(Psi[:, 1])
    assert abs(overlap) == pytest.approx(1.0)
    assert abs(eigs.Psi[0, 0].imag) < 1e-15 and eigs.Psi[0, 0].real > 0


def test_eigenset_rejects_bad_input(rng):
    Psi = rng.standard_normal((5, 2)).astype(complex)
    with pytest.raises(ValueError):
        completion.EigenSet.from_vectors(Psi, np.array([1.0 + 0.1j, 2.0]))
    with pytest.raises(ValueError):
        completion.EigenSet.from_vectors(Psi, np.array([1.0]))
    with pytest.raises(ValueError):
        completion.EigenSet.from_vectors(rng.standard_normal((2, 3)), np.zeros(3))


def test_dependent_columns_are_rank_deficient(rng):
    v = rng.standard_normal(5)
    Psi = np.stack([v, 2 * v + 1e-14 * rng.standard_normal(5)], axis=1)
    eigs = completion.EigenSet.from_vectors(Psi, np.array([1.0, 2.0]))
    with pytest.raises(RankDeficientError):
        completion.VInnerProduct(eigs)


def test_inner_product_makes_eigenvectors_orthonormal(chain_set):
    _, eigs = chain_set
    ip = completion.build_v_inner_product(eigs)
    assert np.linalg.norm(ip.gram() - np.eye(eigs.size)) < 1e-10
    u = eigs.Psi @ np.arange(1, eigs.size + 1)
    assert ip(u, u).real == pytest.approx(ip.norm(u) ** 2)
    assert abs(ip(u, u).imag) < 1e-12


def test_coordinate_map_pair(chain_set):
    _, eigs = chain_set
    pair = completion.build_T(eigs)
    assert pair.T.matrix.shape == (eigs.size, 12)
    assert np.linalg.norm(pair.T.matrix @ pair.T_inv.matrix - np.eye(eigs.size)) < 1e-10


def test_hermitize_and_verify_on_chain(chain_set, rng):
    H, eigs = chain_set
    H_hat, diag = completion.hermitize(H, eigs)
    assert diag < 1e-12
    assert hermiticity_residual(H_hat) < 1e-12
    assert completion.verify_hermitian_in_v(H, eigs, 50, rng) < 1e-12


def test_partial_span_needs_no_completeness(chain_set, rng):
    H, eigs = chain_set
    part = completion.EigenSet.from_vectors(eigs.Psi[:, 2:6], eigs.E[2:6])
    H_hat, diag = completion.hermitize(H, part)
    assert H_hat.shape == (4, 4)
    assert diag < 1e-12
    assert completion.verify_hermitian_in_v(H, part, 20, rng) < 1e-12


def test_wrong_eigenpair_rejected(chain_set, rng):
    H, eigs = chain_set
    wrong = completion.EigenSet.from_vectors(eigs.Psi, eigs.E + 0.01)
    with pytest.raises(EigenpairResidualError):
        completion.hermitize(H, wrong)
    with pytest.raises(EigenpairResidualError):
        completion.verify_hermitian_in_v(H, wrong, 3, rng)


def test_perturbation_moves_only_one_eigenvalue(chain_set):
    H, eigs = chain_set
    B = completion.perturb_eigenvalue(H, eigs, 4, 0.1j)
    w = eig_general(B.matrix).eigenvalues
    target = eigs.E.astype(complex)
    target[4] += 0.1j
    assert np.abs(np.sort_complex(w) - np.sort_complex(target)).max() < 1e-10


@pytest.mark.parametrize("index", [0, 5, 11])
def test_detector_matches_closed_form(chain_set, index):
    H, eigs = chain_set
    B = completion.perturb_eigenvalue(H, eigs, index, 0.1j)
    got = completion.verify_hermitian_in_v(B, eigs, 40, np.random.default_rng(7),
                                           check_pairs=False)
    # replay the same draws: the asymmetry is 2 |Im E| |c_n d_n| / (|c| |d| ||H||_V)
    rng = np.random.default_rng(7)
    k = eigs.size
    scale = np.abs(eigs.E + 0.1j * (np.arange(k) == index)).max()
    expected = 0.0
    for _ in range(40):
        c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        d = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        value = 0.2 * abs(c[index] * d[index]) / (np.linalg.norm(c) * np.linalg.norm(d) * scale)
        expected = max(expected, value)
    assert got == pytest.approx(expected, rel=1e-8)


def test_coordinate_map_is_an_isometry(chain_set, rng):
    _, eigs = chain_set
    ip = completion.VInnerProduct(eigs)
    T = completion.build_T(eigs).T.matrix
    worst = 0.0
    for _ in range(100):
        u = eigs.Psi @ (rng.standard_normal(eigs.size) + 1j * rng.standard_normal(eigs.size))
        v = eigs.Psi @ (rng.standard_normal(eigs.size) + 1j * rng.standard_normal(eigs.size))
        worst = max(worst, abs(ip(u, v) - np.vdot(T @ u, T @ v)) / (ip.norm(u) * ip.norm(v)))
    assert worst <= 1e-8 * eigs.gram_condition
