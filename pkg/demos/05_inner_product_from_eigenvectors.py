"""An inner product built from eigenvectors alone.

Declare the eigenvectors orthonormal and read coordinates with a
pseudo-inverse. In those coordinates the Hamiltonian is diag(E), and it is
symmetric in the new inner product. No metric operator and no completeness
assumption are needed. Breaking the reality of one eigenvalue shows up at
once as an asymmetry.
"""
import numpy as np

from qherm import completion, models
from qherm.linalg import eig_general
from qherm.transform import hermiticity_residual

H = models.hatano_nelson_chain(30, 1.0, 0.4)
eigs = completion.EigenSet.from_spectrum(eig_general(H.matrix, vectors=True))
print(f"{eigs.size} eigenvectors, Gram condition {eigs.gram_condition:.2e}")

H_hat, diag = completion.hermitize(H, eigs)
print(f"distance from diag(E): {diag:.1e}, Hermiticity: {hermiticity_residual(H_hat):.1e}")

rng = np.random.default_rng(0)
print("symmetry defect over 100 random pairs:",
      completion.verify_hermitian_in_v(H, eigs, 100, rng))

bumped = completion.perturb_eigenvalue(H, eigs, 15, 0.1j)
print("after E_15 -> E_15 + 0.1i:",
      completion.verify_hermitian_in_v(bumped, eigs, 100, np.random.default_rng(0),
                                       check_pairs=False))

# a subset of eigenvectors works just as well
part = completion.EigenSet.from_vectors(eigs.Psi[:, :5], eigs.E[:5])
print("five-vector span:", completion.hermitize(H, part)[1])
