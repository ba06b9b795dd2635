"""Numerical laboratory for non-Hermitian Hamiltonians with real spectra.

Discretized models, a self-contained general eigensolver, candidate metric
operators with truncation diagnostics, explicit similarity transforms, and
an inner product assembled directly from eigenvectors.
"""
from .completion import (EigenSet, VInnerProduct, build_T, build_v_inner_product,
                         cauchy_profile, counterexample_sequence, hermitize,
                         perturb_eigenvalue, verify_hermitian_in_v)
from .discretize import (Grid, OperatorRep, antiderivative, func_of_p, func_of_x,
                         hermite_truncation, kinetic_op, momentum_op, position_op)
from .errors import (BranchError, ConvergenceError, DimensionMismatchError,
                     EigenpairResidualError, HermiticityError, NonFiniteError,
                     NonFiniteSampleError, NumericalError, OverflowRiskError,
                     QhermError, RankDeficientError, SingularMatrixError,
                     UnderResolvedBasisError)
from .linalg import (Spectrum, adjoint, eig_general, eig_hermitian, inverse,
                     multiset_distance, operator_norm)
from .metric import (MetricDiagnostics, NormGrowthReport, boundedness_probe, diagnose,
                     domain_failure_demo, eta_exp_p, eta_gauge, eta_susy)
from .models import (GaugeField, MorseParams, SusyParams, bound_states, complex_morse,
                     gauged_hamiltonian, hatano_nelson_chain, real_morse, susy_catalog,
                     susy_hamiltonian)
from .transform import (TransformPair, apply_similarity, gauge_transform,
                        hatano_nelson_gauge, morse_shift_transform, susy_transform)

__version__ = "0.1.0"
