"""A sequence that converges in the plain norm but not in a weighted one.

With orthonormal vectors v_k and the diagonal weight k, the vectors
u_n = v_n / sqrt(n) shrink to zero in the ordinary norm, yet every pair stays
sqrt(2) apart once distances are measured with the weight.
"""
from qherm.completion import cauchy_profile, counterexample_sequence

print(" n   |u_n - u_2n|   weighted")
for n, plain, weighted in cauchy_profile(12):
    print(f"{n:2d}   {plain:.6f}       {weighted:.15f}")

# the weighted distance does not depend on the pair at all
print(counterexample_sequence(3, 1000), counterexample_sequence(999, 1000))
