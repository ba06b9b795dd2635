"""Why exp(-theta p) is not an acceptable metric.

Its norm grows exponentially with the momentum cutoff, and for suitable
vectors one of the two inner products in the metric condition diverges.
"""
import numpy as np

from qherm import metric

for label, family in [("exp(-p)", metric.exp_p_family(1.0)),
                      ("(1+p^2)^-1", metric.resolvent_family()),
                      ("identity", metric.identity_family())]:
    report = metric.boundedness_probe(family, [16, 32, 64, 128])
    norms = ", ".join(f"{v:.3e}" for v in report.norms)
    print(f"{label:11s} cutoffs 8..64 -> {norms}  [{report.classification}]")

print()
print("   L   I1 (converges)                      |I2| (diverges)   I2 exhausted")
for row in metric.domain_failure_demo([2.0, 4.0, 6.0, 8.0]):
    print(f"{row.L:4.0f}   {row.I1:.12f}   {abs(row.I2):.3e}        {row.I2_exhausted}")
print("I1 still moves at the 1e-7 level between L=4 and L=8: the integrand's tail")
print("near x=-4 is about 4e-5, so the truncated value needs L beyond 4 to settle.")
