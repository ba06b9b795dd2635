"""The factorized SUSY Hamiltonian in a positive-momentum window.

With x = i d/dp on p in [0.5, 20], sqrt(p) x sqrt(p) equals p (x + i/(2p))
away from the window edges, and T = sqrt(p) exp(iG(x)) maps
(p - g)(p + g) to p^2 - 2 sqrt(p) g(x) sqrt(p), which is Hermitian.
"""
from qherm import models, transform

for name, scale in [("const", 0.0), ("tanh", 1.0), ("linear", 0.3)]:
    checks = transform.susy_checks(256, 0.5, 20.0, models.susy_catalog(name, scale))
    print(f"{name:6s} scale {scale}")
    for key, value in checks.items():
        print(f"    {key:20s} {value:.2e}")
