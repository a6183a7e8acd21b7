"""
Weierstrass functions on a torus
================================

Evaluate wp, zeta and sigma on a skew lattice and watch the classical
identities hold to rounding level.
"""
import numpy as np

from ellcomm import Torus
from ellcomm.elliptic import identity_suite

# a lattice 2w Z + 2w' Z with a skew period ratio
t = Torus(0.8 + 0.3j, 0.2 + 1.1j)
print("g2 =", t.g2)
print("g3 =", t.g3)
print("nome q =", t.nome)

z = 0.35 - 0.6j
print("wp(z)    =", t.wp(z))
print("zeta(z)  =", t.zeta(z))
print("sigma(z) =", t.sigma(z))

# wp is doubly periodic; zeta picks up 2 eta per period
print("wp(z + 2w) - wp(z)             =", abs(t.wp(z + 2 * t.omega) - t.wp(z)))
print("zeta(z + 2w) - zeta(z) - 2 eta =", abs(t.zeta(z + 2 * t.omega) - t.zeta(z) - 2 * t.eta))

# Legendre: eta w' - eta' w = i pi / 2
print("Legendre defect:", abs(t.eta * t.omega_prime - t.eta_prime * t.omega - 0.5j * np.pi))

# the whole suite at 100 random points
for name, r in identity_suite(t, np.random.default_rng(0), count=100).items():
    print(f"  {name:22s} {r:.2e}")
