"""
The elliptic Toda chain
=======================

Four particles on the line Im x = Im(w')/2 of a rectangular torus move under
x'' = (x'^2 - 1)(V(x_n, x_{n+1}) + V(x_n, x_{n-1})).  The energy is conserved
and the induced (c_n, v_n) follow the Toda-type flow.
"""
import numpy as np

from ellcomm import Torus
from ellcomm import elltoda as et

t = Torus(1, 1.3j)
chain = et.sample_chain(t, np.random.default_rng(2), N=4)
print("x0 =", chain.x)
print("x'0 =", chain.xdot.real)
print("H =", chain.hamiltonian())

traj = et.integrate(chain, 10.0, 1e-3, output_stride=100)
print("energy drift over T=10:", traj.energy_drift)

# RK4: halving dt should cut the drift by about 16
drifts = [et.integrate(chain, 10.0, h, output_stride=10).energy_drift for h in (0.02, 0.01, 0.005)]
print("drift ratios:", drifts[0] / drifts[1], drifts[1] / drifts[2])

short = et.integrate(chain, 2.0, 1e-3)
print("compatibility:", et.compatibility_check(short))

# coupling both neighbours through V(x_n, x_{n+1}) is not compatible
typo = et.integrate(chain, 0.2, 1e-3, variant="printed")
print("printed coupling R_c:", et.compatibility_check(typo)["R_c_max"])
