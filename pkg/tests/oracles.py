"""Independent reference computations used only by the tests."""
from __future__ import annotations

import mpmath as mp
import numpy as np

from ellcomm import tyurin as ty
from ellcomm.operators import GridFunction

mp.mp.dps = 30


class ThetaWeierstrass:
    """sigma, zeta, wp from Jacobi theta_1 in mpmath (30 digits).

    ``sigma(z) = (2w/pi) exp(eta z^2 / (2w)) theta_1(v) / theta_1'(0)`` with
    ``v = pi z / (2w)`` and ``eta = -(pi^2 / (12 w)) theta_1'''(0) / theta_1'(0)``.
    """

    def __init__(self, omega, omega_prime):
        self.w = mp.mpc(omega)
        self.q = mp.exp(1j * mp.pi * mp.mpc(omega_prime) / self.w)
        d1 = mp.jtheta(1, 0, self.q, 1)
        d3 = mp.jtheta(1, 0, self.q, 3)
        self.d1 = d1
        self.eta = -(mp.pi**2 / (12 * self.w)) * d3 / d1

    def sigma(self, z):
        z = mp.mpc(z)
        v = mp.pi * z / (2 * self.w)
        return (2 * self.w / mp.pi) * mp.exp(self.eta * z**2 / (2 * self.w)) * mp.jtheta(1, v, self.q) / self.d1

    def zeta(self, z):
        z = mp.mpc(z)
        v = mp.pi * z / (2 * self.w)
        k = mp.pi / (2 * self.w)
        return self.eta * z / self.w + k * mp.jtheta(1, v, self.q, 1) / mp.jtheta(1, v, self.q)

    def wp(self, z):
        z = mp.mpc(z)
        v = mp.pi * z / (2 * self.w)
        k = mp.pi / (2 * self.w)
        t0 = mp.jtheta(1, v, self.q)
        t1 = mp.jtheta(1, v, self.q, 1)
        t2 = mp.jtheta(1, v, self.q, 2)
        return -self.eta / self.w - k**2 * (t2 * t0 - t1**2) / t0**2


def lattice_sum_wp(z, omega, omega_prime, M):
    """Truncated ``z^-2 + sum' [(z-w)^-2 - w^-2]`` over ``|m|, |k| <= M``."""
    m = np.arange(-M, M + 1)
    W = (2 * omega * m[:, None] + 2 * omega_prime * m[None, :]).ravel()
    W = W[W != 0]
    return complex(1 / z**2 + np.sum(1 / (z - W) ** 2 - 1 / W**2))


def lattice_sum_wp_extrapolated(z, omega, omega_prime, M=200):
    """Richardson combination ``(4 S_M - S_{M/2}) / 3`` removing the ``1/M^2`` tail."""
    return (4 * lattice_sum_wp(z, omega, omega_prime, M) - lattice_sum_wp(z, omega, omega_prime, M // 2)) / 3


def vector_ba(t, run, gamma, z, n0, n_end):
    """Frame ``e_n`` from ``e_{n0} = (1,0)``, ``e_{n0+1} = (0,1)`` and ``e_{m+2} = chi1 e_m + chi2 e_{m+1}``."""
    e = {n0: np.array([1, 0], complex), n0 + 1: np.array([0, 1], complex)}
    for m in range(n0, n_end - 1):
        chi1, chi2 = ty.chi_functions(t, run.states[m], gamma[m + 1], run.v[m + 1], z)
        e[m + 2] = chi1 * e[m] + chi2 * e[m + 1]
    return e


def vector_ba_samples(t, run, gamma, zs, n0, n_end, eigen):
    """Reconstruction samples (both components) with eigenvalue ``eigen(z)``."""
    out = []
    for z in zs:
        e = vector_ba(t, run, gamma, z, n0, n_end)
        for i in (0, 1):
            gf = GridFunction(n0, np.array([e[n][i] for n in range(n0, n_end + 1)]))
            out.append((z, gf, eigen(z)))
    return out


def L2_squared_by_hand(c, v, n):
    """Coefficients of ``(T + v + c T^-1)^2`` at row ``n`` for shifts -2..2."""
    return {
        2: 1.0,
        1: v[n + 1] + v[n],
        0: c[n + 1] + v[n] ** 2 + c[n],
        -1: c[n] * v[n - 1] + v[n] * c[n],
        -2: c[n] * c[n - 1],
    }
