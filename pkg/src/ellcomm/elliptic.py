"""Weierstrass elliptic functions on an arbitrary lattice.

The lattice is ``2*omega*Z + 2*omega_prime*Z``.  All evaluations go through
nome q-series on a Gauss-reduced basis of the lattice, after the argument has
been reduced to the parallelogram centred at the origin, so the series
converge at least like ``|q|**n`` with ``|q| <= exp(-pi*sqrt(3)/2)``.

Functions accept complex scalars or numpy arrays of complex values.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import InvalidTorus, PoleProximity

FD_STEP = 1e-5

_SERIES_TOL = 1e-18


def _gauss_reduce(p1: complex, p2: complex) -> tuple[complex, complex]:
    """Return a reduced basis of the lattice p1*Z + p2*Z with Im(p2/p1) > 0."""
    for _ in range(200):
        if abs(p2) < abs(p1):
            p1, p2 = p2, p1
        m = round((p2 / p1).real)
        if m == 0:
            break
        p2 = p2 - m * p1
    if (p2 / p1).imag < 0:
        p2 = -p2
    return p1, p2


class Torus:
    """Elliptic curve C / (2*omega*Z + 2*omega_prime*Z).

    Parameters
    ----------
    omega, omega_prime : complex
        Half-periods with ``Im(omega_prime/omega) > 0``.
    pole_guard : float, optional
        Absolute distance to a lattice point below which pole-bearing
        functions raise :class:`PoleProximity`.  Defaults to ``1e-6*|omega|``.

    Attributes
    ----------
    g2, g3 : complex
        Invariants in ``wp'**2 = 4 wp**3 - g2 wp - g3``.
    eta, eta_prime : complex
        Quasi-periods ``zeta(omega)`` and ``zeta(omega_prime)``.
    nome : complex
        ``exp(i*pi*omega_prime/omega)`` for the basis as given.
    """

    def __init__(self, omega, omega_prime, pole_guard=None):
        omega = complex(omega)
        omega_prime = complex(omega_prime)
        if omega == 0 or omega_prime == 0:
            raise InvalidTorus("half-periods must be nonzero")
        tau_user = omega_prime / omega
        if not tau_user.imag > 0:
            raise InvalidTorus(f"Im(omega'/omega) must be positive, got {tau_user!r}")
        self.omega = omega
        self.omega_prime = omega_prime
        self.pole_guard = 1e-6 * abs(omega) if pole_guard is None else float(pole_guard)
        if self.pole_guard <= 0:
            raise InvalidTorus("pole_guard must be positive")
        self.nome = cmath.exp(1j * math.pi * tau_user)

        p1, p2 = _gauss_reduce(2 * omega, 2 * omega_prime)
        self._w1 = p1 / 2
        self._w2 = p2 / 2
        tau = self._w2 / self._w1
        self._tau = tau
        q = cmath.exp(1j * math.pi * tau)
        self._q = q
        nmax = max(4, int(math.ceil(math.log(_SERIES_TOL) / math.log(abs(q)))) + 2)
        n = np.arange(1, nmax + 1, dtype=float)
        q2n = q ** (2 * n)
        self._n = n
        self._a = q2n / (1 - q2n)
        self._q2n = q2n
        self._q4n = q2n * q2n
        self._prod_den = (1 - q2n) ** 2

        w1 = self._w1
        k = math.pi / (2 * w1)
        self._k = k
        eta1 = (math.pi**2 / (12 * w1)) * (1 - 24 * np.sum(n * self._a))
        self._eta1 = complex(eta1)
        self._eta2 = (self._eta1 * self._w2 - 0.5j * math.pi) / w1
        self.g2 = complex((4 / 3) * k**4 * (1 + 240 * np.sum(n**3 * self._a)))
        self.g3 = complex((8 / 27) * k**6 * (1 - 504 * np.sum(n**5 * self._a)))

        self._neighbours = np.array([0, p1, -p1, p2, -p2, p1 + p2, -p1 - p2, p1 - p2, p2 - p1])
        self.eta = complex(self.zeta(omega))
        self.eta_prime = complex(self.zeta(omega_prime))

    def __repr__(self):
        return f"Torus(omega={self.omega!r}, omega_prime={self.omega_prime!r})"

    # -- argument handling -------------------------------------------------

    def _centred(self, z):
        z = np.asarray(z, dtype=complex)
        t = z / (2 * self._w1)
        y = t.imag / self._tau.imag
        x = t.real - y * self._tau.real
        m = np.round(x)
        k = np.round(y)
        zr = z - 2 * (m * self._w1 + k * self._w2)
        return zr, m, k

    def reduce(self, z):
        """Reduce ``z`` into the half-open parallelogram spanned by 2*omega, 2*omega_prime."""
        z = np.asarray(z, dtype=complex)
        t = z / (2 * self.omega)
        tau = self.omega_prime / self.omega
        y = t.imag / tau.imag
        x = t.real - y * tau.real
        out = z - 2 * (np.floor(x) * self.omega + np.floor(y) * self.omega_prime)
        return out[()] if out.ndim == 0 else out

    def lattice_distance(self, z):
        """Euclidean distance from ``z`` to the nearest lattice point."""
        zr, _, _ = self._centred(z)
        return np.min(np.abs(np.subtract.outer(zr, self._neighbours)), axis=-1)

    def _guard(self, z, what):
        d = self.lattice_distance(z)
        if np.any(d <= self.pole_guard):
            bad = np.asarray(z, dtype=complex).ravel()[np.argmin(np.ravel(d))]
            raise PoleProximity(f"{what}: argument {bad!r} is within {self.pole_guard:g} of a lattice point")

    # -- series on the centred domain ---------------------------------------

    def _v(self, zr):
        return self._k * zr

    def _zeta_c(self, zr):
        v = self._v(zr)
        s = np.sin(2 * np.multiply.outer(v, self._n)) @ self._a
        return self._eta1 * zr / self._w1 + self._k * (np.cos(v) / np.sin(v) + 4 * s)

    def _wp_c(self, zr):
        v = self._v(zr)
        s = np.cos(2 * np.multiply.outer(v, self._n)) @ (self._n * self._a)
        return -self._eta1 / self._w1 + self._k**2 * (1 / np.sin(v) ** 2 - 8 * s)

    def _wpp_c(self, zr):
        v = self._v(zr)
        s = np.sin(2 * np.multiply.outer(v, self._n)) @ (self._n**2 * self._a)
        sv = np.sin(v)
        return self._k**3 * (-2 * np.cos(v) / sv**3 + 16 * s)

    def _sigma_c(self, zr):
        v = self._v(zr)
        c = np.cos(2 * v)
        terms = (1 - 2 * np.multiply.outer(c, self._q2n) + self._q4n) / self._prod_den
        return (2 * self._w1 / math.pi) * np.exp(self._eta1 * zr**2 / (2 * self._w1)) * np.sin(v) * np.prod(terms, axis=-1)

    # -- public evaluations -------------------------------------------------

    def wp(self, z):
        self._guard(z, "wp")
        zr, _, _ = self._centred(z)
        return _out(self._wp_c(zr))

    def wp_prime(self, z):
        self._guard(z, "wp_prime")
        zr, _, _ = self._centred(z)
        return _out(self._wpp_c(zr))

    def wp_second(self, z):
        """``wp''(z) = 6 wp(z)**2 - g2/2``."""
        p = np.asarray(self.wp(z))
        return _out(6 * p**2 - self.g2 / 2)

    def zeta(self, z):
        self._guard(z, "zeta")
        return _out(self._zeta_unguarded(z))

    def _zeta_unguarded(self, z):
        zr, m, k = self._centred(z)
        return self._zeta_c(zr) + 2 * (m * self._eta1 + k * self._eta2)

    def sigma(self, z):
        zr, m, k = self._centred(z)
        w = m * self._w1 + k * self._w2
        ew = m * self._eta1 + k * self._eta2
        mi = m.astype(np.int64)
        ki = k.astype(np.int64)
        sign = np.where((mi + ki + mi * ki) % 2 == 0, 1.0, -1.0)
        return _out(sign * np.exp(2 * ew * (zr + w)) * self._sigma_c(zr))


def _out(a):
    a = np.asarray(a)
    return complex(a) if a.ndim == 0 else a


# Functional interface -------------------------------------------------------

def wp(t: Torus, z):
    return t.wp(z)


def wp_prime(t: Torus, z):
    return t.wp_prime(z)


def zeta_w(t: Torus, z):
    return t.zeta(z)


def sigma_w(t: Torus, z):
    return t.sigma(z)


def F(t: Torus, u, v):
    """``F(u, v) = zeta(u+v) - zeta(u-v) - 2 zeta(v)``, equal to ``wp'(v)/(wp(v)-wp(u))``."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    t._guard(u - v, "F")
    t._guard(u + v, "F")
    return _out(t.zeta(u + v) - t.zeta(u - v) - 2 * t.zeta(v))


def F_quotient(t: Torus, u, v):
    """The quotient form ``wp'(v)/(wp(v)-wp(u))`` of :func:`F`."""
    pv = np.asarray(t.wp(v))
    pu = np.asarray(t.wp(u))
    den = pv - pu
    if np.any(np.abs(den) <= 1e-12 * (1 + np.abs(pv))):
        raise PoleProximity("F: wp(u) and wp(v) coincide")
    return _out(np.asarray(t.wp_prime(v)) / den)


def V(t: Torus, u, v):
    """``V(u, v) = zeta(u+v) + zeta(u-v) - zeta(2u)``."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    return _out(t.zeta(u + v) + t.zeta(u - v) - t.zeta(2 * u))


def fd_derivative(f, z, h=FD_STEP):
    """Central difference of a holomorphic ``f``, averaged over the real and imaginary directions."""
    z = np.asarray(z, dtype=complex)
    dr = (np.asarray(f(z + h)) - np.asarray(f(z - h))) / (2 * h)
    di = (np.asarray(f(z + 1j * h)) - np.asarray(f(z - 1j * h))) / (2j * h)
    return _out(0.5 * (dr + di))


def logF_derivative_identities(t: Torus, u, v):
    """Residuals of the two logarithmic-derivative identities for ``F``.

    Returns
    -------
    residual_u : float
        ``|d/du ln F(u, v) + F(v, u)|``
    residual_v : float
        ``|d/dv ln F(u, v) + F(u, v) - 2 zeta(2v) + 4 zeta(v)|``

    Derivatives are taken by central differences with step ``FD_STEP``.
    """
    u = complex(u)
    v = complex(v)
    t._guard(v, "logF_derivative_identities")
    t._guard(2 * v, "logF_derivative_identities")
    fuv = F(t, u, v)
    fvu = F(t, v, u)
    dlog_u = fd_derivative(lambda x: F(t, x, v), u) / fuv
    dlog_v = fd_derivative(lambda x: F(t, u, x), v) / fuv
    res_u = abs(dlog_u + fvu)
    res_v = abs(dlog_v + fuv - 2 * t.zeta(2 * v) + 4 * t.zeta(v))
    return float(res_u), float(res_v)


def zeta_shift_series(t: Torus, gamma, order=3):
    """Taylor coefficients at ``z = 0`` of ``zeta(z - gamma) + zeta(gamma)``.

    Closed form through ``zeta' = -wp``: the coefficients are
    ``[0, -wp(gamma), wp'(gamma)/2, -wp''(gamma)/6][:order+1]``.
    """
    if not 0 <= order <= 3:
        raise ValueError("order must be in 0..3")
    gamma = complex(gamma)
    t._guard(gamma, "zeta_shift_series")
    p = t.wp(gamma)
    coeffs = [0j, -p, t.wp_prime(gamma) / 2, -(6 * p * p - t.g2 / 2) / 6]
    return coeffs[: order + 1]


def random_points(t: Torus, rng, count, margin=0.1):
    """Uniform points of the fundamental parallelogram at least ``margin*|omega|`` from the lattice."""
    out = []
    while len(out) < count:
        z = 2 * rng.uniform() * t.omega + 2 * rng.uniform() * t.omega_prime
        if t.lattice_distance(z) > margin * abs(t.omega):
            out.append(z)
    return np.array(out, dtype=complex)


def identity_suite(t: Torus, rng, count=100, margin=0.1) -> dict:
    """Worst relative residuals of the standard identities at ``count`` random points.

    Keys: ``wp_even``, ``wp_periodic``, ``ode``, ``zeta_derivative``,
    ``sigma_log_derivative``, ``zeta_quasi_periodic``, ``sigma_quasi_periodic``,
    ``legendre``, ``F_two_forms``, ``logF_u``, ``logF_v``.
    """
    z = random_points(t, rng, count, margin)
    w = np.array([2 * t.omega, 2 * t.omega_prime])
    eta = np.array([t.eta, t.eta_prime])
    p = np.asarray(t.wp(z))
    dp = np.asarray(t.wp_prime(z))
    ze = np.asarray(t.zeta(z))
    sg = np.asarray(t.sigma(z))
    out = {}
    out["wp_even"] = float(np.max(np.abs(np.asarray(t.wp(-z)) - p) / np.abs(p)))
    out["wp_periodic"] = float(max(np.max(np.abs(np.asarray(t.wp(z + wk)) - p) / np.abs(p)) for wk in w))
    rhs = 4 * p**3 - t.g2 * p - t.g3
    scale = np.abs(dp) ** 2 + 4 * np.abs(p) ** 3 + np.abs(t.g2 * p) + abs(t.g3)
    out["ode"] = float(np.max(np.abs(dp**2 - rhs) / scale))
    dz = np.asarray(fd_derivative(t.zeta, z))
    out["zeta_derivative"] = float(np.max(np.abs(dz + p) / (1 + np.abs(p))))
    ds = np.asarray(fd_derivative(t.sigma, z))
    out["sigma_log_derivative"] = float(np.max(np.abs(ds / sg - ze) / (1 + np.abs(ze))))
    zq, sq = 0.0, 0.0
    for wk, ek in zip(w, eta):
        zq = max(zq, float(np.max(np.abs(np.asarray(t.zeta(z + wk)) - ze - 2 * ek) / (1 + np.abs(ze)))))
        moved = np.asarray(t.sigma(z + wk))
        sq = max(sq, float(np.max(np.abs(moved + np.exp(2 * ek * (z + wk / 2)) * sg) / np.abs(moved))))
    out["zeta_quasi_periodic"] = zq
    out["sigma_quasi_periodic"] = sq
    leg = t.eta * t.omega_prime - t.eta_prime * t.omega - 0.5j * math.pi
    out["legendre"] = float(abs(leg) / (1 + abs(t.eta) * abs(t.omega_prime)))
    # pairs (u, v) with u +- v and 2v clear of the lattice
    pairs = []
    while len(pairs) < count:
        u, v = random_points(t, rng, 2, margin)
        if min(t.lattice_distance(u - v), t.lattice_distance(u + v), t.lattice_distance(2 * v)) > margin * abs(t.omega):
            pairs.append((u, v))
    u = np.array([a for a, _ in pairs])
    v = np.array([b for _, b in pairs])
    Fz = np.asarray(F(t, u, v))
    Fq = np.asarray(F_quotient(t, u, v))
    out["F_two_forms"] = float(np.max(np.abs(Fz - Fq) / (1 + np.abs(Fz))))
    ru = rv = 0.0
    for a, b, f in zip(u, v, Fz):
        r1, r2 = logF_derivative_identities(t, a, b)
        ru = max(ru, r1 / (1 + abs(F(t, b, a))))
        rv = max(rv, r2 / (1 + abs(f)))
    out["logF_u"] = ru
    out["logF_v"] = rv
    return out
