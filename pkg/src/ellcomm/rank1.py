"""Rank-one Baker-Akhiezer functions on a torus with two punctures.

For punctures ``p_plus``, ``p_minus`` and a divisor point ``gamma``::

    psi_n(z) = C_n * sigma(z - gamma - n U) / sigma(z - gamma)
                   * (sigma(z - p_minus) / sigma(z - p_plus))**n

with ``U = p_plus - p_minus``.  ``C_n`` makes the Laurent expansion at
``p_plus`` start with ``(z - p_plus)**-n``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elliptic import Torus
from .errors import DegenerateDivisor, PoleProximity
from .operators import GridFunction, eigen_residual, reconstruct_operator, relative_commutator_norm
from .sampling import torus_points


@dataclass(frozen=True, eq=False)
class Rank1Data:
    torus: Torus
    p_plus: complex
    p_minus: complex
    gamma: complex

    def __post_init__(self):
        t = self.torus
        for name in ("p_plus", "p_minus", "gamma"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        g = t.pole_guard
        if t.lattice_distance(self.p_plus - self.p_minus) <= g:
            raise DegenerateDivisor("p_plus and p_minus coincide on the torus")
        for name in ("p_plus", "p_minus"):
            if t.lattice_distance(self.gamma - getattr(self, name)) <= g:
                raise DegenerateDivisor(f"gamma coincides with {name}")

    @property
    def U(self) -> complex:
        # Not reduced mod the lattice: the quasi-periodicity factors only
        # cancel for this exact representative.
        return self.p_plus - self.p_minus

    def check_index(self, n: int):
        """Raise :class:`DegenerateDivisor` if ``p_plus - gamma - n U`` is a lattice point."""
        if self.torus.lattice_distance(self.p_plus - self.gamma - n * self.U) <= self.torus.pole_guard:
            raise DegenerateDivisor(f"normalization of psi_{n} vanishes")


def normalization(d: Rank1Data, n: int) -> complex:
    d.check_index(n)
    s = d.torus.sigma
    return s(d.p_plus - d.gamma) / (s(d.p_plus - d.gamma - n * d.U) * s(d.U) ** n)


def ba_function(d: Rank1Data, n: int, z):
    """``psi_n(z)``; ``z`` may be an array."""
    t = d.torus
    z = np.asarray(z, dtype=complex)
    for name, pt in (("gamma", d.gamma), ("p_plus", d.p_plus), ("p_minus", d.p_minus)):
        if np.any(t.lattice_distance(z - pt) <= t.pole_guard):
            raise PoleProximity(f"z too close to {name}")
    s = t.sigma
    c = normalization(d, n)
    val = c * np.asarray(s(z - d.gamma - n * d.U)) / np.asarray(s(z - d.gamma))
    val = val * (np.asarray(s(z - d.p_minus)) / np.asarray(s(z - d.p_plus))) ** n
    return val[()] if val.ndim == 0 else val


def psi_grid(d: Rank1Data, z: complex, n_min: int, n_max: int) -> GridFunction:
    return GridFunction(n_min, np.array([ba_function(d, n, z) for n in range(n_min, n_max + 1)]))


def periodicity_residual(d: Rank1Data, ns, zs) -> float:
    """Worst relative change of ``psi_n`` under both period shifts."""
    t = d.torus
    worst = 0.0
    for n in ns:
        base = np.asarray(ba_function(d, n, zs))
        for p in (2 * t.omega, 2 * t.omega_prime):
            moved = np.asarray(ba_function(d, n, zs + p))
            worst = max(worst, float(np.max(np.abs(moved - base) / np.abs(base))))
    return worst


def local_order(d: Rank1Data, n: int, point: complex, eps=(1e-2, 1e-3), direction=1 + 0.5j):
    """Log-slope estimate of the order of ``psi_n`` at ``point`` (zero > 0, pole < 0)."""
    u = direction / abs(direction)
    a, b = (abs(ba_function(d, n, point + e * u)) for e in eps)
    return float(np.log(a / b) / np.log(eps[0] / eps[1]))


def eigenvalue_functions(d: Rank1Data):
    """``f`` with simple poles and ``g`` with double poles at both punctures."""
    t = d.torus

    def f(z):
        return t.zeta(z - d.p_plus) - t.zeta(z - d.p_minus)

    def g(z):
        return t.wp(z - d.p_plus) + t.wp(z - d.p_minus)

    return f, g


def rank1_pair_check(d: Rank1Data, window=(-8, 8), n_samples=16, n_holdout=5, seed=0) -> dict:
    """Reconstruct ``L_f`` (spans 1,1) and ``L_g`` (spans 2,2) and test them.

    The returned report holds held-out eigen-residuals and the relative
    commutator norm of ``[L_f, L_g]`` on the rows both operators cover.
    """
    n_min, n_max = window
    f, g = eigenvalue_functions(d)
    pts = torus_points(d.torus, n_samples + n_holdout, seed=seed, avoid=(d.gamma, d.p_plus, d.p_minus), min_dist=0.1)
    fit, held = pts[:n_samples], pts[n_samples:]
    pad = 2
    grids = {z: psi_grid(d, z, n_min - 2 * pad, n_max + 2 * pad) for z in pts}

    def build(fun, span):
        samples = [(z, grids[z], fun(z)) for z in fit]
        return reconstruct_operator(samples, (span, span), (n_min - pad, n_max + pad))

    Lf, fit_f = build(f, 1)
    Lg, fit_g = build(g, 2)
    res_f = max(eigen_residual(Lf, grids[z], f(z)) for z in held)
    res_g = max(eigen_residual(Lg, grids[z], g(z)) for z in held)
    comm = relative_commutator_norm(Lf, Lg)
    return {
        "eigen_residual_f": res_f,
        "eigen_residual_g": res_g,
        "commutator_norm": comm,
        "fit_residual_f": fit_f,
        "fit_residual_g": fit_g,
        "window": [n_min, n_max],
        "sample_count": int(n_samples),
        "operators": {"L_f": Lf, "L_g": Lg},
    }
