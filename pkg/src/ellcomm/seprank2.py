"""Rank-two eigenfunctions with two separated punctures ``+-z0`` on a torus.

The vector eigenfunction ``psi_n = (psi_n^0, psi_n^1)`` has simple poles at
two points ``gamma_1``, ``gamma_2`` whose residues are tied by
``res psi^0 = a_s res psi^1`` and is normalized by ``psi_n^i = delta_{in}``
for ``i, n in {0, 1}``.  Even and odd ``n`` have separate sigma-function
formulas; write ``n = 2m`` or ``n = 2m + 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elliptic import Torus
from .errors import DegenerateDivisor, PoleProximity, RankDeficient
from .operators import (
    GridFunction,
    eigen_residual,
    reconstruct_operator,
    relative_commutator_norm,
)
from .sampling import torus_points

RESIDUE_STEPS = (1e-3, 5e-4)


@dataclass(frozen=True, eq=False)
class SepRank2Data:
    torus: Torus
    z0: complex
    gamma1: complex
    gamma2: complex
    a1: complex
    a2: complex

    def __post_init__(self):
        for name in ("z0", "gamma1", "gamma2", "a1", "a2"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        t = self.torus
        g = t.pole_guard
        if t.lattice_distance(self.z0) <= g or t.lattice_distance(2 * self.z0) <= g:
            raise DegenerateDivisor("z0 (or 2 z0) is a lattice point")
        if t.lattice_distance(self.gamma1 - self.gamma2) <= g:
            raise DegenerateDivisor("gamma1 and gamma2 coincide on the torus")
        if abs(self.a1 - self.a2) <= 1e-12 * (abs(self.a1) + abs(self.a2)):
            raise DegenerateDivisor("a1 == a2")
        if self.a1 == 0 or self.a2 == 0:
            raise DegenerateDivisor("a1 and a2 must be nonzero")

    @classmethod
    def default(cls):
        """Generic demo parameters on the square lattice."""
        return cls(Torus(1, 1j), 0.23 + 0.11j, 0.61, 1.17 + 0.4j, 1.3, -0.7)

    def with_slopes(self, a1=None, a2=None):
        return SepRank2Data(self.torus, self.z0, self.gamma1, self.gamma2,
                            self.a1 if a1 is None else a1, self.a2 if a2 is None else a2)

    def check_index(self, n: int):
        """Raise :class:`DegenerateDivisor` if a sigma factor of ``psi_n`` vanishes."""
        t, z0 = self.torus, self.z0
        m = n // 2
        args = {"2m z0": 2 * m * z0} if m else {}
        for k in (2 * m - 1, 2 * m + 1):
            args[f"gamma1 + {k} z0"] = self.gamma1 + k * z0
            args[f"gamma2 + {k} z0"] = self.gamma2 + k * z0
        for name, a in args.items():
            if t.lattice_distance(a) <= t.pole_guard:
                raise DegenerateDivisor(f"psi_{n}: {name} is a lattice point")


def even_coefficients(d: SepRank2Data, m: int, form="cancelled"):
    """``(A_m, B_m, C_m)`` for ``psi_{2m}``.

    ``form="printed"`` multiplies ``B``, ``C`` out of ``A`` literally, which
    is 0/0 at ``m = 0``; the default cancels the common factors first.
    """
    d.check_index(2 * m)
    s = d.torus.sigma
    z0, g1, g2, a1, a2 = d.z0, d.gamma1, d.gamma2, d.a1, d.a2
    s2 = s(2 * z0) ** m
    p1 = s(g1 + (2 * m - 1) * z0)
    p2 = s(g2 + (2 * m - 1) * z0)
    A = s(2 * m * z0) * s(g1 - g2) / ((a1 - a2) * s2 * p2 * p1)
    if form == "printed":
        if m == 0:
            raise DegenerateDivisor("printed form is 0/0 at m = 0")
        B = a1 * A * p2 * s(g1 - z0) / (s(g1 - g2) * s(2 * m * z0))
        C = a2 * A * p1 * s(g2 - z0) / (s(g2 - g1) * s(2 * m * z0))
    elif form == "cancelled":
        B = a1 * s(g1 - z0) / ((a1 - a2) * s2 * p1)
        C = -a2 * s(g2 - z0) / ((a1 - a2) * s2 * p2)
    else:
        raise ValueError(f"unknown form {form!r}")
    return A, B, C


def odd_coefficients(d: SepRank2Data, m: int, form="cancelled"):
    """``(A'_m, B'_m, C'_m)`` for ``psi_{2m+1}``.

    ``A'`` carries an overall minus sign relative to the textbook-style
    expression ``sigma(2m z0) sigma(g1-g2) / (sigma(2z0)^m (I' - I''))``;
    without it ``psi_1^1 = -1`` instead of 1.
    """
    d.check_index(2 * m + 1)
    s = d.torus.sigma
    z0, g1, g2, a1, a2 = d.z0, d.gamma1, d.gamma2, d.a1, d.a2
    s2 = s(2 * z0) ** m
    q1 = s(g1 + (2 * m + 1) * z0)
    q2 = s(g2 + (2 * m + 1) * z0)
    I1 = q2 * s(g1 + (2 * m - 1) * z0) * s(g1 + z0) / (a1 * s(z0 - g1))
    I2 = q1 * s(g2 + (2 * m - 1) * z0) * s(g2 + z0) / (a2 * s(z0 - g2))
    dI = I1 - I2
    if abs(dI) <= 1e-300:
        raise DegenerateDivisor(f"psi_{2 * m + 1}: I' == I''")
    A = -s(2 * m * z0) * s(g1 - g2) / (s2 * dI)
    if form == "printed":
        if m == 0:
            raise DegenerateDivisor("printed form is 0/0 at m = 0")
        B = A * q2 * s(g1 + z0) / (a1 * s(g1 - g2) * s(2 * m * z0))
        C = A * q1 * s(g2 + z0) / (a2 * s(g2 - g1) * s(2 * m * z0))
    elif form == "cancelled":
        B = -s(g1 + z0) * q2 / (a1 * s2 * dI)
        C = s(g2 + z0) * q1 / (a2 * s2 * dI)
    else:
        raise ValueError(f"unknown form {form!r}")
    return A, B, C


def psi_component(d: SepRank2Data, n: int, i: int, z, form="cancelled"):
    """``psi_n^i(z)`` for ``i in {0, 1}``; ``z`` may be an array."""
    if i not in (0, 1):
        raise ValueError("component index must be 0 or 1")
    t = d.torus
    z = np.asarray(z, dtype=complex)
    for name, pt in (("gamma1", d.gamma1), ("gamma2", d.gamma2), ("z0", d.z0), ("-z0", -d.z0)):
        if np.any(t.lattice_distance(z - pt) <= t.pole_guard):
            raise PoleProximity(f"z too close to {name}")
    s = t.sigma
    z0, g1, g2 = d.z0, d.gamma1, d.gamma2
    m, odd = divmod(n, 2)
    tail = (np.asarray(s(z + z0)) / np.asarray(s(z - z0))) ** m
    den = np.asarray(s(z - g1)) * np.asarray(s(z - g2))
    if odd:
        A, B, C = odd_coefficients(d, m, form)
        if i == 0:
            out = A * np.asarray(s(z + z0)) * np.asarray(s(z - g1 - g2 - (2 * m + 1) * z0)) / den
        else:
            out = (B * np.asarray(s(z - g1 - 2 * m * z0)) / np.asarray(s(z - g1))
                   + C * np.asarray(s(z - g2 - 2 * m * z0)) / np.asarray(s(z - g2)))
    else:
        A, B, C = even_coefficients(d, m, form)
        if i == 1:
            out = A * np.asarray(s(z - z0)) * np.asarray(s(z - g1 - g2 - (2 * m - 1) * z0)) / den
        else:
            out = (B * np.asarray(s(z - g1 - 2 * m * z0)) / np.asarray(s(z - g1))
                   + C * np.asarray(s(z - g2 - 2 * m * z0)) / np.asarray(s(z - g2)))
    out = out * tail
    return out[()] if out.ndim == 0 else out


def psi_grid(d: SepRank2Data, i: int, z: complex, n_min: int, n_max: int) -> GridFunction:
    return GridFunction(n_min, np.array([psi_component(d, n, i, z) for n in range(n_min, n_max + 1)]))


def residue(d: SepRank2Data, n: int, i: int, point: complex, steps=RESIDUE_STEPS):
    """Residue of ``psi_n^i`` at ``point`` by a symmetric limit plus one Richardson step.

    Returns ``(residue, scale)`` where ``scale`` is the size of the sampled
    ``(z - point) psi`` values, used to decide when a residue is zero.
    """
    est = []
    scale = 0.0
    for e in steps:
        hi = e * psi_component(d, n, i, point + e)
        lo = -e * psi_component(d, n, i, point - e)
        est.append(0.5 * (hi + lo))
        scale = max(scale, abs(hi), abs(lo))
    h1, h2 = steps
    ratio = (h1 / h2) ** 2
    return (ratio * est[1] - est[0]) / (ratio - 1), scale


def residue_relation_check(d: SepRank2Data, n: int, slopes=None):
    """``r_s = |a_s res_s^1 - res_s^0| / (|res_s^0| + |res_s^1|)`` at both poles.

    ``slopes`` overrides ``(a1, a2)`` in the relation only (not in the data).
    A pair of residues that both vanish to rounding gives ``r_s = 0``.
    """
    a = (d.a1, d.a2) if slopes is None else slopes
    out = []
    for a_s, g in zip(a, (d.gamma1, d.gamma2)):
        r0, sc0 = residue(d, n, 0, g)
        r1, sc1 = residue(d, n, 1, g)
        den = abs(r0) + abs(r1)
        if den <= 1e-8 * max(sc0, sc1, 1e-300):
            out.append(0.0)
        else:
            out.append(float(abs(a_s * r1 - r0) / den))
    return tuple(out)


def normalization_residuals(d: SepRank2Data, zs) -> dict:
    """``max |psi_n^i(z) - delta_{in}|`` for ``i, n in {0, 1}``."""
    out = {}
    for n in (0, 1):
        for i in (0, 1):
            v = np.asarray(psi_component(d, n, i, zs))
            out[f"psi_{n}^{i}"] = float(np.max(np.abs(v - (1.0 if i == n else 0.0))))
    return out


def periodicity_residual(d: SepRank2Data, ns, zs) -> float:
    t = d.torus
    worst = 0.0
    for n in ns:
        for i in (0, 1):
            base = np.asarray(psi_component(d, n, i, zs))
            for p in (2 * t.omega, 2 * t.omega_prime):
                moved = np.asarray(psi_component(d, n, i, zs + p))
                worst = max(worst, float(np.max(np.abs(moved - base) / np.maximum(np.abs(base), 1e-300))))
    return worst


def eigenvalue_functions(d: SepRank2Data):
    """``f`` with simple poles and ``g`` with double poles at ``+-z0``."""
    t = d.torus

    def f(z):
        return t.zeta(z - d.z0) - t.zeta(z + d.z0)

    def g(z):
        return t.wp(z - d.z0) + t.wp(z + d.z0)

    return f, g


def seprank2_operator_check(d: SepRank2Data, window=(-8, 8), n_samples=16, n_holdout=5, seed=0) -> dict:
    """Reconstruct ``L_f`` (spans 2,2) and ``L_g`` (spans 4,4) from both components.

    Also attempts ``L_f`` from component 0 alone.  That system is singular:
    the five shifted ``psi^0`` lie in a four-dimensional space of elliptic
    functions, so the attempt normally ends in :class:`RankDeficient`, which
    is recorded (``component_agreement`` is then ``None``).  The eigen
    relation of the joint operator is also checked per component.
    """
    n_min, n_max = window
    f, g = eigenvalue_functions(d)
    pts = torus_points(d.torus, n_samples + n_holdout, seed=seed,
                       avoid=(d.gamma1, d.gamma2, d.z0, -d.z0), min_dist=0.1)
    fit, held = pts[:n_samples], pts[n_samples:]
    pad = 4
    lo, hi = n_min - 2 * pad, n_max + 2 * pad
    grids = {(z, i): psi_grid(d, i, z, lo, hi) for z in pts for i in (0, 1)}
    rows = (n_min - pad, n_max + pad)

    def build(fun, span, comps=(0, 1)):
        samples = [(z, grids[(z, i)], fun(z)) for z in fit for i in comps]
        return reconstruct_operator(samples, (span, span), rows)

    Lf, fit_f = build(f, 2)
    Lg, fit_g = build(g, 4)
    per_component = {
        str(i): max(eigen_residual(Lf, grids[(z, i)], f(z)) for z in held) for i in (0, 1)
    }
    held_f = max(per_component.values())
    held_g = max(eigen_residual(Lg, grids[(z, i)], g(z)) for z in held for i in (0, 1))
    try:
        Lf0, _ = build(f, 2, comps=(0,))
        scale = float(np.max(np.abs(Lf.coeffs)))
        agreement = float(np.max(np.abs(Lf0.coeffs - Lf.coeffs)) / scale)
        component_error = None
    except RankDeficient as exc:
        Lf0, agreement, component_error = None, None, str(exc)
    return {
        "eigen_residuals": {"f": held_f, "g": held_g},
        "component_eigen_residuals": per_component,
        "fit_residuals": {"f": fit_f, "g": fit_g},
        "commutator_norm": relative_commutator_norm(Lf, Lg),
        "component_agreement": agreement,
        "component0_error": component_error,
        "window": [n_min, n_max],
        "sample_count": int(n_samples),
        "operators": {"L_f": Lf, "L_g": Lg, "L_f_component0": Lf0},
    }


def seprank2_report(d: SepRank2Data, window=(-8, 8), seed=0, ns=range(0, 5)) -> dict:
    """The JSON-ready summary used by the experiment runner."""
    zs = torus_points(d.torus, 8, seed=seed + 1, avoid=(d.gamma1, d.gamma2, d.z0, -d.z0), min_dist=0.1)
    ops = seprank2_operator_check(d, window, seed=seed)
    return {
        "normalization_residuals": normalization_residuals(d, zs),
        "periodicity_residual": periodicity_residual(d, range(-2, 5), zs),
        "tu_residuals": {str(n): list(residue_relation_check(d, n)) for n in ns},
        "eigen_residuals": ops["eigen_residuals"],
        "commutator_norm": ops["commutator_norm"],
        "component_agreement": ops["component_agreement"],
        "component0_error": ops["component0_error"],
        "component_eigen_residuals": ops["component_eigen_residuals"],
    }
