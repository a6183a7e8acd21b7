"""Discrete dynamics of rank-2 Tyurin parameters on an elliptic curve.

The transfer matrix ``X_n = [[0, 1], [chi1_n(z), chi2_n(z)]]`` maps the frame
``(psi_n, psi_{n+1})`` to ``(psi_{n+1}, psi_{n+2})``.  Its pole points are
``gamma_n + c`` and ``-gamma_n + c``; its zeros are the next pole points, and
the slopes ``a_n^s`` of the Tyurin vectors ``(a_n^s, 1)`` follow from the left
null vectors.  From these data the order-4 operator ``L4`` commuting with an
order-6 partner is assembled in closed form.

Two parametrisations are supported:

* general: free ``gamma_n``, ``v_n``, a constant ``c`` and initial slopes;
* symmetric (``c = 0``): free ``gamma_n`` and ``s_n``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elliptic import Torus, F, zeta_shift_series
from .errors import DegenerateState, PoleProximity
from .operators import BandedOperator, compose


@dataclass(frozen=True)
class TyurinStateRank2:
    gamma: complex
    a1: complex
    a2: complex
    c_const: complex = 0j

    @property
    def points(self):
        return self.gamma + self.c_const, -self.gamma + self.c_const

    @property
    def K(self):
        """``a1 a2 / (a1 - a2)``, the residue of ``chi1`` at the first pole point."""
        return self.a1 * self.a2 / (self.a1 - self.a2)


def _check_state(t: Torus, st: TyurinStateRank2, scale=1.0):
    if abs(st.a1 - st.a2) <= 1e-12 * (abs(st.a1) + abs(st.a2) + scale):
        raise DegenerateState(f"coincident slopes a1 = a2 = {st.a1!r}")
    g1, g2 = st.points
    for name, x in (("gamma+c", g1), ("-gamma+c", g2), ("2*gamma", 2 * st.gamma)):
        if t.lattice_distance(x) <= t.pole_guard:
            raise DegenerateState(f"{name} = {x!r} is at a lattice point")


def _zeta(t, x, what):
    try:
        return t.zeta(x)
    except PoleProximity as exc:
        raise DegenerateState(f"{what}: {exc}") from None


def c_next_general(t: Torus, st: TyurinStateRank2, gamma_next) -> complex:
    """``c_{n+1}`` from the vanishing of ``chi1_n`` at the next pole points."""
    _check_state(t, st)
    g, gn, c = st.gamma, complex(gamma_next), st.c_const
    z = lambda x: _zeta(t, x, "c_next")
    return st.K * (z(gn - g) - z(gn + g) + z(g + c) + z(g - c))


def chi_functions(t: Torus, st: TyurinStateRank2, gamma_next, v_next, z):
    """Entries ``(chi1_n(z), chi2_n(z))`` of the transfer matrix.

    ``chi1`` carries ``c_{n+1}`` through :func:`c_next_general`; it has simple
    poles at the current pole points and vanishes at the next ones.  ``chi2``
    has the extra principal part ``1/z`` at the origin.
    """
    _check_state(t, st)
    g1, g2 = st.points
    z = np.asarray(z, dtype=complex)
    cn = c_next_general(t, st, gamma_next)
    s1 = t.zeta(z - g1) + t.zeta(g1)
    s2 = t.zeta(z - g2) + t.zeta(g2)
    chi1 = -cn + st.K * (s1 - s2)
    da = st.a1 - st.a2
    chi2 = t.zeta(z) - v_next + (st.a2 / da) * s1 - (st.a1 / da) * s2
    return chi1, chi2


def step_general(t: Torus, st: TyurinStateRank2, gamma_next, v_next):
    """One step ``n -> n+1`` of the Tyurin dynamics.

    Returns ``(c_{n+1}, state_{n+1})``.
    """
    _check_state(t, st)
    g, gn, c = st.gamma, complex(gamma_next), st.c_const
    a1, a2 = st.a1, st.a2
    z = lambda x: _zeta(t, x, "step_general")
    cn = c_next_general(t, st, gn)
    b1 = (v_next - z(gn + c)
          - a2 / (a1 - a2) * (z(gn - g) + z(g + c))
          - a1 / (a2 - a1) * (z(gn + g) - z(g - c)))
    b2 = (v_next + z(gn - c)
          + a2 / (a1 - a2) * (z(gn + g) - z(g + c))
          - a1 / (a1 - a2) * (z(gn - g) + z(g - c)))
    nxt = TyurinStateRank2(gn, complex(b1), complex(b2), c)
    _check_state(t, nxt)
    return complex(cn), nxt


def xi_coefficients(t: Torus, st: TyurinStateRank2, c_next, v_next=None):
    """Taylor data ``(xi11, xi12, xi21)`` of the transfer matrix at ``z = 0``.

    ``chi1 = -c_{n+1} (1 + xi11 z + xi12 z**2 + ...)`` and
    ``chi2 = 1/z - v_{n+1} + xi21 z + ...``.  ``v_next`` only fixes the
    constant term and is accepted for symmetry with :func:`chi_functions`.
    """
    if abs(c_next) <= 1e-14:
        raise DegenerateState("c_{n+1} vanishes; xi11, xi12 are undefined")
    g1, g2 = st.points
    s1 = zeta_shift_series(t, g1, 2)
    s2 = zeta_shift_series(t, g2, 2)
    K = st.K
    xi11 = -K * (s1[1] - s2[1]) / c_next
    xi12 = -K * (s1[2] - s2[2]) / c_next
    da = st.a1 - st.a2
    xi21 = (st.a2 / da) * s1[1] - (st.a1 / da) * s2[1]
    return complex(xi11), complex(xi12), complex(xi21)


# -- trajectories -------------------------------------------------------------

@dataclass
class TyurinRun:
    """Sequences produced by iterating the dynamics from ``n0``.

    ``c[n]``, ``v[n]`` and the states are dicts keyed by lattice index ``n``;
    ``xi[n]`` holds ``(xi11_n, xi12_n, xi21_n)``.
    """

    torus: Torus
    states: dict
    c: dict
    v: dict
    xi: dict
    gamma: dict
    s: dict | None = None

    @property
    def c_const(self):
        return next(iter(self.states.values())).c_const


def run_general(t: Torus, gamma: dict, v: dict, c_const, a0, n0, n1) -> TyurinRun:
    """Iterate from the state at ``n0`` with slopes ``a0 = (a1, a2)`` up to ``n1``.

    ``gamma`` must cover ``n0..n1`` and ``v`` must cover ``n0+1..n1``.
    """
    st = TyurinStateRank2(complex(gamma[n0]), complex(a0[0]), complex(a0[1]), complex(c_const))
    _check_state(t, st)
    states = {n0: st}
    cs, xis = {}, {}
    for n in range(n0, n1):
        cn, nxt = step_general(t, st, gamma[n + 1], v[n + 1])
        cs[n + 1] = cn
        xis[n] = xi_coefficients(t, st, cn, v[n + 1])
        states[n + 1] = nxt
        st = nxt
    vv = {n: complex(v[n]) for n in range(n0 + 1, n1 + 1)}
    return TyurinRun(t, states, cs, vv, xis, {n: complex(gamma[n]) for n in range(n0, n1 + 1)})


def symmetric_c(t: Torus, gamma: dict, s: dict, n) -> complex:
    """``c_{n+1} = (1 - s_n**2) F(gamma_{n+1}, gamma_n) F(gamma_{n-1}, gamma_n) / 4``."""
    return (1 - s[n] ** 2) * F(t, gamma[n + 1], gamma[n]) * F(t, gamma[n - 1], gamma[n]) / 4


def symmetric_v(t: Torus, gamma: dict, s: dict, n) -> complex:
    """``v_{n+1} = (s_n F(gamma_{n+1}, gamma_n) - s_{n+1} F(gamma_n, gamma_{n+1})) / 2``."""
    return (s[n] * F(t, gamma[n + 1], gamma[n]) - s[n + 1] * F(t, gamma[n], gamma[n + 1])) / 2


def symmetric_initial_slopes(t: Torus, gamma_prev, gamma0, s0):
    """Slopes ``(a1, a2)`` at ``n0`` with ``a1 - a2 = F(gamma_{n0-1}, gamma_{n0})`` and ``s_{n0} = s0``."""
    d = F(t, gamma_prev, gamma0)
    total = -s0 * d
    return (total + d) / 2, (total - d) / 2


def slopes_to_s(st: TyurinStateRank2) -> complex:
    return -(st.a1 + st.a2) / (st.a1 - st.a2)


def symmetric_to_general(t: Torus, gamma: dict, s: dict, n0, n1) -> TyurinRun:
    """Run the general recurrences at ``c = 0`` with data induced by ``(gamma_n, s_n)``.

    Needs ``gamma`` on ``n0-1..n1`` and ``s`` on ``n0..n1``.
    """
    a0 = symmetric_initial_slopes(t, gamma[n0 - 1], gamma[n0], s[n0])
    v = {n + 1: symmetric_v(t, gamma, s, n) for n in range(n0, n1)}
    run = run_general(t, gamma, v, 0j, a0, n0, n1)
    run.s = dict(s)
    return run


# -- operator assembly ----------------------------------------------------------

def build_L2(c: dict, v: dict, n_min, n_max) -> BandedOperator:
    """Discrete Schroedinger operator ``T + v_n + c_n T^{-1}``."""
    return BandedOperator.from_bands(n_min, n_max, {1: 1.0, 0: lambda n: v[n], -1: lambda n: c[n]})


def build_L4_general(run: TyurinRun, n_min, n_max, form="corrected") -> BandedOperator:
    """``L4 = L2**2 + c_n X T^{-1} + u_n`` with ``X = xi11_{n-1} + xi11_{n-2}``.

    ``u_n = v_n xi11_{n-1} - v_{n-1} xi11_{n-2} - (xi11_{n-2})**2 + xi12_{n-1}
    + xi12_{n-2} - xi21_{n-1} - xi21_{n-2}``, from matching the polar parts of
    ``wp(z) psi_n`` in the frame ``(psi_n, psi_{n+1})``.  ``form="printed"``
    adds the extra ``-X T`` term and uses ``v_n`` in place of ``v_{n-1}``; the
    two agree only when ``xi11 = 0`` (the symmetric case ``c = 0``).
    """
    if form not in ("corrected", "printed"):
        raise ValueError(f"unknown form {form!r}")
    printed = form == "printed"
    L2 = build_L2(run.c, run.v, n_min - 1, n_max + 1)
    sq = compose(L2, L2)
    xi = run.xi
    ns = range(n_min, n_max + 1)

    def X(n):
        return xi[n - 1][0] + xi[n - 2][0]

    def u(n):
        x1, x2 = xi[n - 1], xi[n - 2]
        v_lag = run.v[n] if printed else run.v[n - 1]
        return run.v[n] * x1[0] - v_lag * x2[0] + x1[1] + x2[1] - x2[0] ** 2 - (x1[2] + x2[2])

    corr = BandedOperator.from_bands(n_min, n_max, {
        1: np.array([-X(n) if printed else 0j for n in ns]),
        0: np.array([u(n) for n in ns]),
        -1: np.array([run.c[n] * X(n) for n in ns]),
    })
    return sq.restrict(n_min, n_max) + corr


def build_L4_symmetric(t: Torus, gamma: dict, s: dict, n_min, n_max) -> BandedOperator:
    """``L4 = L2**2 - wp(gamma_n) - wp(gamma_{n-1})`` with ``c_n, v_n`` from ``(gamma, s)``."""
    c = {n + 1: symmetric_c(t, gamma, s, n) for n in range(n_min - 2, n_max + 1)}
    v = {n + 1: symmetric_v(t, gamma, s, n) for n in range(n_min - 2, n_max + 1)}
    L2 = build_L2(c, v, n_min - 1, n_max + 1)
    pot = np.array([t.wp(gamma[n]) + t.wp(gamma[n - 1]) for n in range(n_min, n_max + 1)])
    return compose(L2, L2).restrict(n_min, n_max) - BandedOperator.from_bands(n_min, n_max, {0: pot})


def build_L4(mode, *args, **kwargs) -> BandedOperator:
    if mode == "general":
        return build_L4_general(*args, **kwargs)
    if mode == "symmetric":
        return build_L4_symmetric(*args, **kwargs)
    raise ValueError(f"unknown mode {mode!r}")


def random_symmetric_params(t: Torus, rng, n_min, n_max, *, min_dist=0.3, s_margin=0.2):
    """Admissible random ``(gamma_n, s_n)`` on ``n_min..n_max``.

    ``gamma_n`` is uniform on the fundamental parallelogram, redrawn until
    ``2 gamma_n`` and ``gamma_n +- gamma_{n-1}`` are at least ``min_dist``
    (times ``|omega|``) from the lattice; ``s_n`` is uniform on the complex
    square ``[-1, 1]^2`` with ``|s_n^2 - 1| > s_margin``.
    """
    d = min_dist * abs(t.omega)
    gamma, s = {}, {}
    for n in range(n_min, n_max + 1):
        while True:
            g = 2 * rng.uniform() * t.omega + 2 * rng.uniform() * t.omega_prime
            ok = t.lattice_distance(2 * g) > d
            if n - 1 in gamma:
                ok = ok and t.lattice_distance(g - gamma[n - 1]) > d and t.lattice_distance(g + gamma[n - 1]) > d
            if ok:
                break
        gamma[n] = complex(g)
        while True:
            sv = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            if abs(sv * sv - 1) > s_margin:
                break
        s[n] = sv
    return gamma, s


# -- checks and reporting --------------------------------------------------------

def dynamics_checks(t: Torus, gamma: dict, s: dict, n0: int, n1: int) -> dict:
    """Consistency residuals of the symmetric dynamics on ``n0..n1``.

    * ``chi_zero``: ``|chi1_n|`` at the next pole points, relative to
      ``max(|c_{n+1}|, |K_n|, 1)``;
    * ``a_two_route``: ``|a_{n+1}^s + chi2_n(next point s)|`` relative to ``max(|a|, 1)``;
    * ``c_two_route``: general ``c_{n+1}`` vs the symmetric closed form;
    * ``s_roundtrip``: ``s_{n+1}`` recovered from the slopes vs the input;
    * ``xi11``, ``xi12_two_route``, ``xi21_two_route``: the symmetric Taylor identities;
    * ``L4_agreement``: general vs symmetric ``L4`` on ``n0+2..n1-1``, relative.
    """
    run = symmetric_to_general(t, gamma, s, n0, n1)
    chi0 = a2r = c2r = sr = x11 = x12 = x21 = 0.0
    for n in range(n0, n1):
        st, nxt = run.states[n], run.states[n + 1]
        cn = run.c[n + 1]
        pts = np.array(nxt.points)
        chi1, chi2 = chi_functions(t, st, gamma[n + 1], run.v[n + 1], pts)
        chi0 = max(chi0, float(np.max(np.abs(chi1))) / max(abs(cn), abs(st.K), 1.0))
        for a, ch in zip((nxt.a1, nxt.a2), chi2):
            a2r = max(a2r, abs(a + ch) / max(abs(a), 1.0))
        cs = symmetric_c(t, gamma, s, n)
        c2r = max(c2r, abs(cn - cs) / max(abs(cs), 1.0))
        sr = max(sr, abs(slopes_to_s(nxt) - s[n + 1]) / max(abs(s[n + 1]), 1.0))
        xi11, xi12, xi21 = run.xi[n]
        x11 = max(x11, abs(xi11))
        ref12 = t.wp(gamma[n]) - t.wp(gamma[n + 1])
        x12 = max(x12, abs(xi12 - ref12) / max(abs(ref12), 1.0))
        ref21 = t.wp(gamma[n])
        x21 = max(x21, abs(xi21 - ref21) / max(abs(ref21), 1.0))
    lo, hi = n0 + 2, n1 - 1
    Lg = build_L4_general(run, lo, hi)
    Ls = build_L4_symmetric(t, gamma, s, lo, hi)
    L4 = float(np.max(np.abs(Lg.coeffs - Ls.coeffs)) / np.max(np.abs(Ls.coeffs)))
    return {
        "chi_zero": chi0,
        "a_two_route": a2r,
        "c_two_route": c2r,
        "s_roundtrip": sr,
        "xi11": x11,
        "xi12_two_route": x12,
        "xi21_two_route": x21,
        "L4_agreement": L4,
        "steps": n1 - n0,
        "run": run,
    }


def perturb_c(t: Torus, gamma: dict, s: dict, n_min, n_max, at: int, delta=1e-3) -> BandedOperator:
    """Symmetric ``L4`` rebuilt after adding ``delta`` to the single coefficient ``c_at``."""
    c = {n + 1: symmetric_c(t, gamma, s, n) for n in range(n_min - 2, n_max + 1)}
    v = {n + 1: symmetric_v(t, gamma, s, n) for n in range(n_min - 2, n_max + 1)}
    c[at] += delta
    L2 = build_L2(c, v, n_min - 1, n_max + 1)
    pot = np.array([t.wp(gamma[n]) + t.wp(gamma[n - 1]) for n in range(n_min, n_max + 1)])
    return compose(L2, L2).restrict(n_min, n_max) - BandedOperator.from_bands(n_min, n_max, {0: pot})


CSV_HEADER = ["n", "re_gamma", "im_gamma", "re_s", "im_s", "re_c", "im_c", "re_v", "im_v",
              "re_xi11", "im_xi11", "re_xi12", "im_xi12", "re_xi21", "im_xi21", "partner_residual"]


def run_rows(run: TyurinRun, partner_residual: float):
    """CSV rows ``(n, gamma, s, c, v, xi, partner residual)`` for indices with all data."""
    for n in sorted(run.xi):
        if n not in run.c or n not in run.v:
            continue
        s = run.s.get(n, np.nan) if run.s is not None else slopes_to_s(run.states[n])
        vals = [run.gamma[n], s, run.c[n], run.v[n], *run.xi[n]]
        row = [n]
        for v in vals:
            v = complex(v)
            row += [v.real, v.imag]
        yield row + [partner_residual]
