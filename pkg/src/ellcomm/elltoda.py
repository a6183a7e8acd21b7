"""Elliptic analogue of the Toda chain.

Equations of motion on a periodic chain of ``N`` sites::

    x_n'' = (x_n'**2 - 1) * (V(x_n, x_{n+1}) + V(x_n, x_{n-1}))

with ``V(u, v) = zeta(u+v) + zeta(u-v) - zeta(2u)``.  They are Hamiltonian
for::

    H = sum_n  log(sinh(p_n/2)**-2) + log(wp(x_n - x_{n-1}) - wp(x_n + x_{n-1}))

under the momentum map ``x_n' = -coth(p_n/2)``.  Integration runs in
``(x, x')`` with classical RK4; ``p`` is only used to evaluate ``H``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .elliptic import Torus, F, fd_derivative
from .errors import PoleProximity, SingularConfiguration

log = logging.getLogger(__name__)

VARIANTS = ("nearest", "printed")


def momentum_to_velocity(p):
    return -1 / np.tanh(np.asarray(p) / 2)


def velocity_to_momentum(xdot):
    """Inverse of :func:`momentum_to_velocity`: ``p = -2 artanh(1/x')``."""
    return -2 * np.arctanh(1 / np.asarray(xdot, dtype=complex))


@dataclass(frozen=True, eq=False)
class EllTodaChain:
    """Periodic chain state.

    ``velocity`` is kept alongside ``p`` when the chain is built from
    velocities, so that ``|x'| = 1`` (infinite momentum) is representable.
    """

    torus: Torus
    x: np.ndarray
    p: np.ndarray
    velocity: np.ndarray | None = None

    def __post_init__(self):
        x = np.array(self.x, dtype=complex)
        p = np.array(self.p, dtype=complex)
        if x.shape != p.shape or x.ndim != 1 or x.size < 2:
            raise ValueError("x and p must be 1-d arrays of equal length >= 2")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)
        if self.velocity is not None:
            object.__setattr__(self, "velocity", np.array(self.velocity, dtype=complex))

    @classmethod
    def from_velocities(cls, torus, x, xdot):
        xdot = np.asarray(xdot, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            p = velocity_to_momentum(xdot)
        return cls(torus, x, p, xdot)

    @property
    def N(self):
        return self.x.size

    @property
    def xdot(self):
        if self.velocity is not None:
            return self.velocity
        return momentum_to_velocity(self.p)

    def acceleration(self, variant="nearest"):
        return kn19_rhs(self.torus, self.x, self.xdot, variant)

    def hamiltonian(self) -> complex:
        return hamiltonian(self.torus, self.x, self.p)

    @property
    def is_real_momentum(self) -> bool:
        return bool(np.all(np.abs(self.p.imag) < 1e-12))


def sample_chain(torus: Torus, rng, N=4, speed=(1.1, 1.4)) -> EllTodaChain:
    """Random well-separated chain on the line ``Im x = Im(omega')/2``.

    For a rectangular lattice ``V`` is real on that line and ``2 x_n``,
    ``x_n + x_{n+1}`` stay off the lattice, so the motion is real and only
    neighbour collisions can end it.  Velocities share one sign and exceed 1.
    """
    w, wp_ = torus.omega, torus.omega_prime
    spacing = 2 * w / N
    a = spacing * (np.arange(N) + rng.uniform(-0.15, 0.15, N)) + 2 * w * rng.uniform(0, 1)
    x = a + wp_ / 2
    xdot = rng.uniform(*speed, N) * rng.choice([-1.0, 1.0])
    return EllTodaChain.from_velocities(torus, x, xdot)


def _pair_args(x):
    right = np.roll(x, -1)
    return np.concatenate([x - right, x + right, 2 * x])


def check_configuration(t: Torus, x, guard=None):
    """Raise :class:`SingularConfiguration` if ``V`` or ``H`` is singular at ``x``."""
    x = np.asarray(x, dtype=complex)
    guard = t.pole_guard if guard is None else guard
    d = t.lattice_distance(_pair_args(x))
    if np.any(d <= guard):
        i = int(np.argmin(d))
        name = ("x_n - x_{n+1}", "x_n + x_{n+1}", "2 x_n")[i // x.size]
        n = i % x.size
        raise SingularConfiguration(f"{name} hits a lattice point at site n={n}")


def _forces(t: Torus, x, variant):
    # callers check the configuration first, so zeta runs unguarded here
    right = np.roll(x, -1)
    left = np.roll(x, 1)
    N = x.size
    if variant == "nearest":
        z = t._zeta_unguarded(np.concatenate([x + right, x - right, x + left, x - left, 2 * x]))
        return z[:N] + z[N:2 * N] + z[2 * N:3 * N] + z[3 * N:4 * N] - 2 * z[4 * N:]
    if variant == "printed":
        z = t._zeta_unguarded(np.concatenate([x + right, x - right, 2 * x]))
        return 2 * (z[:N] + z[N:2 * N] - z[2 * N:])
    raise ValueError(f"unknown variant {variant!r}")


def kn19_rhs(t: Torus, x, xdot, variant="nearest"):
    """Accelerations of the chain.

    ``variant="printed"`` couples each site to its right neighbour twice; it
    is only kept as a discrimination control.
    """
    x = np.asarray(x, dtype=complex)
    xdot = np.asarray(xdot, dtype=complex)
    check_configuration(t, x)
    return (xdot**2 - 1) * _forces(t, x, variant)


def hamiltonian_terms(t: Torus, x, p):
    x = np.asarray(x, dtype=complex)
    p = np.asarray(p, dtype=complex)
    check_configuration(t, x)
    left = np.roll(x, 1)
    kin = np.log(np.sinh(p / 2) ** -2)
    pot = np.log(np.asarray(t.wp(x - left)) - np.asarray(t.wp(x + left)))
    return kin, pot


def hamiltonian(t: Torus, x, p) -> complex:
    kin, pot = hamiltonian_terms(t, x, p)
    return complex(np.sum(kin) + np.sum(pot))


def hamiltonian_gradient_x(t: Torus, x, p, h=1e-5):
    """``dH/dx_n`` by central differences (holomorphic, direction-averaged)."""
    x = np.asarray(x, dtype=complex)
    g = np.empty_like(x)
    for n in range(x.size):
        def Hn(xn, n=n):
            y = x.copy()
            y[n] = xn
            return hamiltonian(t, y, p)
        g[n] = fd_derivative(np.vectorize(Hn), x[n], h)
    return g


def hamiltonian_flow_acceleration(t: Torus, x, p, calibration=1.0):
    """Acceleration implied by Hamilton's equations: ``x'' = 1/2 (x'^2 - 1) (-dH/dx)``."""
    xdot = momentum_to_velocity(p)
    return calibration * 0.5 * (xdot**2 - 1) * (-hamiltonian_gradient_x(t, x, p))


def calibrate(t: Torus, states) -> tuple[float, float]:
    """Constant ``k`` with ``rhs = k * hamiltonian_flow_acceleration`` over the sample states.

    Returns ``(k, spread)`` where ``spread`` is the max relative deviation of
    the per-component ratios from their median.
    """
    ratios = []
    for x, p in states:
        a = kn19_rhs(t, x, momentum_to_velocity(p))
        b = hamiltonian_flow_acceleration(t, x, p)
        mask = np.abs(b) > 1e-8 * (1 + np.max(np.abs(b)))
        ratios.extend((a[mask] / b[mask]).tolist())
    ratios = np.array(ratios)
    k = complex(np.median(ratios.real) + 1j * np.median(ratios.imag))
    spread = float(np.max(np.abs(ratios - k)) / abs(k))
    return k, spread


@dataclass
class Trajectory:
    torus: Torus
    t: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    H: np.ndarray
    dt: float
    variant: str = "nearest"
    aborted: bool = False
    abort_reason: str = ""
    branch_crossings: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def p(self):
        with np.errstate(divide="ignore", invalid="ignore"):
            return velocity_to_momentum(self.xdot)

    @property
    def energy_drift(self) -> float:
        """``max |H(t) - H(0)|``; nan when ``H`` is not finite (some ``|x'| = 1``)."""
        with np.errstate(invalid="ignore"):
            return float(np.max(np.abs(self.H - self.H[0])))

    @property
    def N(self):
        return self.x.shape[1]


def _track_H(t: Torus, x, xdot, prev_terms):
    """Hamiltonian with every log term continued from the previous sample."""
    with np.errstate(divide="ignore", invalid="ignore"):
        kin, pot = hamiltonian_terms(t, x, velocity_to_momentum(xdot))
    terms = np.concatenate([kin, pot])
    crossings = 0
    if prev_terms is not None and np.all(np.isfinite(terms)) and np.all(np.isfinite(prev_terms)):
        jump = np.round((prev_terms.imag - terms.imag) / (2 * np.pi))
        crossings = int(np.count_nonzero(jump))
        terms = terms + 2j * np.pi * jump
    return terms, crossings


def integrate(chain: EllTodaChain, T: float, dt: float, output_stride: int = 1, variant="nearest") -> Trajectory:
    """Classical RK4 for the second-order system in ``(x, x')`` variables."""
    if dt <= 0 or T < 0:
        raise ValueError("need dt > 0 and T >= 0")
    t = chain.torus
    nsteps = int(round(T / dt))
    x = chain.x.copy()
    v = np.asarray(chain.xdot, dtype=complex)

    def f(x, v):
        return v, (v**2 - 1) * _forces(t, x, variant)

    times, xs, vs, Hs = [], [], [], []
    terms, _ = _track_H(t, x, v, None)
    crossings = 0

    def record(step, x, v, terms):
        times.append(step * dt)
        xs.append(x.copy())
        vs.append(v.copy())
        Hs.append(terms.sum())

    record(0, x, v, terms)
    aborted, reason = False, ""
    for step in range(1, nsteps + 1):
        try:
            # blow-up shows up as non-finite values, checked below
            with np.errstate(all="ignore"):
                k1x, k1v = f(x, v)
                k2x, k2v = f(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v)
                k3x, k3v = f(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v)
                k4x, k4v = f(x + dt * k3x, v + dt * k3v)
                xn = x + dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
                vn = v + dt / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
            if not (np.all(np.isfinite(xn)) and np.all(np.isfinite(vn))):
                raise SingularConfiguration("state left the finite range")
            check_configuration(t, xn)
        except (SingularConfiguration, PoleProximity) as exc:
            aborted, reason = True, f"t={step * dt:g}: {exc}"
            log.warning("integration aborted at %s", reason)
            break
        x, v = xn, vn
        if step % output_stride == 0 or step == nsteps:
            terms, c = _track_H(t, x, v, terms)
            if c:
                crossings += c
                log.info("log branch crossing near t=%g", step * dt)
            record(step, x, v, terms)
    return Trajectory(t, np.array(times), np.array(xs), np.array(vs), np.array(Hs), dt,
                      variant, aborted, reason, crossings)


def toda_coefficients(t: Torus, x, xdot):
    """``(c_{n+1}, v_{n+1})`` for every site of a periodic configuration.

    ``4 c_{n+1} = (1 - x_n'**2) F(x_{n+1}, x_n) F(x_{n-1}, x_n)`` and
    ``2 v_{n+1} = x_n' F(x_{n+1}, x_n) - x_{n+1}' F(x_n, x_{n+1})``; index
    ``n`` of the returned arrays holds the coefficients labelled ``n+1``.
    """
    x = np.asarray(x, dtype=complex)
    s = np.asarray(xdot, dtype=complex)
    xr, xl = np.roll(x, -1), np.roll(x, 1)
    sr = np.roll(s, -1)
    c = (1 - s**2) * F(t, xr, x) * F(t, xl, x) / 4
    v = (s * F(t, xr, x) - sr * F(t, x, xr)) / 2
    return c, v


def _time_derivative(y, h):
    """Fourth-order central differences along axis 0; edges are dropped."""
    return (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)


def compatibility_check(traj: Trajectory) -> dict:
    """Residuals of the Toda-type flow for ``(c, v)`` built from the trajectory.

    ``R_c = |c_{n+1}' - 2 c_{n+1}(v_{n+1} - v_n)|`` and
    ``R_v = |v_{n+1}' - 2(c_{n+2} - c_{n+1}) - wp(x_n) + wp(x_{n+1})|``,
    each divided by the size of the terms it balances.
    """
    t = traj.torus
    h = traj.t[1] - traj.t[0]
    cs, vs, wps = [], [], []
    for x, s in zip(traj.x, traj.xdot):
        c, v = toda_coefficients(t, x, s)
        cs.append(c)
        vs.append(v)
        wps.append(np.asarray(t.wp(x)))
    c, v, w = np.array(cs), np.array(vs), np.array(wps)
    cdot = _time_derivative(c, h)
    vdot = _time_derivative(v, h)
    c, v, w = c[2:-2], v[2:-2], w[2:-2]
    v_prev = np.roll(v, 1, axis=1)          # v_n  (arrays are labelled n+1)
    c_next = np.roll(c, -1, axis=1)         # c_{n+2}
    w_next = np.roll(w, -1, axis=1)
    rhs_c = 2 * c * (v - v_prev)
    rhs_v = 2 * (c_next - c) + w - w_next
    R_c = np.abs(cdot - rhs_c) / (np.abs(cdot) + np.abs(rhs_c) + np.abs(c))
    R_v = np.abs(vdot - rhs_v) / (np.abs(vdot) + np.abs(rhs_v) + np.abs(v))
    return {
        "R_c_max": float(np.max(R_c)),
        "R_v_max": float(np.max(R_v)),
        "samples": int(c.shape[0]),
        "sample_spacing": float(h),
    }


# -- undressed 1D Toda Lax pair --------------------------------------------------

@dataclass(frozen=True, eq=False)
class TodaGermState:
    """Periodic chain data ``c0[n] = c^0_{n+1}``, ``v0[n] = v^0_n``."""

    c0: np.ndarray
    v0: np.ndarray


def toda1d_derivatives(g: TodaGermState):
    """Right-hand sides of ``c'_{n+1} = 2 c_{n+1}(v_{n+1} - v_n)``, ``v'_{n+1} = 2(c_{n+2} - c_{n+1})``."""
    c = np.asarray(g.c0, dtype=complex)
    v = np.asarray(g.v0, dtype=complex)
    v_next = np.roll(v, -1)
    cdot = 2 * c * (v_next - v)
    vdot_next = 2 * (np.roll(c, -1) - c)
    return cdot, np.roll(vdot_next, 1)


def toda1d_lax_residual(g: TodaGermState, cdot, vdot) -> float:
    """Max coefficient (in ``k``) of ``dX_n/dt - (M_{n+1} X_n - X_n M_n)``.

    ``X_n = [[0, 1], [-c_{n+1}, k - v_{n+1}]]`` and
    ``M_n = [[-k + 2 v_n, 2], [-2 c_{n+1}, k]]``; both sides are matrix
    polynomials in ``k`` and are compared coefficient by coefficient.
    """
    c = np.asarray(g.c0, dtype=complex)
    v = np.asarray(g.v0, dtype=complex)
    if np.any(c == 0):
        raise ValueError("c0 must be nonzero")
    cdot = np.asarray(cdot, dtype=complex)
    vdot = np.asarray(vdot, dtype=complex)
    N = c.size
    worst = 0.0
    for n in range(N):
        m = (n + 1) % N
        # polynomial matrices as arrays [deg0, deg1] of 2x2
        X = np.zeros((3, 2, 2), dtype=complex)
        X[0] = [[0, 1], [-c[n], -v[m]]]
        X[1] = [[0, 0], [0, 1]]
        dX = np.zeros((3, 2, 2), dtype=complex)
        dX[0] = [[0, 0], [-cdot[n], -vdot[m]]]
        Mn = np.zeros((3, 2, 2), dtype=complex)
        Mn[0] = [[2 * v[n], 2], [-2 * c[n], 0]]
        Mn[1] = [[-1, 0], [0, 1]]
        Mm = np.zeros((3, 2, 2), dtype=complex)
        Mm[0] = [[2 * v[m], 2], [-2 * c[m], 0]]
        Mm[1] = [[-1, 0], [0, 1]]
        rhs = np.zeros((3, 2, 2), dtype=complex)
        for i in range(2):
            for j in range(2):
                if i + j <= 2:
                    rhs[i + j] += Mm[i] @ X[j] - X[j] @ Mn[i]
        worst = max(worst, float(np.max(np.abs(dX - rhs))))
    return worst


# -- persistence ------------------------------------------------------------------

CSV_HEADER = ["t", "site", "re_x", "im_x", "re_p", "im_p", "re_H", "im_H"]


def trajectory_rows(traj: Trajectory):
    """One row per (sample, site); ``H`` is repeated across the sites of a sample."""
    p = traj.p
    for i, ti in enumerate(traj.t):
        for n in range(traj.N):
            yield [ti, n, traj.x[i, n].real, traj.x[i, n].imag, p[i, n].real, p[i, n].imag,
                   traj.H[i].real, traj.H[i].imag]


def write_trajectory_csv(traj: Trajectory, path):
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in trajectory_rows(traj):
            w.writerow([row[0] if isinstance(row[0], str) else repr(float(row[0])), row[1]]
                       + [repr(float(v)) for v in row[2:]])
