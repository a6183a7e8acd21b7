"""Banded difference operators ``sum_i u_i(n) T**i`` on finite index windows.

Operators act only where every stencil neighbour exists, so windows shrink
under application and composition.  Coefficients are stored row-major as a
``(n_max - n_min + 1, lower + upper + 1)`` complex array whose column ``c``
holds the coefficient of ``T**(c - lower)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFunction, RankDeficient, WindowUnderflow

COND_LIMIT = 1e12
NO_PARTNER_THRESHOLD = 1e-4


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples ``value(n)`` for ``n`` in ``[n_min, n_min + len(values) - 1]``."""

    n_min: int
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("GridFunction needs a nonempty 1-d array")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "n_min", int(self.n_min))

    @property
    def n_max(self) -> int:
        return self.n_min + self.values.size - 1

    @property
    def window(self) -> tuple[int, int]:
        return self.n_min, self.n_max

    def __call__(self, n):
        return self.values[np.asarray(n) - self.n_min]

    def restrict(self, n_min, n_max):
        if n_min < self.n_min or n_max > self.n_max:
            raise WindowUnderflow(f"[{n_min}, {n_max}] not inside {self.window}")
        return GridFunction(n_min, self.values[n_min - self.n_min: n_max - self.n_min + 1])

    @classmethod
    def from_function(cls, f, n_min, n_max):
        return cls(n_min, [f(n) for n in range(n_min, n_max + 1)])


@dataclass(frozen=True, eq=False)
class BandedOperator:
    n_min: int
    lower: int
    upper: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 2 or c.shape[1] != self.lower + self.upper + 1 or c.shape[0] == 0:
            raise ValueError(f"coefficient array of shape {c.shape} does not match spans ({self.lower}, {self.upper})")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "n_min", int(self.n_min))

    # -- construction -------------------------------------------------------

    @classmethod
    def from_bands(cls, n_min, n_max, bands: dict):
        """Build from ``{shift: coefficient}``; a coefficient may be a scalar, an array over the window, or a callable of ``n``."""
        lower = max(0, -min(bands))
        upper = max(0, max(bands))
        ns = np.arange(n_min, n_max + 1)
        c = np.zeros((ns.size, lower + upper + 1), dtype=complex)
        for i, b in bands.items():
            if callable(b):
                col = np.array([b(n) for n in ns], dtype=complex)
            else:
                col = np.broadcast_to(np.asarray(b, dtype=complex), ns.shape)
            c[:, i + lower] = col
        return cls(n_min, lower, upper, c)

    @classmethod
    def identity(cls, n_min, n_max):
        return cls.from_bands(n_min, n_max, {0: 1.0})

    @classmethod
    def shift(cls, n_min, n_max, k=1):
        return cls.from_bands(n_min, n_max, {k: 1.0})

    # -- accessors ----------------------------------------------------------

    @property
    def n_max(self) -> int:
        return self.n_min + self.coeffs.shape[0] - 1

    @property
    def window(self) -> tuple[int, int]:
        return self.n_min, self.n_max

    @property
    def shifts(self) -> range:
        return range(-self.lower, self.upper + 1)

    def coeff(self, n, i):
        if not -self.lower <= i <= self.upper:
            return 0j
        return self.coeffs[n - self.n_min, i + self.lower]

    def band(self, i) -> np.ndarray:
        """Coefficient of ``T**i`` over the whole window (zeros outside the span)."""
        if not -self.lower <= i <= self.upper:
            return np.zeros(self.coeffs.shape[0], dtype=complex)
        return self.coeffs[:, i + self.lower]

    def restrict(self, n_min, n_max):
        if n_min < self.n_min or n_max > self.n_max or n_min > n_max:
            raise WindowUnderflow(f"[{n_min}, {n_max}] not inside {self.window}")
        return BandedOperator(n_min, self.lower, self.upper,
                              self.coeffs[n_min - self.n_min: n_max - self.n_min + 1])

    def widen(self, lower, upper):
        """Same operator with (possibly) zero-padded spans."""
        if lower < self.lower or upper < self.upper:
            raise ValueError("cannot narrow spans")
        c = np.zeros((self.coeffs.shape[0], lower + upper + 1), dtype=complex)
        c[:, lower - self.lower: lower + self.upper + 1] = self.coeffs
        return BandedOperator(self.n_min, lower, upper, c)

    def leading_nonzero(self, tol=0.0) -> bool:
        """Nondegeneracy of the extreme bands on the whole window."""
        return bool(np.all(np.abs(self.band(self.upper)) > tol) and np.all(np.abs(self.band(-self.lower)) > tol))

    # -- arithmetic ---------------------------------------------------------

    def _binary(self, other, sign):
        lo = max(self.n_min, other.n_min)
        hi = min(self.n_max, other.n_max)
        if lo > hi:
            raise WindowUnderflow("operators have disjoint windows")
        lower = max(self.lower, other.lower)
        upper = max(self.upper, other.upper)
        a = self.restrict(lo, hi).widen(lower, upper)
        b = other.restrict(lo, hi).widen(lower, upper)
        return BandedOperator(lo, lower, upper, a.coeffs + sign * b.coeffs)

    def __add__(self, other):
        if isinstance(other, BandedOperator):
            return self._binary(other, 1)
        return self + BandedOperator.from_bands(self.n_min, self.n_max, {0: other})

    def __sub__(self, other):
        if isinstance(other, BandedOperator):
            return self._binary(other, -1)
        return self - BandedOperator.from_bands(self.n_min, self.n_max, {0: other})

    def __neg__(self):
        return BandedOperator(self.n_min, self.lower, self.upper, -self.coeffs)

    def scale(self, s):
        return BandedOperator(self.n_min, self.lower, self.upper, s * self.coeffs)

    def __matmul__(self, other):
        return compose(self, other)

    def gauge(self, g: GridFunction):
        """Conjugation ``g L g^{-1}``: coefficient ``u_i(n) -> g(n+i) u_i(n) / g(n)``."""
        ns = np.arange(self.n_min, self.n_max + 1)
        if self.n_min - self.lower < g.n_min or self.n_max + self.upper > g.n_max:
            raise WindowUnderflow("gauge function does not cover the stencil")
        c = np.empty_like(self.coeffs)
        for col, i in enumerate(self.shifts):
            c[:, col] = g(ns + i) * self.coeffs[:, col] / g(ns)
        return BandedOperator(self.n_min, self.lower, self.upper, c)

    def monic(self):
        """Gauge-equivalent operator with unit ``T**upper`` coefficient.

        The gauge ``g(n+upper) = g(n) / u_upper(n)`` is only pinned up to
        ``upper`` free values; they are set to one at the bottom of the window,
        so the result lives on the window shrunk by ``lower`` at the bottom.
        """
        lead = self.band(self.upper)
        if np.any(lead == 0):
            raise DegenerateFunction("leading coefficient vanishes")
        lo = self.n_min - self.lower
        hi = self.n_max + self.upper
        g = np.ones(hi - lo + 1, dtype=complex)
        for n in range(self.n_min, self.n_max + 1):
            g[n + self.upper - lo] = g[n - lo] / lead[n - self.n_min]
        # rows below n_min + lower see gauge values the recursion never set
        return self.gauge(GridFunction(lo, g)).restrict(self.n_min + self.lower, self.n_max)

    # -- serialisation ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n_min": self.n_min,
            "n_max": self.n_max,
            "lower_span": self.lower,
            "upper_span": self.upper,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs.ravel()],
        }

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, str):
            doc = json.loads(doc)
        lower, upper = int(doc["lower_span"]), int(doc["upper_span"])
        rows = int(doc["n_max"]) - int(doc["n_min"]) + 1
        flat = np.array([complex(re, im) for re, im in doc["coeffs"]], dtype=complex)
        return cls(int(doc["n_min"]), lower, upper, flat.reshape(rows, lower + upper + 1))


def apply(L: BandedOperator, y: GridFunction, window=None) -> GridFunction:
    """``(L y)(n) = sum_i u_i(n) y(n+i)`` on the interior window."""
    lo = max(L.n_min, y.n_min + L.lower)
    hi = min(L.n_max, y.n_max - L.upper)
    if window is not None:
        if window[0] < lo or window[1] > hi:
            raise WindowUnderflow(f"requested window {tuple(window)} needs values outside {y.window}")
        lo, hi = window
    if lo > hi:
        raise WindowUnderflow("no interior rows: grid function too short for the stencil")
    ns = np.arange(lo, hi + 1)
    out = np.zeros(ns.size, dtype=complex)
    for i in L.shifts:
        out += L.coeffs[ns - L.n_min, i + L.lower] * y(ns + i)
    return GridFunction(lo, out)


def compose(L: BandedOperator, M: BandedOperator) -> BandedOperator:
    """Product ``L M`` with ``(L M)(n, k) = sum_{i+j=k} L(n, i) M(n+i, j)``."""
    lo = max(L.n_min, M.n_min + L.lower)
    hi = min(L.n_max, M.n_max - L.upper)
    if lo > hi:
        raise WindowUnderflow("no interior rows for composition")
    ns = np.arange(lo, hi + 1)
    lower = L.lower + M.lower
    upper = L.upper + M.upper
    c = np.zeros((ns.size, lower + upper + 1), dtype=complex)
    for i in L.shifts:
        li = L.coeffs[ns - L.n_min, i + L.lower]
        for j in M.shifts:
            c[:, i + j + lower] += li * M.coeffs[ns + i - M.n_min, j + M.lower]
    return BandedOperator(lo, lower, upper, c)


def commutator(L: BandedOperator, A: BandedOperator) -> BandedOperator:
    """``L A - A L`` on the window where both products are defined."""
    return compose(L, A) - compose(A, L)


def commutator_norm(L: BandedOperator, A: BandedOperator) -> float:
    """Max-abs coefficient of ``[L, A]`` over band and interior window."""
    return float(np.max(np.abs(commutator(L, A).coeffs)))


def relative_commutator_norm(L: BandedOperator, A: BandedOperator) -> float:
    """:func:`commutator_norm` divided by ``max|L| * max|A|``."""
    scale = float(np.max(np.abs(L.coeffs)) * np.max(np.abs(A.coeffs)))
    return commutator_norm(L, A) / scale if scale > 0 else 0.0


def eigen_residual(L: BandedOperator, psi: GridFunction, lam) -> float:
    """``max_n |(L psi)(n) - lam psi(n)| / max_n |psi(n)|`` on the interior window."""
    Lpsi = apply(L, psi)
    scale = float(np.max(np.abs(psi.values)))
    if scale < 1e-300:
        raise DegenerateFunction("psi vanishes on its window")
    ps = psi(np.arange(Lpsi.n_min, Lpsi.n_max + 1))
    return float(np.max(np.abs(Lpsi.values - lam * ps)) / scale)


def reconstruct_operator(samples, spans, window):
    """Recover the operator ``L`` with ``L psi(z) = f(z) psi(z)`` from samples.

    Parameters
    ----------
    samples : sequence of (z, GridFunction, complex)
        Eigenfunction values ``psi_n(z)`` and eigenvalues ``f(z)``.  Several
        entries may share a ``z`` (e.g. vector components of one eigenvector).
    spans : (int, int)
        ``(lower, upper)`` spans of the sought operator.
    window : (int, int)
        Rows ``n`` for which coefficients are solved.

    Returns
    -------
    L : BandedOperator
    residual : float
        Worst per-row relative least-squares residual.
    """
    lower, upper = spans
    n_min, n_max = window
    if len(samples) < lower + upper + 2:
        raise ValueError(f"need at least {lower + upper + 2} samples, got {len(samples)}")
    for _, psi, _ in samples:
        if psi.n_min > n_min - lower or psi.n_max < n_max + upper:
            raise WindowUnderflow(f"samples on {psi.window} do not cover rows {window} with spans {spans}")
    shifts = np.arange(-lower, upper + 1)
    coeffs = np.empty((n_max - n_min + 1, lower + upper + 1), dtype=complex)
    worst = 0.0
    for row, n in enumerate(range(n_min, n_max + 1)):
        M = np.array([psi(n + shifts) for _, psi, _ in samples])
        b = np.array([f * psi(n) for _, psi, f in samples])
        # each equation scaled to unit size; the unknowns are untouched
        s = np.maximum(np.max(np.abs(M), axis=1), np.abs(b))
        s[s == 0] = 1.0
        M /= s[:, None]
        b /= s
        colscale = np.max(np.abs(M), axis=0)
        colscale[colscale == 0] = 1.0
        Ms = M / colscale
        cond = np.linalg.cond(Ms)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise RankDeficient(f"row n={n}: sample matrix condition number {cond:.3g}")
        u, *_ = np.linalg.lstsq(Ms, b, rcond=None)
        u = u / colscale
        coeffs[row] = u
        nb = np.linalg.norm(b)
        if nb > 0:
            worst = max(worst, float(np.linalg.norm(M @ u - b) / nb))
    return BandedOperator(n_min, lower, upper, coeffs), worst


def _partner_interior(L: BandedOperator, window, lower, upper):
    lo = max(window[0] + L.lower, L.n_min + lower, L.n_min, window[0])
    hi = min(window[1] - L.upper, L.n_max - upper, L.n_max, window[1])
    return lo, hi


def find_commuting_partner(L: BandedOperator, spans, window=None):
    """Least-squares operator ``A`` with spans ``(lower, upper)`` commuting with ``L``.

    The top coefficient of ``A`` is pinned to one on the whole window; the
    remaining coefficients solve ``[L, A] = 0`` on the interior rows in the
    minimum-norm least-squares sense.

    Returns
    -------
    A : BandedOperator
    residual : float
        ``max|[L, A]| / (max|L| * max|A|)``.  A value above
        ``NO_PARTNER_THRESHOLD`` means no partner of these spans exists.
    """
    lower, upper = spans
    if window is None:
        window = L.window
    wmin, wmax = window
    rows_lo, rows_hi = _partner_interior(L, window, lower, upper)
    if rows_lo > rows_hi:
        raise WindowUnderflow("window too small: no interior commutator rows")
    nA = wmax - wmin + 1
    nfree = lower + upper  # shifts -lower .. upper-1
    Kl = L.lower + lower
    Ku = L.upper + upper
    nb = Kl + Ku + 1
    rows = rows_hi - rows_lo + 1
    Mat = np.zeros((rows * nb, nA * nfree), dtype=complex)
    rhs = np.zeros(rows * nb, dtype=complex)

    def col(m, j):
        return (m - wmin) * nfree + (j + lower)

    for r, n in enumerate(range(rows_lo, rows_hi + 1)):
        base = r * nb
        for i in L.shifts:
            lni = L.coeff(n, i)
            # L A term: L(n, i) A(n+i, j) T^{i+j}
            for j in range(-lower, upper + 1):
                k = i + j + Kl
                if j == upper:
                    rhs[base + k] -= lni
                else:
                    Mat[base + k, col(n + i, j)] += lni
        for j in range(-lower, upper + 1):
            # A L term: A(n, j) L(n+j, i) T^{i+j}
            for i in L.shifts:
                lv = L.coeff(n + j, i)
                k = i + j + Kl
                if j == upper:
                    rhs[base + k] += lv
                else:
                    Mat[base + k, col(n, j)] -= lv
    sol, *_ = np.linalg.lstsq(Mat, rhs, rcond=1e-13)
    if not np.all(np.isfinite(sol)):
        raise RankDeficient("partner system produced a non-finite solution")
    coeffs = np.zeros((nA, lower + upper + 1), dtype=complex)
    coeffs[:, :nfree] = sol.reshape(nA, nfree)
    coeffs[:, nfree] = 1.0
    A = BandedOperator(wmin, lower, upper, coeffs)
    Lr = L.restrict(max(L.n_min, wmin), min(L.n_max, wmax))
    C = commutator(Lr, A).restrict(rows_lo, rows_hi)
    scale = float(np.max(np.abs(L.coeffs)) * np.max(np.abs(A.coeffs)))
    residual = float(np.max(np.abs(C.coeffs))) / scale
    return A, residual


def has_partner(residual: float) -> bool:
    return residual <= NO_PARTNER_THRESHOLD
