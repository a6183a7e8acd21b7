"""Deterministic sample points on the torus."""
from __future__ import annotations

import numpy as np
from scipy.stats import qmc

from .elliptic import Torus


def torus_points(t: Torus, count: int, seed: int = 0, avoid=(), min_dist=0.05):
    """``count`` scrambled-Halton points in the fundamental parallelogram.

    Points closer than ``min_dist`` (times ``|omega|``) to the lattice or to
    any lattice translate of a point in ``avoid`` are skipped.
    """
    avoid = [complex(a) for a in avoid]
    gen = qmc.Halton(d=2, scramble=True, seed=seed)
    out = []
    limit = min_dist * abs(t.omega)
    while len(out) < count:
        uv = gen.random(4 * count)
        z = 2 * t.omega * uv[:, 0] + 2 * t.omega_prime * uv[:, 1]
        ok = t.lattice_distance(z) > limit
        for a in avoid:
            ok &= t.lattice_distance(z - a) > limit
        out.extend(z[ok].tolist())
    return np.array(out[:count], dtype=complex)
