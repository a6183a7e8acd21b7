"""Commuting difference operators, Baker-Akhiezer functions and Tyurin
dynamics on elliptic curves, with an elliptic Toda chain integrator."""

__version__ = "0.1.0"

from .elliptic import Torus, F, V, wp, wp_prime, zeta_w, sigma_w  # noqa: E402
from .operators import (  # noqa: E402
    BandedOperator,
    GridFunction,
    apply,
    commutator,
    commutator_norm,
    compose,
    eigen_residual,
    find_commuting_partner,
    reconstruct_operator,
)
from . import errors  # noqa: E402

__all__ = [
    "Torus", "F", "V", "wp", "wp_prime", "zeta_w", "sigma_w",
    "BandedOperator", "GridFunction", "apply", "commutator", "commutator_norm", "compose",
    "eigen_residual", "find_commuting_partner", "reconstruct_operator", "errors",
]
