"""Lower bounds on the minimum Lee distance of long codes.

Submodules: ``lee_metric`` (weights, Lee spheres over F_{p^2}), ``fields``,
``codes`` (constructions and brute-force distance oracles), ``bounds``
(asymptotic curves), ``compare`` (crossovers, tables, verification) and
``cli``.
"""

from .bounds import (
    DomainError,
    alpha_lee_lower,
    astola_rate,
    gardy_sole_rate,
    make_curve,
    victoria_rate,
)
from .lee_metric import lee_weight_symbol, lee_weight_word, sphere_table, weight_sum_W

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "alpha_lee_lower",
    "astola_rate",
    "gardy_sole_rate",
    "make_curve",
    "victoria_rate",
    "lee_weight_symbol",
    "lee_weight_word",
    "sphere_table",
    "weight_sum_W",
]
