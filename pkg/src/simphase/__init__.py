"""simphase: executable phase-transition theory of random d-dimensional complexes.

Samples n-vertex d-complexes with full (d-1)-skeleton, computes exact
homology ranks over prime fields, runs d-collapse peeling, enumerates
R-shadows, and evaluates every closed-form threshold quantity (collapse
threshold, homology threshold, Betti densities, shadow densities) both
from root finding and from Monte Carlo simulation of Poisson d-trees.
"""

__version__ = "0.1.0"

from . import complexes, dtree, experiments, homology, shadow, thresholds
from .errors import (
    AtCriticalPoint,
    InvalidProbability,
    NoInteriorRoot,
    NotAFixedPoint,
    ScaleExceeded,
)

__all__ = [
    "__version__",
    "thresholds",
    "complexes",
    "homology",
    "shadow",
    "dtree",
    "experiments",
    "AtCriticalPoint",
    "InvalidProbability",
    "NoInteriorRoot",
    "NotAFixedPoint",
    "ScaleExceeded",
]
