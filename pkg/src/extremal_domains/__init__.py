"""Analytic content of planar domains and the extremal-domain checks built on it."""

__version__ = "0.1.0"

from .approx import AnalyticBasis, ApproximationResult, Certificate, bounds, extremality_residual, solve_minimax
from .geometry import AnalyticCurve, PlanarDomain, area_perimeter
from .laurent import Laurent

__all__ = [
    "AnalyticBasis",
    "AnalyticCurve",
    "ApproximationResult",
    "Certificate",
    "Laurent",
    "PlanarDomain",
    "area_perimeter",
    "bounds",
    "extremality_residual",
    "solve_minimax",
]
