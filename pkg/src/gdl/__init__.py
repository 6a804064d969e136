"""Gradient-bounded (graded) damage laboratory.

Analytic equilibrium-path engines for the 1D tensile bar and the rigid-block
mode-I delamination problem, an independent quadrature/root-finding oracle
layer that validates every closed form against the averaged limit condition,
and a 1D finite-element solver implementing alternating minimization under
the damage-gradient bound.
"""

from .errors import (BracketError, DegenerateMaterialError, DomainError, GdlError,
                     InconsistencyError, PhaseError, QuadratureError, SolverError,
                     UnsupportedRegimeError)
from .material import (ConstitutiveVariant, Degradation, DimensionlessGroups,
                       MaterialSpec, SnapbackClass, SnapbackReport, ThresholdLaw,
                       block_bilinear, case_i, case_ii, case_iii, parse_variant)

__version__ = "0.1.0"

__all__ = [
    "BracketError", "ConstitutiveVariant", "Degradation", "DegenerateMaterialError",
    "DimensionlessGroups", "DomainError", "GdlError", "InconsistencyError",
    "MaterialSpec", "PhaseError", "QuadratureError", "SnapbackClass",
    "SnapbackReport", "SolverError", "ThresholdLaw", "UnsupportedRegimeError",
    "block_bilinear", "case_i", "case_ii", "case_iii", "parse_variant",
    "__version__",
]
