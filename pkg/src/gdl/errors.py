"""Exception types shared across the package."""


class GdlError(Exception):
    """Base class for all package-specific errors."""


class DomainError(GdlError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class DegenerateMaterialError(GdlError, ValueError):
    """Material data makes a formula meaningless (e.g. omega'(0) = 0)."""


class PhaseError(GdlError, ValueError):
    """Driving variable outside the validity range of an equilibrium phase."""


class UnsupportedRegimeError(GdlError, ValueError):
    """Parameter regime not covered by the closed-form solution."""


class QuadratureError(GdlError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class BracketError(GdlError, RuntimeError):
    """Root finding failed (no sign change or iteration cap hit)."""


class InconsistencyError(GdlError, RuntimeError):
    """A consistency residual exceeded its tolerance (signals bad input state)."""


class SolverError(GdlError, RuntimeError):
    """Iterative solver failed to converge; carries diagnostics in args."""
