"""Closed-form solution engine for the damageable tensile bar.

The bar occupies [-L, L], is loaded by opposite end displacements +-u*, and
localizes damage in a single symmetric band; everything below works on the
half-bar [0, L] with the damage peak at x = 0. Solutions are parametrized by
the maximum damage level ``d_m``; the band half-width is ``l_m = l_c * d_m``
and the damage profile is the triangle ``d(x) = max(0, d_m - x/l_c)`` whose
slope saturates the gradient bound.

End displacements are evaluated through the global compliance identity
``u* = sigma/E * (l_c * F(d_m) + L)``, which keeps all three constitutive
variants consistent with the quadrature oracle (see
``oracle.solve_rod_end_displacement``); for the linear-degradation variant
this differs from a widely quoted closed form by the factor
``sqrt(1 - d_m)`` = sigma/sigma_c, without which the response could never
snap back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import material
from .errors import DegenerateMaterialError, DomainError, UnsupportedRegimeError
from .material import ConstitutiveVariant, Degradation, MaterialSpec, ThresholdLaw

# Evaluations closer to full damage than this are clamped (1/(1-d_m) factors).
EPS_ONE = 1e-9


class FieldKind(Enum):
    DAMAGE = "damage"
    GAMMA2 = "gamma2"
    Y = "Y"
    YC = "Yc"
    TRACTION = "traction"


@dataclass(frozen=True)
class FieldProfile:
    """A sampled spatial field along the bar or interface."""

    x: np.ndarray
    values: np.ndarray
    field_kind: FieldKind
    driving_value: float

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.x.ndim != 1 or self.x.shape != self.values.shape:
            raise DomainError("profile needs matching 1-d x and values")
        if self.x.size < 2 or not np.all(np.diff(self.x) > 0.0):
            raise DomainError("profile abscissae must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("profile values must be finite")


@dataclass(frozen=True)
class RodState:
    """One point of the equilibrium path, parametrized by d_m."""

    d_m: float
    sigma: float
    u_star: float
    w: float
    l_m: float
    variant: ConstitutiveVariant = field(repr=False, default=None)


def grid_with_breakpoints(a: float, b: float, n: int, breakpoints=()) -> np.ndarray:
    """Uniform grid on [a, b] with the given interior abscissae inserted exactly."""
    if n < 2:
        raise DomainError("need at least two samples")
    pts = np.linspace(a, b, n)
    extra = [p for p in breakpoints if a < p < b]
    if extra:
        pts = np.unique(np.concatenate([pts, np.asarray(extra, dtype=float)]))
        tol = 1e-12 * max(b - a, 1.0)
        out = [pts[0]]
        for p in pts[1:]:
            if p - out[-1] > tol:
                out.append(p)
        out[-1] = b  # never let dedupe displace the exact right endpoint
        pts = np.asarray(out)
    return pts


def _clamp_dm(d_m: float) -> float:
    if not 0.0 <= d_m <= 1.0:
        raise DomainError(f"d_m={d_m} outside [0, 1]")
    return min(d_m, 1.0 - EPS_ONE)


def _dispatch(variant: ConstitutiveVariant) -> str:
    deg, law = variant.degradation, variant.threshold
    if deg is Degradation.QUADRATIC and law is ThresholdLaw.COHESIVE_EQUIVALENT:
        return "i"
    if deg is Degradation.QUADRATIC and law is ThresholdLaw.CONSTANT_FULL:
        return "ii"
    if deg is Degradation.LINEAR and law is ThresholdLaw.CONSTANT_HALF:
        return "iii"
    raise UnsupportedRegimeError(
        f"no bar closed form for variant {variant.label}")


def elastic_limit(spec: MaterialSpec, variant: ConstitutiveVariant) -> float:
    """End displacement at damage onset: sqrt(2 Y_c(0) / (-omega'(0) E)) * L.

    Below this value the unique response is homogeneous elastic,
    u* = sigma L / E.
    """
    wp0 = material.omega_prime(variant, 0.0)
    if wp0 == 0.0:
        raise DegenerateMaterialError("omega'(0) = 0: elastic limit undefined")
    yc0 = material.y_c(variant, spec, 0.0)
    return math.sqrt(2.0 * yc0 / (-wp0 * spec.E)) * spec.L


def f_of_dm(variant: ConstitutiveVariant, d_m: float) -> float:
    """Dimensionless band compliance F(d_m) = int_0^d_m (omega^-1 - 1) dd.

    Closed forms: d_m**2/(1-d_m) for quadratic degradation,
    -d_m - log(1-d_m) for linear. Diverges at d_m = 1.
    """
    if not 0.0 <= d_m < 1.0:
        raise DomainError(f"F diverges at d_m=1; got {d_m}")
    if variant.degradation is Degradation.QUADRATIC:
        return d_m * d_m / (1.0 - d_m)
    return -d_m - math.log1p(-d_m)


def stress_of_dm(spec: MaterialSpec, variant: ConstitutiveVariant, d_m: float) -> float:
    """Uniform axial stress along the localized branch."""
    if not 0.0 <= d_m <= 1.0:
        raise DomainError(f"d_m={d_m} outside [0, 1]")
    case = _dispatch(variant)
    sc = spec.sigma_c
    if case == "i":
        lam = spec.lam
        return sc * (1.0 - d_m) / (lam * d_m * d_m + 1.0 - d_m)
    if case == "ii":
        return 2.0 * sc * (1.0 - d_m) / math.sqrt(4.0 - 2.0 * d_m)
    return sc * math.sqrt(1.0 - d_m)


def u_star_of_dm(spec: MaterialSpec, variant: ConstitutiveVariant, d_m: float) -> float:
    """End displacement along the localized branch.

    Evaluates sigma(d_m) * L/E * (1 + beta F(d_m)) in a form that stays finite
    at d_m = 1. At d_m = 0 this equals the elastic limit.
    """
    if not 0.0 <= d_m <= 1.0:
        raise DomainError(f"d_m={d_m} outside [0, 1]")
    case = _dispatch(variant)
    sc, E, L = spec.sigma_c, spec.E, spec.L
    beta = spec.beta
    if case == "i":
        lam = spec.lam
        return sc * L / E * (beta * d_m * d_m + 1.0 - d_m) / (lam * d_m * d_m + 1.0 - d_m)
    if case == "ii":
        return 2.0 * sc * L / E * (beta * d_m * d_m + 1.0 - d_m) / math.sqrt(4.0 - 2.0 * d_m)
    if d_m == 1.0:
        return 0.0
    return sc * L / E * math.sqrt(1.0 - d_m) * (1.0 - beta * d_m - beta * math.log1p(-d_m))


def opening_w(spec: MaterialSpec, variant: ConstitutiveVariant, d_m: float) -> float:
    """Apparent opening across the band, w = 2 sigma l_c F / E = 2(u* - sigma L/E).

    For the cohesive-equivalent variant the pair (w, sigma) lies identically
    on the linear softening line sigma = sigma_c (1 - sigma_c w / (2 G_c)).
    """
    if not 0.0 <= d_m <= 1.0:
        raise DomainError(f"d_m={d_m} outside [0, 1]")
    case = _dispatch(variant)
    sc, E, l_c = spec.sigma_c, spec.E, spec.l_c
    if case == "i":
        lam = spec.lam
        return 2.0 * l_c * sc / E * d_m * d_m / (lam * d_m * d_m + 1.0 - d_m)
    if case == "ii":
        return 4.0 * l_c * sc / E * d_m * d_m / math.sqrt(4.0 - 2.0 * d_m)
    if d_m == 1.0:
        return 0.0
    return 2.0 * l_c * sc / E * math.sqrt(1.0 - d_m) * (-d_m - math.log1p(-d_m))


def local_driving_force(spec: MaterialSpec, variant: ConstitutiveVariant,
                        d: float, sigma: float) -> float:
    """Damage-driving force at fixed stress: Y = -omega'/omega**2 * sigma**2/(2E)."""
    w = material.omega(variant, d)
    wp = material.omega_prime(variant, d)
    return -wp / (w * w) * sigma * sigma / (2.0 * spec.E)


def damage_profile(spec: MaterialSpec, d_m: float, n_samples: int = 201) -> FieldProfile:
    """Triangular damage field d(x) = max(0, d_m - x/l_c) on [0, L]."""
    if not 0.0 <= d_m <= 1.0:
        raise DomainError(f"d_m={d_m} outside [0, 1]")
    l_m = spec.l_c * d_m
    x = grid_with_breakpoints(0.0, spec.L, n_samples, (l_m,))
    values = np.maximum(0.0, d_m - x / spec.l_c)
    return FieldProfile(x, values, FieldKind.DAMAGE, d_m)


def driving_force_profile(spec: MaterialSpec, d_m: float,
                          n_samples: int = 201) -> FieldProfile:
    """Y(x) along the bar at the cohesive-equivalent state d_m."""
    variant = material.case_i()
    d_m = _clamp_dm(d_m)
    sigma = stress_of_dm(spec, variant, d_m)
    prof = damage_profile(spec, d_m, n_samples)
    vals = sigma * sigma / (spec.E * (1.0 - prof.values) ** 3)
    return FieldProfile(prof.x, vals, FieldKind.Y, d_m)


def threshold_profile(spec: MaterialSpec, d_m: float,
                      n_samples: int = 201) -> FieldProfile:
    """Y_c(d(x)) along the bar at the cohesive-equivalent state d_m."""
    d_m = _clamp_dm(d_m)
    prof = damage_profile(spec, d_m, n_samples)
    laws = material.law_set(material.case_i(), spec)
    return FieldProfile(prof.x, laws.y_c(prof.values), FieldKind.YC, d_m)


def gamma2_of_damage(spec: MaterialSpec, d_m: float, d) -> np.ndarray:
    """Gradient-bound multiplier as a function of local damage (cohesive case).

    gamma2(d) = l_c/(2E) * d(2-d)/(1-d)**2 * (sigma(d)**2 - sigma(d_m)**2),
    zero at d = 0 and d = d_m, non-negative in between.
    """
    lam = spec.lam
    d = np.asarray(d, dtype=float)
    sig_m = stress_of_dm(spec, material.case_i(), d_m)
    sig_d = spec.sigma_c * (1.0 - d) / (lam * d * d + 1.0 - d)
    return (spec.l_c / (2.0 * spec.E) * d * (2.0 - d) / (1.0 - d) ** 2
            * (sig_d**2 - sig_m**2))


def gamma2_profile(spec: MaterialSpec, d_m: float, n_samples: int = 201) -> FieldProfile:
    """Gradient-bound multiplier field gamma2(x) on [0, L] (cohesive case).

    Vanishes at both ends of the localization band and outside it; its
    maximum sits where Y crosses Y_c.
    """
    if not 0.0 < d_m <= 1.0:
        raise DomainError("gamma2 profile needs 0 < d_m <= 1")
    d_m = _clamp_dm(d_m)
    prof = damage_profile(spec, d_m, n_samples)
    inside = prof.values > 0.0
    vals = np.zeros_like(prof.values)
    vals[inside] = gamma2_of_damage(spec, d_m, prof.values[inside])
    np.maximum(vals, 0.0, out=vals)  # band edges can round to -1e-18
    return FieldProfile(prof.x, vals, FieldKind.GAMMA2, d_m)


def traction_profile(spec: MaterialSpec, d_m: float, n_samples: int = 201,
                     variant: Optional[ConstitutiveVariant] = None) -> FieldProfile:
    """Uniform stress column on the shared grid (1D equilibrium)."""
    variant = variant or material.case_i()
    if not 0.0 <= d_m <= 1.0:
        raise DomainError(f"d_m={d_m} outside [0, 1]")
    sigma = stress_of_dm(spec, variant, d_m)
    x = grid_with_breakpoints(0.0, spec.L, n_samples, (spec.l_c * d_m,))
    return FieldProfile(x, np.full_like(x, sigma), FieldKind.TRACTION, d_m)


def profile_bundle(spec: MaterialSpec, d_m: float,
                   n_samples: int = 201) -> dict[str, FieldProfile]:
    """All five fields on one grid at a cohesive-equivalent station."""
    dm_hat = _clamp_dm(d_m)
    if dm_hat > 0.0:
        gamma2 = gamma2_profile(spec, dm_hat, n_samples)
    else:
        x = grid_with_breakpoints(0.0, spec.L, n_samples)
        gamma2 = FieldProfile(x, np.zeros_like(x), FieldKind.GAMMA2, 0.0)
    return {
        "damage": damage_profile(spec, dm_hat, n_samples),
        "traction": traction_profile(spec, dm_hat, n_samples),
        "Y": driving_force_profile(spec, dm_hat, n_samples),
        "Yc": threshold_profile(spec, dm_hat, n_samples),
        "gamma2": gamma2,
    }


def dm_at_ustar(spec: MaterialSpec, variant: ConstitutiveVariant,
                u_star: float) -> float:
    """Invert the localized branch u*(d_m) by bisection (needs beta > lam).

    Only meaningful on monotone branches; returns 0 at or below the elastic
    limit.
    """
    if spec.beta <= spec.lam:
        raise UnsupportedRegimeError("u*(d_m) is not monotone for beta <= lam")
    if u_star <= u_star_of_dm(spec, variant, 0.0):
        return 0.0
    lo, hi = 0.0, 1.0 - EPS_ONE
    if u_star >= u_star_of_dm(spec, variant, hi):
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if u_star_of_dm(spec, variant, mid) < u_star:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def equilibrium_curve(spec: MaterialSpec, variant: ConstitutiveVariant,
                      n_points: int, d_max: float = 1.0) -> list[RodState]:
    """Localized branch sampled uniformly in d_m on [0, d_max].

    The first state (d_m = 0) is the elastic limit point; the elastic branch
    below it is the straight line from the origin.
    """
    if n_points < 2:
        raise DomainError("equilibrium_curve needs n_points >= 2")
    if not 0.0 < d_max <= 1.0:
        raise DomainError("d_max must lie in (0, 1]")
    states = []
    for d_m in np.linspace(0.0, d_max, n_points):
        d_m = float(d_m)
        states.append(RodState(
            d_m=d_m,
            sigma=stress_of_dm(spec, variant, d_m),
            u_star=u_star_of_dm(spec, variant, d_m),
            w=opening_w(spec, variant, d_m),
            l_m=spec.l_c * d_m,
            variant=variant,
        ))
    return states
