"""Constitutive laws, dimensionless groups and admissibility predicates.

Everything here is a pure function of its arguments. The degradation factor
``omega`` multiplies the elastic stiffness; the threshold ``y_c`` is the
damage-state-dependent critical energy release rate entering the dissipation
potential. Four threshold laws are supported:

* ``COHESIVE_EQUIVALENT`` -- calibrated so the localized bar response matches
  a linear-softening cohesive interface (parametrized by ``lambda``),
* ``CONSTANT_FULL`` -- constant ``sigma_c**2 / E``,
* ``CONSTANT_HALF`` -- constant ``sigma_c**2 / (2 E)``,
* ``BLOCK_BILINEAR`` -- interface law producing a bilinear traction-separation
  curve with initial threshold ``G_0`` and toughness ``G_c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from .errors import DegenerateMaterialError, DomainError, UnsupportedRegimeError

# Damage values this far outside [0, 1] are treated as float noise and clamped;
# anything worse raises DomainError.
_DAMAGE_SLACK = 1e-9


class Degradation(Enum):
    QUADRATIC = "quadratic"
    LINEAR = "linear"


class ThresholdLaw(Enum):
    COHESIVE_EQUIVALENT = "cohesive-equivalent"
    CONSTANT_FULL = "constant-full"
    CONSTANT_HALF = "constant-half"
    BLOCK_BILINEAR = "block-bilinear"


@dataclass(frozen=True)
class ConstitutiveVariant:
    """A degradation function paired with a threshold law."""

    degradation: Degradation
    threshold: ThresholdLaw

    @property
    def label(self) -> str:
        return f"{self.degradation.value}+{self.threshold.value}"


def case_i() -> ConstitutiveVariant:
    """Quadratic degradation with the cohesive-equivalent threshold."""
    return ConstitutiveVariant(Degradation.QUADRATIC, ThresholdLaw.COHESIVE_EQUIVALENT)


def case_ii() -> ConstitutiveVariant:
    """Quadratic degradation with the constant threshold sigma_c**2/E."""
    return ConstitutiveVariant(Degradation.QUADRATIC, ThresholdLaw.CONSTANT_FULL)


def case_iii() -> ConstitutiveVariant:
    """Linear degradation with the constant threshold sigma_c**2/(2E)."""
    return ConstitutiveVariant(Degradation.LINEAR, ThresholdLaw.CONSTANT_HALF)


def block_bilinear() -> ConstitutiveVariant:
    """Quadratic degradation with the bilinear interface threshold."""
    return ConstitutiveVariant(Degradation.QUADRATIC, ThresholdLaw.BLOCK_BILINEAR)


_VARIANT_NAMES = {"i": case_i, "ii": case_ii, "iii": case_iii, "block": block_bilinear}


def parse_variant(name: str) -> ConstitutiveVariant:
    """Resolve a variant from its short name ('i', 'ii', 'iii', 'block')."""
    try:
        return _VARIANT_NAMES[name.strip().lower()]()
    except KeyError:
        raise DomainError(f"unknown constitutive variant {name!r}; expected one of "
                          f"{sorted(_VARIANT_NAMES)}") from None


@dataclass(frozen=True)
class DimensionlessGroups:
    """Length-scale ratios controlling the bar response.

    Attributes:
        lam: l_c / l_coh, gradient length over cohesive length.
        beta: l_c / L, gradient length over bar half-length.
        l_coh: E * G_c / sigma_c**2, intrinsic cohesive-zone length.
    """

    lam: float
    beta: float
    l_coh: float

    def __post_init__(self):
        if self.lam <= 0.0 or self.beta <= 0.0 or self.l_coh <= 0.0:
            raise DomainError("dimensionless groups must be strictly positive")


@dataclass(frozen=True)
class MaterialSpec:
    """Bulk and interface material data.

    Attributes:
        E: elastic modulus (stress units).
        L: half-length of the bar, or width of the rigid block (length).
        l_c: characteristic length of the damage-gradient bound (length).
        sigma_c: cohesive peak stress (stress units).
        G_c: fracture energy / interface toughness (energy per area).
        k: interface stiffness in tension (stress/length); block problems only.
        G_0: initial interface energy threshold (energy per area); block only.
    """

    E: float
    L: float
    l_c: float
    sigma_c: float
    G_c: float
    k: Optional[float] = None
    G_0: Optional[float] = None

    def __post_init__(self):
        for name in ("E", "L", "l_c", "sigma_c", "G_c"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"MaterialSpec.{name} must be strictly positive")
        if (self.k is None) != (self.G_0 is None):
            raise DomainError("interface data requires both k and G_0")
        if self.k is not None:
            if not (self.k > 0.0 and self.G_0 > 0.0):
                raise DomainError("interface k and G_0 must be strictly positive")
            if not self.G_c > self.G_0:
                raise DomainError("bilinear interface law requires G_c > G_0")

    @property
    def l_coh(self) -> float:
        return self.E * self.G_c / self.sigma_c**2

    @property
    def lam(self) -> float:
        return self.l_c / self.l_coh

    @property
    def beta(self) -> float:
        return self.l_c / self.L

    def groups(self) -> DimensionlessGroups:
        return DimensionlessGroups(lam=self.lam, beta=self.beta, l_coh=self.l_coh)

    def require_interface(self) -> None:
        if self.k is None or self.G_0 is None:
            raise DomainError("this operation needs interface data (k, G_0)")

    @classmethod
    def from_lambda_beta(cls, lam: float, beta: float, E: float = 1.0,
                         L: float = 1.0, sigma_c: float = 1.0) -> "MaterialSpec":
        """Build bar data from the two dimensionless groups.

        l_c = beta * L and G_c = l_c * sigma_c**2 / (lam * E), so that the
        resulting spec reproduces exactly the requested (lam, beta).
        """
        if lam <= 0.0 or beta <= 0.0:
            raise DomainError("lam and beta must be strictly positive")
        l_c = beta * L
        G_c = l_c * sigma_c**2 / (lam * E)
        return cls(E=E, L=L, l_c=l_c, sigma_c=sigma_c, G_c=G_c)

    @classmethod
    def block_benchmark(cls, l_c: float = 6.0) -> "MaterialSpec":
        """Reference rigid-block data set (L=2 mm, k=800 N/mm^3, G_c=0.25, G_0=0.025)."""
        return cls(E=1.0, L=2.0, l_c=l_c, sigma_c=1.0, G_c=0.25, k=800.0, G_0=0.025)


# ---------------------------------------------------------------------------
# Degradation function and derivatives
# ---------------------------------------------------------------------------

def _check_damage(d: float) -> float:
    if d < 0.0:
        if d >= -_DAMAGE_SLACK:
            return 0.0
        raise DomainError(f"damage {d} outside [0, 1]")
    if d > 1.0:
        if d <= 1.0 + _DAMAGE_SLACK:
            return 1.0
        raise DomainError(f"damage {d} outside [0, 1]")
    return d


def omega(variant: ConstitutiveVariant, d: float) -> float:
    """Stiffness degradation factor; omega(0)=1, omega(1)=0, decreasing."""
    d = _check_damage(d)
    if variant.degradation is Degradation.QUADRATIC:
        return (1.0 - d) ** 2
    return 1.0 - d


def omega_prime(variant: ConstitutiveVariant, d: float) -> float:
    """Analytic first derivative of the degradation factor."""
    d = _check_damage(d)
    if variant.degradation is Degradation.QUADRATIC:
        return -2.0 * (1.0 - d)
    return -1.0


def omega_second(variant: ConstitutiveVariant, d: float) -> float:
    """Analytic second derivative of the degradation factor."""
    _check_damage(d)
    if variant.degradation is Degradation.QUADRATIC:
        return 2.0
    return 0.0


# ---------------------------------------------------------------------------
# Threshold laws
# ---------------------------------------------------------------------------

def y_c(variant: ConstitutiveVariant, spec: MaterialSpec, d: float) -> float:
    """Energy-release threshold Y_c(d).

    For COHESIVE_EQUIVALENT the closed form

        Y_c(d) = sigma_c**2/E * (1 + lam*d**2*(d-3)) / (lam*d**2 + 1 - d)**3

    is total on [0, 1]; its value at d=1 equals the limit
    (1 - 2*lam)/lam**3 * sigma_c**2/E (removable singularity of the
    derivation, not of the expression). Positivity everywhere requires
    lam < 1/2.
    """
    d = _check_damage(d)
    law = variant.threshold
    if law is ThresholdLaw.COHESIVE_EQUIVALENT:
        lam = spec.lam
        q = lam * d * d + 1.0 - d
        n = 1.0 + lam * d * d * (d - 3.0)
        return spec.sigma_c**2 / spec.E * n / q**3
    if law is ThresholdLaw.CONSTANT_FULL:
        return spec.sigma_c**2 / spec.E
    if law is ThresholdLaw.CONSTANT_HALF:
        return spec.sigma_c**2 / (2.0 * spec.E)
    # bilinear interface law
    spec.require_interface()
    w = omega(variant, d)
    g0, gc = spec.G_0, spec.G_c
    return -omega_prime(variant, d) * g0 * gc**2 / (g0 + (gc - g0) * w) ** 2


def y_c_prime(variant: ConstitutiveVariant, spec: MaterialSpec, d: float) -> float:
    """Analytic derivative dY_c/dd (hand-coded, never finite differences)."""
    d = _check_damage(d)
    law = variant.threshold
    if law is ThresholdLaw.COHESIVE_EQUIVALENT:
        lam = spec.lam
        q = lam * d * d + 1.0 - d
        qp = 2.0 * lam * d - 1.0
        n = 1.0 + lam * d * d * (d - 3.0)
        np_ = lam * (3.0 * d * d - 6.0 * d)
        return spec.sigma_c**2 / spec.E * (np_ * q - 3.0 * n * qp) / q**4
    if law in (ThresholdLaw.CONSTANT_FULL, ThresholdLaw.CONSTANT_HALF):
        return 0.0
    spec.require_interface()
    g0, gc = spec.G_0, spec.G_c
    w = omega(variant, d)
    wp = omega_prime(variant, d)
    wpp = omega_second(variant, d)
    den = g0 + (gc - g0) * w
    return g0 * gc**2 * (-wpp * den + 2.0 * wp * (gc - g0) * wp) / den**3


def yc_antiderivative(variant: ConstitutiveVariant, spec: MaterialSpec, d: float) -> float:
    """Closed form of the running threshold integral H(d) = int_0^d Y_c(s) ds."""
    d = _check_damage(d)
    law = variant.threshold
    if law is ThresholdLaw.COHESIVE_EQUIVALENT:
        lam = spec.lam
        q = lam * d * d + 1.0 - d
        return spec.sigma_c**2 * d * (2.0 - d) / (2.0 * spec.E * q * q)
    if law is ThresholdLaw.CONSTANT_FULL:
        return spec.sigma_c**2 * d / spec.E
    if law is ThresholdLaw.CONSTANT_HALF:
        return spec.sigma_c**2 * d / (2.0 * spec.E)
    spec.require_interface()
    g0, gc = spec.G_0, spec.G_c
    w = omega(variant, d)
    return g0 * gc**2 / (gc - g0) * (1.0 / (g0 + (gc - g0) * w) - 1.0 / gc)


# ---------------------------------------------------------------------------
# Admissibility of lambda (cohesive-equivalent threshold)
# ---------------------------------------------------------------------------

def stability_bound_lambda(d: float) -> float:
    """Upper bound on lambda from local stability, closed form.

    Diverges as d -> 0 (returned as +inf: the inequality is vacuous there)
    and tends to 1/2 as d -> 1.
    """
    d = _check_damage(d)
    if d == 0.0:
        return math.inf
    p = d**4 - 4.0 * d**3 + 40.0 * d**2 - 72.0 * d + 36.0
    num = (d - 2.0) * math.sqrt(p) + d**3 - 4.0 * d**2 - 10.0 * d + 12.0
    den = 8.0 * d**4 - 36.0 * d**3 + 24.0 * d**2
    return num / den


def softening_bound_lambda(d: float) -> float:
    """Upper bound on lambda from strain softening: (1 + (1-d)**2) / (2d)."""
    d = _check_damage(d)
    if d == 0.0:
        return math.inf
    return (1.0 + (1.0 - d) ** 2) / (2.0 * d)


def _yc_hat(lam: float, d: float) -> float:
    q = lam * d * d + 1.0 - d
    return (1.0 + lam * d * d * (d - 3.0)) / q**3


def _yc_hat_prime(lam: float, d: float) -> float:
    q = lam * d * d + 1.0 - d
    qp = 2.0 * lam * d - 1.0
    n = 1.0 + lam * d * d * (d - 3.0)
    np_ = lam * (3.0 * d * d - 6.0 * d)
    return (np_ * q - 3.0 * n * qp) / q**4


def stability_holds(lam: float, d: float) -> bool:
    """Local stability inequality Y_c*omega'' - Y_c'*omega' > 0 (quadratic omega,
    cohesive-equivalent threshold, normalized by sigma_c**2/E)."""
    d = _check_damage(d)
    return 2.0 * _yc_hat(lam, d) + 2.0 * (1.0 - d) * _yc_hat_prime(lam, d) > 0.0


def softening_holds(lam: float, d: float) -> bool:
    """Strain-softening inequality (complementary energy decreasing with damage)."""
    d = _check_damage(d)
    w = (1.0 - d) ** 2
    wp = -2.0 * (1.0 - d)
    wpp = 2.0
    yc_ = _yc_hat(lam, d)
    ycp = _yc_hat_prime(lam, d)
    return (ycp * w * w + 2.0 * yc_ * w * wp) * wp - yc_ * w * w * wpp > 0.0


# ---------------------------------------------------------------------------
# Snap-back classification
# ---------------------------------------------------------------------------

class SnapbackClass(Enum):
    STABLE = "stable under displacement control"
    SNAPBACK_AT_ONSET = "snap-back at onset"
    SNAPBACK_WINDOW = "snap-back at onset plus a second divergence"


@dataclass(frozen=True)
class SnapbackReport:
    classification: SnapbackClass
    snapback_at_onset: bool
    # damage level where the beta-bound diverges a second time (linear
    # degradation only); None otherwise
    second_divergence_dm: Optional[float] = None


def snapback_beta_bound(variant: ConstitutiveVariant, d_m: float,
                        lam: Optional[float] = None) -> float:
    """Right-hand side of the no-snap-back condition beta > bound(d_m)."""
    d_m = _check_damage(d_m)
    deg, law = variant.degradation, variant.threshold
    if deg is Degradation.QUADRATIC and law is ThresholdLaw.COHESIVE_EQUIVALENT:
        if lam is None:
            raise DomainError("cohesive-equivalent bound needs lam")
        return lam
    if deg is Degradation.QUADRATIC and law is ThresholdLaw.CONSTANT_FULL:
        if d_m == 0.0:
            return math.inf
        return (3.0 - d_m) / (d_m * (8.0 - 3.0 * d_m))
    if deg is Degradation.LINEAR and law is ThresholdLaw.CONSTANT_HALF:
        g = 3.0 * d_m + math.log1p(-d_m) if d_m < 1.0 else -math.inf
        if g == 0.0 or d_m == 0.0:
            return math.inf
        return 1.0 / g
    raise UnsupportedRegimeError(f"no snap-back bound for variant {variant.label}")


def second_divergence_dm() -> float:
    """Root of 3*d + log(1-d) in (0, 1): second pole of the linear-degradation
    beta-bound (close to 0.94048)."""
    lo, hi = 0.5, 1.0 - 1e-15
    f = lambda d: 3.0 * d + math.log1p(-d)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def snapback_predicate(variant: ConstitutiveVariant, beta: float,
                       lam: float) -> SnapbackReport:
    """Classify the displacement-controlled response of the bar.

    Quadratic degradation + cohesive-equivalent threshold is stable iff
    beta > lam (equivalently L < l_coh). The constant-threshold variants
    always snap back right after the elastic limit; the linear-degradation
    one additionally has a second divergence of its beta-bound near
    d_m ~ 0.94048.
    """
    if beta <= 0.0 or lam <= 0.0:
        raise DomainError("beta and lam must be strictly positive")
    deg, law = variant.degradation, variant.threshold
    if deg is Degradation.QUADRATIC and law is ThresholdLaw.COHESIVE_EQUIVALENT:
        if beta > lam:
            return SnapbackReport(SnapbackClass.STABLE, snapback_at_onset=False)
        return SnapbackReport(SnapbackClass.SNAPBACK_AT_ONSET, snapback_at_onset=True)
    if deg is Degradation.QUADRATIC and law is ThresholdLaw.CONSTANT_FULL:
        return SnapbackReport(SnapbackClass.SNAPBACK_AT_ONSET, snapback_at_onset=True)
    if deg is Degradation.LINEAR and law is ThresholdLaw.CONSTANT_HALF:
        return SnapbackReport(SnapbackClass.SNAPBACK_WINDOW, snapback_at_onset=True,
                              second_divergence_dm=second_divergence_dm())
    raise UnsupportedRegimeError(f"no snap-back classification for {variant.label}")


# ---------------------------------------------------------------------------
# Vectorized law set (internal plumbing for the FE solver and field profiles)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LawSet:
    """Numpy-compatible closures for one variant; no domain checking."""

    omega: Callable
    omega_prime: Callable
    y_c: Callable
    y_c_prime: Callable
    antiderivative: Callable


def law_set(variant: ConstitutiveVariant, spec: MaterialSpec) -> LawSet:
    deg, law = variant.degradation, variant.threshold

    if deg is Degradation.QUADRATIC:
        w = lambda d: (1.0 - d) ** 2
        wp = lambda d: -2.0 * (1.0 - d)
    else:
        w = lambda d: 1.0 - d
        wp = lambda d: -1.0 + 0.0 * d

    if law is ThresholdLaw.COHESIVE_EQUIVALENT:
        lam, s2e = spec.lam, spec.sigma_c**2 / spec.E

        def yc_(d):
            q = lam * d * d + 1.0 - d
            return s2e * (1.0 + lam * d * d * (d - 3.0)) / q**3

        def ycp_(d):
            q = lam * d * d + 1.0 - d
            n = 1.0 + lam * d * d * (d - 3.0)
            return s2e * (lam * (3.0 * d * d - 6.0 * d) * q
                          - 3.0 * n * (2.0 * lam * d - 1.0)) / q**4

        def h_(d):
            q = lam * d * d + 1.0 - d
            return 0.5 * s2e * d * (2.0 - d) / (q * q)
    elif law is ThresholdLaw.CONSTANT_FULL:
        s2e = spec.sigma_c**2 / spec.E
        yc_ = lambda d: s2e + 0.0 * d
        ycp_ = lambda d: 0.0 * d
        h_ = lambda d: s2e * d
    elif law is ThresholdLaw.CONSTANT_HALF:
        s2e = spec.sigma_c**2 / (2.0 * spec.E)
        yc_ = lambda d: s2e + 0.0 * d
        ycp_ = lambda d: 0.0 * d
        h_ = lambda d: s2e * d
    else:
        spec.require_interface()
        g0, gc = spec.G_0, spec.G_c

        def yc_(d):
            return -wp(d) * g0 * gc**2 / (g0 + (gc - g0) * w(d)) ** 2

        def ycp_(d):
            den = g0 + (gc - g0) * w(d)
            wpp = 2.0 if deg is Degradation.QUADRATIC else 0.0
            return g0 * gc**2 * (-wpp * den + 2.0 * (gc - g0) * wp(d) ** 2) / den**3

        def h_(d):
            return g0 * gc**2 / (gc - g0) * (1.0 / (g0 + (gc - g0) * w(d)) - 1.0 / gc)

    return LawSet(omega=w, omega_prime=wp, y_c=yc_, y_c_prime=ycp_, antiderivative=h_)
