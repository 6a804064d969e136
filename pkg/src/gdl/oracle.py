"""Independent numerical machinery: adaptive quadrature and bracketing roots.

Every closed form in :mod:`gdl.rod` and :mod:`gdl.block` can be re-derived
here from the averaged limit condition and the moment balance, using nothing
but definite integrals and bisection. Discrepancies between a closed form and
its oracle are arbitrated in favour of the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from . import material
from .errors import BracketError, DomainError, PhaseError, QuadratureError
from .material import ConstitutiveVariant, MaterialSpec


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    max_depth: int = 48

    def __post_init__(self):
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise DomainError("quadrature tolerances must be strictly positive")
        if self.max_depth < 10:
            raise DomainError("max_depth must be at least 10")


@dataclass(frozen=True)
class BracketConfig:
    lo: float
    hi: float
    tol: float = 1e-13
    max_iter: int = 200

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError("bracket requires lo < hi")
        if self.tol <= 0.0:
            raise DomainError("root tolerance must be strictly positive")
        if self.max_iter < 1:
            raise DomainError("max_iter must be at least 1")


_DEFAULT = QuadratureConfig()


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    # h is the half-width of the panel
    return h / 3.0 * (fa + 4.0 * fm + fb)


def integrate_with_error(f: Callable[[float], float], a: float, b: float,
                         config: Optional[QuadratureConfig] = None) -> tuple[float, float]:
    """Adaptive Simpson integral of ``f`` over [a, b] with an error estimate.

    The rule is exact for cubics on a single panel. Each subdivision halves
    the local tolerance budget; the returned error is the accumulated
    Richardson estimate. Raises QuadratureError if some panel still fails its
    tolerance at ``max_depth``.
    """
    cfg = config or _DEFAULT
    if a == b:
        return 0.0, 0.0
    if a > b:
        value, err = integrate_with_error(f, b, a, cfg)
        return -value, err

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(fa, fm, fb, 0.5 * (b - a))
    tol = max(cfg.abs_tol, cfg.rel_tol * abs(whole))

    def recurse(lo, hi, flo, fmid, fhi, s_whole, tol_local, depth):
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        h4 = 0.25 * (hi - lo)
        s_left = _simpson(flo, flm, fmid, h4)
        s_right = _simpson(fmid, frm, fhi, h4)
        err = (s_left + s_right - s_whole) / 15.0
        if abs(err) <= tol_local:
            return s_left + s_right + err, abs(err)
        if depth >= cfg.max_depth:
            raise QuadratureError(
                f"adaptive Simpson hit max_depth={cfg.max_depth} on "
                f"[{lo}, {hi}] with residual {abs(err):.3e} > {tol_local:.3e}")
        vl, el = recurse(lo, mid, flo, flm, fmid, s_left, 0.5 * tol_local, depth + 1)
        vr, er = recurse(mid, hi, fmid, frm, fhi, s_right, 0.5 * tol_local, depth + 1)
        return vl + vr, el + er

    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def integrate(f: Callable[[float], float], a: float, b: float,
              config: Optional[QuadratureConfig] = None) -> float:
    """Adaptive Simpson integral of ``f`` over [a, b]."""
    return integrate_with_error(f, a, b, config)[0]


def integrate_piecewise(f: Callable[[float], float], points: Iterable[float],
                        config: Optional[QuadratureConfig] = None) -> float:
    """Integrate over consecutive sub-intervals (panel split at known kinks)."""
    pts = list(points)
    if len(pts) < 2:
        raise DomainError("integrate_piecewise needs at least two points")
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        total += integrate(f, lo, hi, config)
    return total


def find_root(f: Callable[[float], float], config: BracketConfig) -> float:
    """Bisection on a bracketing interval; robust, linear convergence."""
    lo, hi = config.lo, config.hi
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo:.3e}, {fhi:.3e}")
    for _ in range(config.max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or (hi - lo) < config.tol:
            return mid
        if flo * fm < 0.0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Re-derivations from first principles
# ---------------------------------------------------------------------------

def solve_rod_stress(spec: MaterialSpec, variant: ConstitutiveVariant, d_m: float,
                     config: Optional[QuadratureConfig] = None) -> float:
    """Uniform bar stress from the averaged limit condition.

    sigma = sqrt(2 E H(d_m) / (omega^-1(d_m) - 1)) with the running threshold
    integral H computed by quadrature, independent of any closed form.
    """
    if not 0.0 < d_m < 1.0:
        raise DomainError("solve_rod_stress needs 0 < d_m < 1")
    h_val = integrate(lambda s: material.y_c(variant, spec, s), 0.0, d_m, config)
    winv = 1.0 / material.omega(variant, d_m) - 1.0
    return math.sqrt(2.0 * spec.E * h_val / winv)


def solve_rod_end_displacement(spec: MaterialSpec, variant: ConstitutiveVariant,
                               d_m: float,
                               config: Optional[QuadratureConfig] = None) -> float:
    """End displacement from the global compliance identity.

    u* = sigma/E * (integral over the band of (omega^-1 - 1) dx + L), with the
    band integral mapped to damage via |dd/dx| = 1/l_c.
    """
    sigma = solve_rod_stress(spec, variant, d_m, config)
    f_val = integrate(lambda s: 1.0 / material.omega(variant, s) - 1.0,
                      0.0, d_m, config)
    return sigma / spec.E * (spec.l_c * f_val + spec.L)


def _block_geometry(spec: MaterialSpec, l_m: float) -> tuple[float, float, float]:
    """Return (c, h_active, d_m) for a damaged-zone size l_m."""
    c = max(0.0, l_m - spec.l_c)
    h_active = min(l_m, spec.L)
    d_m = min(1.0, l_m / spec.l_c)
    return c, h_active, d_m


def solve_block_alpha(spec: MaterialSpec, l_m: float,
                      config: Optional[QuadratureConfig] = None) -> float:
    """Opening angle from the averaged limit condition, by quadrature.

    The driving force is proportional to alpha**2, so the condition
    int Y(alpha) dx = int Y_c dx over the active in-domain interval is solved
    exactly as alpha = sqrt(RHS / LHS-coefficient). In the propagation regime
    (l_m > l_c) the interval is [c, L]; otherwise [0, min(l_m, L)].
    """
    spec.require_interface()
    if l_m <= 0.0:
        raise PhaseError("solve_block_alpha needs l_m > 0")
    variant = material.block_bilinear()
    c, h_active, d_m = _block_geometry(spec, l_m)
    lo, hi = (c, spec.L) if c > 0.0 else (0.0, h_active)
    k, L, l_c = spec.k, spec.L, spec.l_c

    def damage(x):
        return min(1.0, max(0.0, d_m - (x - c) / l_c))

    def lhs_coeff(x):
        return -material.omega_prime(variant, damage(x)) * 0.5 * k * (L - x) ** 2

    def rhs(x):
        return material.y_c(variant, spec, damage(x))

    num = integrate(rhs, lo, hi, config)
    den = integrate(lhs_coeff, lo, hi, config)
    if num <= 0.0 or den <= 0.0:
        raise PhaseError("non-positive integrand in the averaged limit condition")
    return math.sqrt(num / den)


def solve_block_alpha_bisect(spec: MaterialSpec, l_m: float,
                             config: Optional[QuadratureConfig] = None,
                             bracket: Optional[BracketConfig] = None) -> float:
    """Generic bisection on the limit-condition residual (robustness check)."""
    spec.require_interface()
    variant = material.block_bilinear()
    c, h_active, d_m = _block_geometry(spec, l_m)
    lo, hi = (c, spec.L) if c > 0.0 else (0.0, h_active)
    k, L, l_c = spec.k, spec.L, spec.l_c

    def damage(x):
        return min(1.0, max(0.0, d_m - (x - c) / l_c))

    def residual(alpha):
        drive = integrate(
            lambda x: -material.omega_prime(variant, damage(x))
            * 0.5 * k * alpha * alpha * (L - x) ** 2, lo, hi, config)
        resist = integrate(lambda x: material.y_c(variant, spec, damage(x)),
                           lo, hi, config)
        return drive - resist

    if bracket is None:
        guess = solve_block_alpha(spec, l_m, config)
        bracket = BracketConfig(lo=0.25 * guess, hi=4.0 * guess, tol=1e-14 * guess)
    return find_root(residual, bracket)


def recompute_reaction(spec: MaterialSpec, state, config: Optional[QuadratureConfig] = None) -> float:
    """Reaction force from the moment balance about the rotation center.

    P = (1/L) * int_0^L omega(d(x)) k alpha (L-x)^2 dx, with the integral
    split at the damage-front and active-zone breakpoints before quadrature.
    """
    spec.require_interface()
    variant = material.block_bilinear()
    k, L, l_c = spec.k, spec.L, spec.l_c
    c = state.c
    d_m = state.d_m
    alpha = state.alpha
    h_active = min(state.l_m, L)

    def damage(x):
        if state.l_m <= 0.0:
            return 0.0
        return min(1.0, max(0.0, d_m - (x - c) / l_c))

    def moment_density(x):
        return material.omega(variant, damage(x)) * k * alpha * (L - x) ** 2

    points = sorted({0.0, L, min(max(c, 0.0), L), min(h_active, L)})
    return integrate_piecewise(moment_density, points, config) / L
