"""Four-phase analytic solver for rigid-block mode-I delamination.

A rigid block of width L rotates by a small angle ``alpha`` about its right
edge while a damageable adhesive layer on [0, L] resists the opening
``delta_n(x) = alpha (L - x)``. The interface threshold is the bilinear law
(initial threshold G_0, toughness G_c) with quadratic degradation, and the
damage gradient is bounded by 1/l_c with l_c > L.

The equilibrium path has four branches:

1. Elastic, up to ``delta_0 = sqrt(2 G_0 / k)``.
2. Nucleation: damaged zone size ``l_m`` grows from 0 to L.
3. Growth: l_m grows from L to l_c (zero-damage point now virtual).
4. Propagation: a fully damaged segment [0, c] advances, c = l_m - l_c.

The propagation-phase opening angle implemented here carries the exponent 1
on (L - c); the exponent-2 alternative sometimes quoted is dimensionally
inconsistent, breaks continuity at the growth/propagation junction by a
factor (L - c), and disagrees with the quadrature oracle. ``gdl verify``
records that comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import material
from .errors import DomainError, InconsistencyError, PhaseError, UnsupportedRegimeError
from .material import MaterialSpec
from .rod import FieldKind, FieldProfile, grid_with_breakpoints


class BlockPhase(Enum):
    ELASTIC = "elastic"
    NUCLEATION = "nucleation"
    GROWTH = "growth"
    PROPAGATION = "propagation"


@dataclass(frozen=True)
class BlockState:
    """One point of the delamination equilibrium path."""

    phase: BlockPhase
    l_m: float       # damaged-zone size (length)
    c: float         # fully damaged front position, max(0, l_m - l_c)
    d_m: float       # maximum damage, min(1, l_m / l_c)
    alpha: float     # rotation (small)
    delta: float     # end displacement alpha * L
    P: float         # reaction force


def _require_block(spec: MaterialSpec) -> None:
    spec.require_interface()
    if not spec.l_c > spec.L:
        raise UnsupportedRegimeError(
            f"block closed forms need l_c > L (got l_c={spec.l_c}, L={spec.L})")


def phase1_limits(spec: MaterialSpec) -> tuple[float, float, float]:
    """Elastic limit (delta_0, alpha_0, P_0) of the interface."""
    spec.require_interface()
    delta0 = math.sqrt(2.0 * spec.G_0 / spec.k)
    alpha0 = delta0 / spec.L
    p0 = math.sqrt(2.0 * spec.G_0 * spec.k) * spec.L / 3.0
    return delta0, alpha0, p0


def phase2_alpha(spec: MaterialSpec, l_m: float) -> float:
    """Opening angle while the damaged zone nucleates (0 <= l_m <= L)."""
    _require_block(spec)
    L, l_c, g0, gc = spec.L, spec.l_c, spec.G_0, spec.G_c
    if not 0.0 <= l_m <= L * (1.0 + 1e-12):
        raise PhaseError(f"nucleation phase needs 0 <= l_m <= L, got {l_m}")
    l_m = min(l_m, L)
    _, alpha0, _ = phase1_limits(spec)
    a1 = (l_m**3 / 6.0 - 2.0 / 3.0 * (l_c + L) * l_m**2
          + (L + 2.0 * l_c) * L * l_m - 2.0 * L**2 * l_c)
    a2 = (g0 - gc) * (l_m**2 - 2.0 * l_c * l_m) - gc * l_c**2
    return alpha0 * math.sqrt(gc * l_c**2 * L**2 * (2.0 * l_c - l_m) / (a1 * a2))


def phase2_reaction(spec: MaterialSpec, l_m: float, alpha: float) -> float:
    """Reaction force on the nucleation branch (moment balance)."""
    _require_block(spec)
    L, l_c, k = spec.L, spec.l_c, spec.k
    if not 0.0 <= l_m <= L * (1.0 + 1e-12):
        raise PhaseError(f"nucleation phase needs 0 <= l_m <= L, got {l_m}")
    l_m = min(l_m, L)
    bracket = (L**3 * l_c**2 + (l_m - 3.0 * l_c) * l_m**2 * L**2
               - (l_m - 4.0 * l_c) * l_m**3 * L / 2.0
               + (l_m - 5.0 * l_c) * l_m**4 / 10.0)
    return bracket * k * alpha / (3.0 * l_c**2 * L)


def phase3_alpha(spec: MaterialSpec, l_m: float) -> float:
    """Opening angle while the zone grows across the domain (L <= l_m <= l_c)."""
    _require_block(spec)
    L, l_c, g0, gc = spec.L, spec.l_c, spec.G_0, spec.G_c
    if not L * (1.0 - 1e-12) <= l_m <= l_c * (1.0 + 1e-12):
        raise PhaseError(f"growth phase needs L <= l_m <= l_c, got {l_m}")
    l_m = min(max(l_m, L), l_c)
    _, alpha0, _ = phase1_limits(spec)
    b1 = L + 4.0 * l_c - 4.0 * l_m
    b2 = (l_c - l_m) ** 2 * gc - l_m * (l_m - 2.0 * l_c) * g0
    b3 = ((L - l_m + l_c) ** 2 * gc
          - (L - l_m) * (L - l_m + 2.0 * l_c) * g0)
    return alpha0 * math.sqrt(
        6.0 * gc**2 * l_c**4 * (L + 2.0 * l_c - 2.0 * l_m) / (b1 * b2 * b3))


def phase3_reaction(spec: MaterialSpec, l_m: float, alpha: float) -> float:
    """Reaction force on the growth branch."""
    _require_block(spec)
    L, l_c, k = spec.L, spec.l_c, spec.k
    bracket = (10.0 * l_c**2 + (5.0 * L - 20.0 * l_m) * l_c
               + L**2 - 5.0 * L * l_m + 10.0 * l_m**2)
    return k * L**2 / (30.0 * l_c**2) * bracket * alpha


def phase4_alpha(spec: MaterialSpec, c: float) -> float:
    """Opening angle during propagation (fully damaged front at 0 <= c < L).

    alpha = alpha_0/(L-c) * sqrt(6 G_c^2 l_c^2 L^2 /
            (G_0 [G_c (L-c)^2 - G_0 ((c-L)^2 - l_c^2)]))
    """
    _require_block(spec)
    L, l_c, g0, gc = spec.L, spec.l_c, spec.G_0, spec.G_c
    if c < 0.0:
        raise PhaseError(f"propagation phase needs c >= 0, got {c}")
    if c >= L:
        raise PhaseError("active zone left the domain (c >= L): interface collapsed")
    _, alpha0, _ = phase1_limits(spec)
    h = L - c
    bracket = gc * h**2 - g0 * ((c - L) ** 2 - l_c**2)
    return alpha0 / h * math.sqrt(6.0 * gc**2 * l_c**2 * L**2 / (g0 * bracket))


def phase4_alpha_printed(spec: MaterialSpec, c: float) -> float:
    """Exponent-2 alternative of the propagation angle, kept for comparison only.

    Dimensionally inconsistent and discontinuous at the growth/propagation
    junction; never used by the solvers.
    """
    return phase4_alpha(spec, c) / (spec.L - c)


def phase4_reaction(spec: MaterialSpec, c: float, alpha: float) -> float:
    """Reaction force during propagation; P -> 0 as c -> L."""
    _require_block(spec)
    if not 0.0 <= c < spec.L:
        raise PhaseError(f"propagation phase needs 0 <= c < L, got {c}")
    return spec.k * (spec.L - c) ** 5 / (30.0 * spec.l_c**2 * spec.L) * alpha


# ---------------------------------------------------------------------------
# State constructors
# ---------------------------------------------------------------------------

def state_elastic(spec: MaterialSpec, delta: float) -> BlockState:
    """Pre-damage state at end displacement delta <= delta_0."""
    spec.require_interface()
    delta0, _, _ = phase1_limits(spec)
    if not 0.0 <= delta <= delta0 * (1.0 + 1e-12):
        raise PhaseError(f"elastic phase needs 0 <= delta <= {delta0}, got {delta}")
    alpha = delta / spec.L
    p = spec.k * alpha * spec.L**2 / 3.0
    return BlockState(BlockPhase.ELASTIC, l_m=0.0, c=0.0, d_m=0.0,
                      alpha=alpha, delta=delta, P=p)


def state_from_lm(spec: MaterialSpec, l_m: float) -> BlockState:
    """Inelastic state for a damaged-zone size l_m > 0 (phase inferred)."""
    _require_block(spec)
    if l_m <= 0.0:
        raise PhaseError("state_from_lm needs l_m > 0; use state_elastic below onset")
    c = max(0.0, l_m - spec.l_c)
    d_m = min(1.0, l_m / spec.l_c)
    if l_m <= spec.L:
        phase = BlockPhase.NUCLEATION
        alpha = phase2_alpha(spec, l_m)
        p = phase2_reaction(spec, l_m, alpha)
    elif l_m <= spec.l_c:
        phase = BlockPhase.GROWTH
        alpha = phase3_alpha(spec, l_m)
        p = phase3_reaction(spec, l_m, alpha)
    else:
        phase = BlockPhase.PROPAGATION
        alpha = phase4_alpha(spec, c)
        p = phase4_reaction(spec, c, alpha)
    return BlockState(phase, l_m=l_m, c=c, d_m=d_m, alpha=alpha,
                      delta=alpha * spec.L, P=p)


def state_from_c(spec: MaterialSpec, c: float) -> BlockState:
    """Propagation state for a fully damaged front at c (l_m = c + l_c)."""
    _require_block(spec)
    if c < 0.0:
        raise PhaseError(f"state_from_c needs c >= 0, got {c}")
    alpha = phase4_alpha(spec, c)
    p = phase4_reaction(spec, c, alpha)
    return BlockState(BlockPhase.PROPAGATION, l_m=c + spec.l_c, c=c, d_m=1.0,
                      alpha=alpha, delta=alpha * spec.L, P=p)


# ---------------------------------------------------------------------------
# Field profiles along the interface
# ---------------------------------------------------------------------------

def damage_values(spec: MaterialSpec, state: BlockState, x) -> np.ndarray:
    """Interface damage d(x) = clip(d_m - (x - c)/l_c, 0, 1)."""
    x = np.asarray(x, dtype=float)
    return np.clip(state.d_m - (x - state.c) / spec.l_c, 0.0, 1.0)


def _block_grid(spec: MaterialSpec, state: BlockState, n_samples: int) -> np.ndarray:
    h_active = min(state.l_m, spec.L)
    return grid_with_breakpoints(0.0, spec.L, n_samples, (state.c, h_active))


def traction_profile(spec: MaterialSpec, state: BlockState,
                     n_samples: int = 201) -> FieldProfile:
    """Surface traction t(x) = omega(d(x)) k alpha (L - x)."""
    spec.require_interface()
    laws = material.law_set(material.block_bilinear(), spec)
    x = _block_grid(spec, state, n_samples)
    d = damage_values(spec, state, x)
    vals = laws.omega(d) * spec.k * state.alpha * (spec.L - x)
    return FieldProfile(x, vals, FieldKind.TRACTION, state.l_m)


def driving_force_profile(spec: MaterialSpec, state: BlockState,
                          n_samples: int = 201) -> FieldProfile:
    """Damage-conjugate force Y(x) = -omega'(d) k alpha^2 (L - x)^2 / 2."""
    spec.require_interface()
    laws = material.law_set(material.block_bilinear(), spec)
    x = _block_grid(spec, state, n_samples)
    d = damage_values(spec, state, x)
    vals = -laws.omega_prime(d) * 0.5 * spec.k * state.alpha**2 * (spec.L - x) ** 2
    return FieldProfile(x, vals, FieldKind.Y, state.l_m)


def threshold_profile(spec: MaterialSpec, state: BlockState,
                      n_samples: int = 201) -> FieldProfile:
    """Threshold Y_c(d(x)) along the interface."""
    spec.require_interface()
    laws = material.law_set(material.block_bilinear(), spec)
    x = _block_grid(spec, state, n_samples)
    vals = laws.y_c(damage_values(spec, state, x))
    return FieldProfile(x, vals, FieldKind.YC, state.l_m)


def gamma2_profile_block(spec: MaterialSpec, state: BlockState,
                         n_samples: int = 201, residual_tol: float = 1e-8,
                         refine: int = 32) -> FieldProfile:
    """Gradient-bound multiplier along the interface, by cumulative quadrature.

    gamma2(x) = int_{a0}^{x} (Y - Y_c) ds on the active set [a0, a1]
    (a0 = c, a1 = min(l_m, L)); zero outside. The end value must vanish: a
    residual above ``residual_tol * max(gamma2)`` means the state's alpha does
    not satisfy the averaged limit condition and raises InconsistencyError.
    """
    spec.require_interface()
    x = _block_grid(spec, state, n_samples)
    values = np.zeros_like(x)
    if state.phase is BlockPhase.ELASTIC or state.l_m <= 0.0:
        return FieldProfile(x, values, FieldKind.GAMMA2, state.l_m)

    laws = material.law_set(material.block_bilinear(), spec)
    a0, a1 = state.c, min(state.l_m, spec.L)

    def integrand(xs):
        d = damage_values(spec, state, xs)
        y = -laws.omega_prime(d) * 0.5 * spec.k * state.alpha**2 * (spec.L - xs) ** 2
        return y - laws.y_c(d)

    mask = (x >= a0 - 1e-15) & (x <= a1 + 1e-15)
    xa = x[mask]
    if xa.size >= 2:
        # composite Simpson on each requested panel, subdivided `refine` times
        fine = np.linspace(xa[:-1], xa[1:], 2 * refine + 1, axis=1)
        fv = integrand(fine)
        h = np.diff(fine[:, :2], axis=1)[:, 0]
        panel = h / 3.0 * (fv[:, 0:-2:2].sum(axis=1) + 4.0 * fv[:, 1::2].sum(axis=1)
                           + fv[:, 2::2].sum(axis=1))
        gam = np.concatenate([[0.0], np.cumsum(panel)])
        peak = float(np.max(np.abs(gam))) or 1.0
        if abs(gam[-1]) > residual_tol * peak:
            raise InconsistencyError(
                f"gamma2 end residual {gam[-1]:.3e} exceeds {residual_tol:.1e} * "
                f"max |gamma2| = {residual_tol * peak:.3e}; alpha inconsistent "
                f"with the averaged limit condition")
        values[mask] = gam
    return FieldProfile(x, values, FieldKind.GAMMA2, state.l_m)


def profile_bundle(spec: MaterialSpec, state: BlockState,
                   n_samples: int = 201) -> dict[str, FieldProfile]:
    """All five fields on one grid at a given path station."""
    x = _block_grid(spec, state, n_samples)
    damage = FieldProfile(x, damage_values(spec, state, x), FieldKind.DAMAGE,
                          state.l_m)
    return {
        "damage": damage,
        "traction": traction_profile(spec, state, n_samples),
        "Y": driving_force_profile(spec, state, n_samples),
        "Yc": threshold_profile(spec, state, n_samples),
        "gamma2": gamma2_profile_block(spec, state, n_samples),
    }


# ---------------------------------------------------------------------------
# Equilibrium path
# ---------------------------------------------------------------------------

def propagation_cutoff(spec: MaterialSpec, p_ratio: float = 1e-3) -> float:
    """Front position c at which P drops to p_ratio * P_0 (bisection)."""
    _require_block(spec)
    _, _, p0 = phase1_limits(spec)
    target = p_ratio * p0

    def f(c):
        return phase4_reaction(spec, c, phase4_alpha(spec, c)) - target

    lo, hi = 0.0, spec.L * (1.0 - 1e-9)
    if f(lo) <= 0.0:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi  # side where the reaction is at or below the cutoff


def equilibrium_curve_block(spec: MaterialSpec, n_points_per_phase: int = 50,
                            p_cutoff_ratio: float = 1e-3) -> list[BlockState]:
    """Four concatenated branches of the delamination path.

    Starts at the elastic-limit state (the elastic ramp below it is a
    straight line from the origin); branch endpoints are repeated so junction
    rows appear once per adjoining branch with matching (delta, P). The
    propagation branch stops where P has dropped to ``p_cutoff_ratio * P_0``.
    """
    _require_block(spec)
    if n_points_per_phase < 2:
        raise DomainError("need at least two points per phase")
    n = n_points_per_phase
    delta0, _, _ = phase1_limits(spec)
    states = [state_elastic(spec, delta0)]
    for l_m in np.linspace(0.0, spec.L, n):
        l_m = float(l_m)
        if l_m == 0.0:
            # closed forms are regular at l_m = 0 and give the elastic limit
            alpha = phase2_alpha(spec, 0.0)
            p = phase2_reaction(spec, 0.0, alpha)
            states.append(BlockState(BlockPhase.NUCLEATION, 0.0, 0.0, 0.0,
                                     alpha, alpha * spec.L, p))
        else:
            states.append(state_from_lm(spec, l_m))
    for l_m in np.linspace(spec.L, spec.l_c, n):
        st = state_from_lm(spec, float(l_m))
        states.append(BlockState(BlockPhase.GROWTH, st.l_m, st.c, st.d_m,
                                 st.alpha, st.delta, st.P))
    # small margin so the final P stays below the cutoff even after the
    # 12-significant-digit rounding of the CSV writer
    c_end = propagation_cutoff(spec, p_cutoff_ratio * (1.0 - 1e-9))
    for c in np.linspace(0.0, c_end, n):
        states.append(state_from_c(spec, float(c)))
    return states
