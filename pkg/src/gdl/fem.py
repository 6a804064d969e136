"""1D finite-element solver for the tensile bar by alternating minimization.

Nodal damage, linear displacement elements. Each load step minimizes

    sum_e  1/2 omega(d) E eps_e^2 h_e   (trapezoidal rule in d)
  + sum_i  w_i s_i [H(d_i) - H(d_prev_i)]   (lumped dissipation, H' = Y_c)

over the polyhedron {d_prev <= d <= 1, |d_(i+1) - d_i| <= h_e / l_c} by
alternating a tridiagonal equilibrium solve at frozen damage with a projected
gradient descent (diagonally scaled, with backtracking) at frozen
displacement. Euclidean-style projections onto the polyhedron use Dykstra's
algorithm over the box and the two parity classes of edge constraints.

Snap-back branches (constant-threshold variants) can still be run under a
monotone end-displacement schedule; the computed path then jumps across the
snap-back instead of following it.

A converged state carries per-element gradient-bound multipliers (discrete
gamma_2, recovered by integrating the nodal stationarity residual along each
active band) and nodal multipliers for the d <= 1 box bound (discrete
gamma_1, identically zero while the degradation drive vanishes at d = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import solve_banded
from scipy.optimize import isotonic_regression

from . import material, rod
from .errors import DomainError, SolverError
from .material import ConstitutiveVariant, MaterialSpec


@dataclass(frozen=True)
class Mesh1D:
    """Nodes on a line; elements connect consecutive nodes."""

    node_coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.node_coords, dtype=float)
        object.__setattr__(self, "node_coords", coords)
        if coords.ndim != 1 or coords.size < 2:
            raise DomainError("mesh needs at least two nodes")
        if not np.all(np.diff(coords) > 0.0):
            raise DomainError("node coordinates must be strictly increasing")

    @property
    def n_nodes(self) -> int:
        return self.node_coords.size

    @property
    def n_elements(self) -> int:
        return self.node_coords.size - 1

    @property
    def element_sizes(self) -> np.ndarray:
        return np.diff(self.node_coords)

    @classmethod
    def uniform(cls, n_elements: int, x_min: float, x_max: float) -> "Mesh1D":
        if n_elements < 1 or not x_max > x_min:
            raise DomainError("uniform mesh needs n_elements >= 1 and x_max > x_min")
        return cls(np.linspace(x_min, x_max, n_elements + 1))


@dataclass
class FemConfig:
    residual_stiffness: float = 1e-8   # floor on omega in the u-solve
    staggered_tol: float = 1e-8        # relative state change per step
    staggered_max_iter: int = 600      # then the load increment is bisected
    bisection_levels: int = 6
    pgd_tol: float = 1e-9              # sup-norm of the projected gradient map
    pgd_max_iter: int = 4000
    projection_tol: float = 1e-11
    projection_max_sweeps: int = 2000
    relax_max: float = 25.0            # cap on the Aitken relaxation factor
    relax_step_cap: float = 0.05       # sup-norm cap on the extrapolated move
    seed_factor: float = 0.999         # threshold scale at the nucleation node


@dataclass
class FemState:
    u: np.ndarray
    d: np.ndarray
    d_prev: np.ndarray
    lagrange_grad: np.ndarray   # per element, discrete gamma_2
    lagrange_box: np.ndarray    # per node, discrete gamma_1 (d <= 1)
    load_factor: float


@dataclass
class StepRecord:
    u_star: float
    sigma: float
    d_max: float
    band_halfwidth: float
    dissipation: float
    stored_energy: float
    staggered_iters: int
    kkt_residual: float


class RodFem:
    """Alternating-minimization solver for one bar analysis."""

    def __init__(self, mesh: Mesh1D, spec: MaterialSpec,
                 variant: Optional[ConstitutiveVariant] = None,
                 config: Optional[FemConfig] = None,
                 seed_node: Optional[int] = None):
        self.mesh = mesh
        self.spec = spec
        self.variant = variant or material.case_i()
        self.config = config or FemConfig()
        self.laws = material.law_set(self.variant, spec)

        self.h = mesh.element_sizes
        self.edge_bound = self.h / spec.l_c
        self._slope_shift = np.concatenate(([0.0], np.cumsum(self.edge_bound)))
        # lumped nodal weights
        w = np.zeros(mesh.n_nodes)
        w[:-1] += 0.5 * self.h
        w[1:] += 0.5 * self.h
        self.w_node = w
        scale = np.ones(mesh.n_nodes)
        if seed_node is None:
            mid = 0.5 * (mesh.node_coords[0] + mesh.node_coords[-1])
            seed_node = int(np.argmin(np.abs(mesh.node_coords - mid)))
        self.seed_node = seed_node
        scale[seed_node] = self.config.seed_factor
        self.w_diss = w * scale

    # ------------------------------------------------------------------
    # Equilibrium solve at frozen damage
    # ------------------------------------------------------------------

    def _g_factor(self, d: np.ndarray) -> np.ndarray:
        """Effective element degradation from the exact element flexibility.

        With damage linear inside the element and uniform element stress, the
        exact compliance is h * mean(1/omega) along the element, giving the
        factor (1-d_i)(1-d_j) for quadratic degradation and the logarithmic
        mean of (1-d) for linear. Unlike a nodal average of omega, this factor
        vanishes as soon as one node fails, so the discrete softening branch
        does not stiffen artificially when (1 - d_m) drops below the mesh
        resolution.
        """
        p = 1.0 - d[:-1]
        q = 1.0 - d[1:]
        if self.variant.degradation is material.Degradation.QUADRATIC:
            return p * q
        diff = p - q
        near = np.abs(diff) < 1e-9 * np.maximum(p, q)
        ratio = np.log(np.where(near, 1.0, p) / np.where(near, 1.0, q))
        return np.where(near, 0.5 * (p + q),
                        diff / np.where(ratio == 0.0, 1.0, ratio))

    def _g_factor_gradients(self, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(d g / d d_i, d g / d d_j) per element, analytic."""
        p = 1.0 - d[:-1]
        q = 1.0 - d[1:]
        if self.variant.degradation is material.Degradation.QUADRATIC:
            return -q, -p
        # logarithmic mean L(p, q): dL/dp = (L/p - L**2/p**2 ... ) handled via
        # the stable form dL/dp = (1 - L/p) * L / (p - q) with symmetric limit
        diff = p - q
        near = np.abs(diff) < 1e-7 * np.maximum(p, q)
        safe = np.where(near, 1.0, diff)
        lm = self._g_factor(d)
        dp = np.where(near, 0.5, (1.0 - lm / p) * lm / safe)
        dq = np.where(near, 0.5, (lm / q - 1.0) * lm / safe)
        return -dp, -dq

    def element_omega(self, d: np.ndarray) -> np.ndarray:
        return np.maximum(self._g_factor(d), self.config.residual_stiffness)

    def solve_displacement(self, d: np.ndarray, u_star: float) -> np.ndarray:
        """Nodal displacements with u(+-L) = +-u_star at frozen damage."""
        ke = self.element_omega(d) * self.spec.E / self.h
        n_in = self.mesh.n_nodes - 2
        if n_in == 0:
            return np.array([-u_star, u_star])
        ab = np.zeros((3, n_in))
        ab[1] = ke[:-1] + ke[1:]
        ab[0, 1:] = -ke[1:-1]
        ab[2, :-1] = -ke[1:-1]
        rhs = np.zeros(n_in)
        rhs[0] += ke[0] * (-u_star)
        rhs[-1] += ke[-1] * u_star
        inner = solve_banded((1, 1), ab, rhs, check_finite=False)
        return np.concatenate(([-u_star], inner, [u_star]))

    def strains(self, u: np.ndarray) -> np.ndarray:
        return np.diff(u) / self.h

    def element_stress(self, d: np.ndarray, u: np.ndarray) -> np.ndarray:
        return self.element_omega(d) * self.spec.E * self.strains(u)

    # ------------------------------------------------------------------
    # Damage solve at frozen displacement
    # ------------------------------------------------------------------

    def _element_coef(self, eps: np.ndarray) -> np.ndarray:
        # f_elastic(d) = sum_e coef_e * g_e(d)
        return 0.5 * self.spec.E * eps * eps * self.h

    def _feasibility_violation(self, x: np.ndarray, lo: np.ndarray) -> float:
        c = self.edge_bound
        return max(
            float(np.max(np.abs(np.diff(x)) - c, initial=0.0)),
            float(np.max(lo - x, initial=0.0)),
            float(np.max(x - 1.0, initial=0.0)),
        )

    def _project(self, z: np.ndarray, lo: np.ndarray,
                 inv_metric: Optional[np.ndarray] = None) -> np.ndarray:
        """Dykstra projection onto {lo <= d <= 1, |diff(d)| <= edge_bound}.

        The slope band is the intersection of two monotone cones after a
        cumulative shift: d - shift antitonic (upper slopes) and d + shift
        isotonic (lower slopes), each projected exactly by weighted PAVA, so
        information crosses the whole chain every sweep and Dykstra needs
        only a handful of sweeps. ``inv_metric`` selects the (diagonal) norm;
        None means Euclidean.
        """
        cfg = self.config
        if self._feasibility_violation(z, lo) <= cfg.projection_tol:
            return z.copy()
        n = z.size
        w = np.ones(n) if inv_metric is None else 1.0 / inv_metric
        shift = self._slope_shift
        x = z.copy()
        c0 = np.zeros(n)
        c1 = np.zeros(n)
        c2 = np.zeros(n)
        for _ in range(cfg.projection_max_sweeps):
            x_prev = x
            settled = 0.0
            y = x + c0
            xn = np.clip(y, lo, 1.0)
            settled += float(np.max(np.abs(y - xn - c0)))
            c0 = y - xn
            y = xn + c1
            xn = shift + isotonic_regression(y - shift, weights=w,
                                             increasing=False).x
            settled += float(np.max(np.abs(y - xn - c1)))
            c1 = y - xn
            y = xn + c2
            xn = isotonic_regression(y + shift, weights=w, increasing=True).x - shift
            settled += float(np.max(np.abs(y - xn - c2)))
            c2 = y - xn
            x = xn
            moved = float(np.max(np.abs(x - x_prev)))
            # Dykstra converges when the correction vectors settle, not merely
            # when the iterate moves little per sweep
            if (moved <= cfg.projection_tol and settled <= cfg.projection_tol
                    and self._feasibility_violation(x, lo) <= cfg.projection_tol):
                break
        return x

    def _objective(self, d, coef):
        g_eff = np.maximum(self._g_factor(d), self.config.residual_stiffness)
        return float(coef @ g_eff + self.w_diss @ self.laws.antiderivative(d))

    def _newton_candidate(self, x, g, coef, lo):
        """Projected step from the exact tridiagonal Hessian (quadratic case).

        The elastic coupling coef_e * (1-d_i)(1-d_j) has zero diagonal
        curvature and unit off-diagonal, so the diagonally scaled step can be
        arbitrarily bad where (1-d) spans orders of magnitude across one
        element; a Levenberg-shifted tridiagonal solve captures the true
        coupling. Candidates are vetted by the line-search test; failures are
        harmless.
        """
        if self.variant.degradation is not material.Degradation.QUADRATIC:
            return None
        n = x.size
        live = self._g_factor(x) > self.config.residual_stiffness
        off = np.where(live, coef, 0.0)
        diag = self.w_diss * self.laws.y_c_prime(x)
        scale = float(np.max(np.abs(diag)) + np.max(off, initial=0.0)) or 1.0
        for mu in (1e-8 * scale, 1e-4 * scale, 1e-1 * scale):
            ab = np.zeros((3, n))
            ab[1] = diag + mu
            ab[0, 1:] = off
            ab[2, :-1] = off
            try:
                delta = solve_banded((1, 1), ab, -g, check_finite=False)
            except np.linalg.LinAlgError:
                continue
            if not np.all(np.isfinite(delta)):
                continue
            step_inf = float(np.max(np.abs(delta)))
            if step_inf == 0.0 or step_inf > 1.0:
                continue
            return self._project(x + delta, lo)
        return None

    def _gradient(self, d, coef):
        dgi, dgj = self._g_factor_gradients(d)
        live = self._g_factor(d) > self.config.residual_stiffness
        out = self.w_diss * self.laws.y_c(d)
        out[:-1] += np.where(live, coef * dgi, 0.0)
        out[1:] += np.where(live, coef * dgj, 0.0)
        return out

    def solve_damage_increment(self, eps: np.ndarray, d_prev: np.ndarray,
                               d_start: Optional[np.ndarray] = None) -> tuple[np.ndarray, dict]:
        """Constrained minimization of the incremental objective at fixed strain.

        Diagonally scaled projected gradient descent with Armijo backtracking;
        returns the minimizer and an info dict with the projected-gradient
        residual and iteration count.
        """
        cfg = self.config
        coef = self._element_coef(eps)
        row = np.zeros(self.mesh.n_nodes)
        row[:-1] += coef
        row[1:] += coef
        lo = d_prev

        x = d_prev.copy() if d_start is None else np.clip(d_start, lo, 1.0)
        x = self._project(x, lo)

        fx = self._objective(x, coef)
        fhist = [fx]  # nonmonotone line-search memory
        res = math.inf
        best_res = math.inf
        best_x = x
        xhist: list[np.ndarray] = []
        iters = 0
        for iters in range(1, cfg.pgd_max_iter + 1):
            g = self._gradient(x, coef)
            # diagonal curvature estimate (Gershgorin row scale of the elastic
            # coupling plus the convex part of the threshold), refreshed here;
            # anisotropy capped so the metric projection stays well conditioned
            curv = row + self.w_diss * np.maximum(self.laws.y_c_prime(x), 0.0)
            cmax = float(np.max(curv, initial=0.0))
            floor = max(1e-10, 1e-2 * cmax)
            inv_m = 1.0 / np.maximum(curv, floor)
            # double precision bounds the resolvable step along the softest
            # scaled direction: below this, f cannot register any decrease
            noise_floor = 8.0 * math.sqrt(2.2e-16 * max(abs(fx), 1.0) / floor)
            tol_eff = max(cfg.pgd_tol, noise_floor)
            trial = self._project(x - inv_m * g, lo, inv_m)
            step = trial - x
            res = float(np.max(np.abs(step)))
            if res <= cfg.pgd_tol:
                x = trial
                fx = self._objective(x, coef)
                break
            if res < best_res:
                best_res, best_x = res, x
            xhist.append(x)
            if len(xhist) > 21:
                xhist.pop(0)
            if len(xhist) == 21:
                travelled = float(np.max(np.abs(x - xhist[0])))
                if travelled <= 3.0 * best_res:
                    # bouncing inside a ball a few steps wide instead of
                    # marching: tied-band cycles can pin the residual just
                    # above the goal; accept the best iterate if close enough
                    if best_res <= 10.0 * tol_eff:
                        x = best_x
                        res = best_res
                        fx = self._objective(x, coef)
                        break
                    raise SolverError(
                        f"damage solve cycling at projected-gradient "
                        f"residual {best_res:.3e} after {iters} iterations")
            gs = float(g @ step)
            if abs(gs) <= 4e-16 * max(abs(fx), 1e-300):
                # the best projected step cannot decrease f within float
                # resolution: numerically stationary (flat valley at onset)
                break
            # nonmonotone sufficient decrease (Grippo-style reference): strict
            # monotone Armijo rejects one-ulp rises and crawls along ties.
            # Backtracking moves along the feasible segment [x, trial] (convex
            # combinations stay in the polyhedron), with one quadratic
            # interpolation for the step length; no extra projections.
            fref = max(fhist)
            ft = self._objective(trial, coef)
            if ft > fref + 1e-4 * gs:
                denom = 2.0 * (ft - fx - gs)
                t = min(max(-gs / denom if denom > 0.0 else 0.5, 0.05), 0.95)
                cand = x + t * step
                fc = self._objective(cand, coef)
                while fc > fref + 1e-4 * t * gs and t > 1e-10:
                    t *= 0.5
                    cand = x + t * step
                    fc = self._objective(cand, coef)
                trial, ft = cand, fc
                # diagonal scaling can stall where the elastic coupling is
                # dominated by its off-diagonal; offer the true tridiagonal
                # Newton step as an alternative candidate
                newton = self._newton_candidate(x, g, coef, lo)
                if newton is not None:
                    fn = self._objective(newton, coef)
                    if fn < ft:
                        trial, ft = newton, fn
            x, fx = trial, ft
            fhist.append(fx)
            if len(fhist) > 8:
                fhist.pop(0)
        else:
            raise SolverError(
                f"damage solve stalled: projected-gradient residual {res:.3e} "
                f"after {cfg.pgd_max_iter} iterations")
        return x, {"iterations": iters, "pg_residual": res, "objective": fx}

    # ------------------------------------------------------------------
    # Multiplier recovery (active-set pass)
    # ------------------------------------------------------------------

    def recover_multipliers(self, eps: np.ndarray, d: np.ndarray,
                            d_prev: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
        """Discrete gamma_2 per element, gamma_1 per node, and the KKT residual.

        The nodal stationarity g_i + S_(e-1) - S_e = 0 is integrated edge by
        edge from each end of every active band towards its damage peak
        (where the two sweeps meet and the mismatch is reported); S vanishes
        on inactive edges, giving gamma_2 = 0 there and at band ends.
        """
        g = self._gradient(d, self._element_coef(eps))
        diff = np.diff(d)
        c = self.edge_bound
        active = np.abs(diff) >= c * (1.0 - 1e-7)
        free = (d > d_prev + 1e-12) & (d < 1.0 - 1e-12)

        s_edge = np.zeros(self.mesh.n_elements)
        kkt = 0.0
        e = 0
        n_e = self.mesh.n_elements
        while e < n_e:
            if not active[e]:
                e += 1
                continue
            e0 = e
            while e < n_e and active[e]:
                e += 1
            e1 = e - 1
            band_nodes = np.arange(e0, e1 + 2)
            ip = int(band_nodes[np.argmax(d[band_nodes])])
            s = 0.0
            for edge in range(e0, min(ip, e1 + 1)):
                if free[edge]:
                    s += g[edge]
                s_edge[edge] = s
            s = 0.0
            for edge in range(e1, max(ip - 1, e0 - 1), -1):
                if free[edge + 1]:
                    s -= g[edge + 1]
                s_edge[edge] = s
            left = s_edge[ip - 1] if ip - 1 >= e0 else 0.0
            right = s_edge[ip] if ip <= e1 else 0.0
            kkt = max(kkt, abs(g[ip] + left - right))

        gamma2 = s_edge * np.sign(diff)
        gamma2[~active] = 0.0

        gamma1 = np.zeros(self.mesh.n_nodes)
        at_top = d >= 1.0 - 1e-12
        if np.any(at_top):
            s_l = np.concatenate(([0.0], s_edge))
            s_r = np.concatenate((s_edge, [0.0]))
            gamma1[at_top] = -(g + s_l - s_r)[at_top]
        return gamma2, gamma1, kkt

    # ------------------------------------------------------------------
    # Staggered iteration and load path
    # ------------------------------------------------------------------

    def _staggered(self, u_star: float, d_prev: np.ndarray,
                   d_init: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
        """Alternate u- and d-solves to a fixed point, with Aitken relaxation.

        Plain alternation contracts very slowly where the softening branch is
        shallow (rate close to 1 just past onset); dynamic relaxation of the
        staggered residual restores fast convergence. Convergence is judged
        on the unrelaxed residual.
        """
        cfg = self.config
        d = np.clip(d_init, d_prev, 1.0)
        u_old = None
        r_prev = None
        omega = 1.0
        boost = 1.0
        res_prev = math.inf
        for it in range(1, cfg.staggered_max_iter + 1):
            u = self.solve_displacement(d, u_star)
            d_new, _ = self.solve_damage_increment(self.strains(u), d_prev, d_start=d)
            r = d_new - d
            res_d = float(np.max(np.abs(r))) / max(1.0, float(np.max(np.abs(d_new))))
            res_u = 0.0 if u_old is None else (
                float(np.max(np.abs(u - u_old))) / max(float(np.max(np.abs(u))), 1e-30))
            u_old = u
            if res_d < cfg.staggered_tol and res_u < cfg.staggered_tol:
                # re-equilibrate at the final damage so stresses are uniform
                u = self.solve_displacement(d_new, u_star)
                return u, d_new, it

            if r_prev is None or res_d > 10.0 * res_prev:
                omega = 1.0
                boost = 1.0
                d = d_new
            else:
                dr = r - r_prev
                denom = float(dr @ dr)
                omega = -omega * float(r_prev @ dr) / denom if denom > 0.0 else 1.0
                if omega < 1.0:
                    # pre-asymptotic march: the residual grows or holds while
                    # the band develops; relaxation would damp it, so ramp a
                    # geometric boost instead while the direction is steady
                    r_norm = math.sqrt(float(r @ r))
                    rp_norm = math.sqrt(float(r_prev @ r_prev))
                    cosine = (float(r @ r_prev) / (r_norm * rp_norm)
                              if r_norm > 0.0 and rp_norm > 0.0 else 0.0)
                    boost = min(boost * 1.7, 24.0) if cosine > 0.99 else 1.0
                    omega = boost
                else:
                    boost = 1.0
                # keep the extrapolated move bounded either way
                omega = min(omega, cfg.relax_max)
                r_inf = float(np.max(np.abs(r)))
                if omega * r_inf > cfg.relax_step_cap:
                    omega = max(1.0, cfg.relax_step_cap / max(r_inf, 1e-300))
                d = d_new if omega == 1.0 else self._project(
                    np.clip(d + omega * r, d_prev, 1.0), d_prev)
            r_prev = r
            res_prev = res_d
        raise SolverError(f"staggered loop did not reach {cfg.staggered_tol:.1e} "
                          f"in {cfg.staggered_max_iter} iterations at u*={u_star}")

    def _advance(self, state: FemState, u_target: float, level: int = 0) -> int:
        try:
            u, d, iters = self._staggered(u_target, state.d_prev, state.d)
        except SolverError:
            if level >= self.config.bisection_levels:
                raise
            mid = 0.5 * (state.load_factor + u_target)
            n1 = self._advance(state, mid, level + 1)
            # the half-step has committed; finish the remaining half
            n2 = self._advance(state, u_target, level + 1)
            return n1 + n2
        state.u = u
        state.d = d
        state.d_prev = d.copy()
        state.load_factor = u_target
        return iters

    def initial_state(self) -> FemState:
        n, ne = self.mesh.n_nodes, self.mesh.n_elements
        return FemState(u=np.zeros(n), d=np.zeros(n), d_prev=np.zeros(n),
                        lagrange_grad=np.zeros(ne), lagrange_box=np.zeros(n),
                        load_factor=0.0)

    def dissipation(self, d: np.ndarray) -> float:
        return float(self.w_diss @ self.laws.antiderivative(d))

    def stored_energy(self, d: np.ndarray, u: np.ndarray) -> float:
        eps = self.strains(u)
        return float(np.sum(0.5 * self.element_omega(d) * self.spec.E
                            * eps * eps * self.h))

    def band_halfwidth(self, d: np.ndarray, tol: float = 1e-6) -> float:
        idx = np.flatnonzero(d > tol)
        if idx.size == 0:
            return 0.0
        x = self.mesh.node_coords
        return 0.5 * (x[idx[-1]] - x[idx[0]])

    def run_load_path(self, schedule: Sequence[float]) -> tuple[list[StepRecord], FemState]:
        """Drive the bar through a monotone end-displacement schedule.

        Returns one record per scheduled step (staggered fixed point, sigma,
        damage measures, cumulative dissipation) and the final state with
        recovered multiplier estimates.
        """
        sched = [float(v) for v in schedule]
        if any(b < a for a, b in zip(sched[:-1], sched[1:])) or (sched and sched[0] < 0.0):
            raise DomainError("load schedule must be monotone increasing and >= 0")
        state = self.initial_state()
        records: list[StepRecord] = []
        for u_target in sched:
            iters = self._advance(state, u_target)
            sigma_e = self.element_stress(state.d, state.u)
            g2, g1, kkt = self.recover_multipliers(self.strains(state.u),
                                                   state.d, state.d_prev)
            state.lagrange_grad = g2
            state.lagrange_box = g1
            records.append(StepRecord(
                u_star=u_target,
                sigma=float(np.mean(sigma_e)),
                d_max=float(np.max(state.d)),
                band_halfwidth=self.band_halfwidth(state.d),
                dissipation=self.dissipation(state.d),
                stored_energy=self.stored_energy(state.d, state.u),
                staggered_iters=iters,
                kkt_residual=kkt,
            ))
        return records, state


def ramp_schedule(u_el: float, u_end: float, n_elastic: int = 4,
                  du: float = 0.005) -> list[float]:
    """Coarse elastic ramp to just below u_el, then uniform steps to u_end."""
    sched = list(np.linspace(0.0, 0.995 * u_el, n_elastic, endpoint=True))
    u = 0.995 * u_el
    while u < u_end - 1e-12:
        u = min(u + du, u_end)
        sched.append(u)
    return sched
