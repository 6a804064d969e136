"""Constitutive functions, admissibility bounds, snap-back classification."""

import math

import numpy as np
import pytest

from gdl import material, oracle
from gdl.errors import DomainError
from gdl.material import MaterialSpec


SPEC = MaterialSpec.from_lambda_beta(lam=0.4, beta=0.5)
BLOCK = MaterialSpec.block_benchmark(l_c=6.0)


class TestDegradation:
    def test_quadratic_identity_at_zero(self):
        assert material.omega(material.case_i(), 0.0) == 1.0

    def test_quadratic_half(self):
        assert material.omega(material.case_i(), 0.5) == 0.25

    def test_linear_half(self):
        assert material.omega(material.case_iii(), 0.5) == 0.5

    def test_endpoints_and_monotonicity(self):
        for variant in (material.case_i(), material.case_iii()):
            assert material.omega(variant, 0.0) == 1.0
            assert material.omega(variant, 1.0) == 0.0
            d = np.linspace(0.01, 0.99, 99)
            vals = [material.omega(variant, float(x)) for x in d]
            assert all(b < a for a, b in zip(vals[:-1], vals[1:]))
            assert all(material.omega_prime(variant, float(x)) < 0.0 for x in d)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            material.omega(material.case_i(), 1.5)
        with pytest.raises(DomainError):
            material.omega_prime(material.case_i(), -0.2)

    def test_derivatives_match_finite_differences(self):
        h = 1e-6
        for variant in (material.case_i(), material.case_iii()):
            for d in (0.2, 0.5, 0.8):
                fd = (material.omega(variant, d + h)
                      - material.omega(variant, d - h)) / (2 * h)
                assert material.omega_prime(variant, d) == pytest.approx(fd, abs=1e-9)
                fd2 = (material.omega_prime(variant, d + h)
                       - material.omega_prime(variant, d - h)) / (2 * h)
                assert material.omega_second(variant, d) == pytest.approx(fd2, abs=1e-6)


class TestThreshold:
    def test_cohesive_limit_at_zero(self):
        assert material.y_c(material.case_i(), SPEC, 0.0) == pytest.approx(
            SPEC.sigma_c**2 / SPEC.E, rel=1e-14)

    def test_cohesive_midpoint_against_quadrature_derivative(self):
        # closed form at d = 0.5 equals 125/36, and matches dH/dd computed by
        # central differences of the quadrature antiderivative
        val = material.y_c(material.case_i(), SPEC, 0.5)
        assert val == pytest.approx(125.0 / 36.0, rel=1e-13)
        h = 1e-5
        hi = oracle.integrate(lambda s: material.y_c(material.case_i(), SPEC, s),
                              0.0, 0.5 + h)
        lo = oracle.integrate(lambda s: material.y_c(material.case_i(), SPEC, s),
                              0.0, 0.5 - h)
        assert val == pytest.approx((hi - lo) / (2 * h), rel=1e-8)

    def test_cohesive_limit_at_one(self):
        lam = SPEC.lam
        expected = (1.0 - 2.0 * lam) / lam**3
        assert material.y_c(material.case_i(), SPEC, 1.0) == pytest.approx(
            expected, rel=1e-13)
        assert expected == pytest.approx(3.125, rel=1e-12)

    def test_cohesive_positive_for_admissible_lambda(self):
        for lam in (0.1, 0.3, 0.49):
            spec = MaterialSpec.from_lambda_beta(lam=lam, beta=0.6)
            for d in np.linspace(0.0, 1.0, 101):
                assert material.y_c(material.case_i(), spec, float(d)) > 0.0

    def test_block_bilinear_at_zero(self):
        # omega = 1, -omega' = 2 gives 2 G_0 G_c^2 / G_c^2 = 2 G_0
        val = material.y_c(material.block_bilinear(), BLOCK, 0.0)
        assert val == pytest.approx(2.0 * BLOCK.G_0, rel=1e-14)
        assert val == pytest.approx(0.05, rel=1e-12)

    def test_constant_laws(self):
        assert material.y_c(material.case_ii(), SPEC, 0.7) == pytest.approx(1.0)
        assert material.y_c(material.case_iii(), SPEC, 0.7) == pytest.approx(0.5)
        assert material.y_c_prime(material.case_ii(), SPEC, 0.7) == 0.0

    def test_y_c_prime_matches_finite_differences(self):
        h = 1e-6
        for variant, spec in ((material.case_i(), SPEC),
                              (material.block_bilinear(), BLOCK)):
            for d in (0.15, 0.5, 0.85):
                fd = (material.y_c(variant, spec, d + h)
                      - material.y_c(variant, spec, d - h)) / (2 * h)
                assert material.y_c_prime(variant, spec, d) == pytest.approx(
                    fd, rel=1e-7)

    def test_antiderivative_consistency(self):
        # d/dd of the quadrature integral of Y_c equals y_c to 1e-8 relative
        h = 1e-5
        for variant, spec in ((material.case_i(), SPEC),
                              (material.case_ii(), SPEC),
                              (material.block_bilinear(), BLOCK)):
            for d in (0.25, 0.5, 0.75):
                hi = oracle.integrate(lambda s: material.y_c(variant, spec, s),
                                      0.0, d + h)
                lo = oracle.integrate(lambda s: material.y_c(variant, spec, s),
                                      0.0, d - h)
                grad = (hi - lo) / (2 * h)
                assert grad == pytest.approx(material.y_c(variant, spec, d),
                                             rel=1e-8)

    def test_closed_form_antiderivative_against_quadrature(self):
        for variant, spec in ((material.case_i(), SPEC),
                              (material.case_iii(), SPEC),
                              (material.block_bilinear(), BLOCK)):
            for d in (0.2, 0.6, 0.95):
                quad = oracle.integrate(
                    lambda s: material.y_c(variant, spec, s), 0.0, d)
                assert material.yc_antiderivative(variant, spec, d) == pytest.approx(
                    quad, rel=1e-10)

    def test_work_of_separation(self):
        # -int_1^0 Yc(omega) domega = G_c to 1e-10 relative
        g0, gc = BLOCK.G_0, BLOCK.G_c
        val = oracle.integrate(
            lambda w: g0 * gc**2 / (g0 + (gc - g0) * w) ** 2, 0.0, 1.0)
        assert val == pytest.approx(gc, rel=1e-10)
        assert material.yc_antiderivative(
            material.block_bilinear(), BLOCK, 1.0) == pytest.approx(gc, rel=1e-12)


class TestAdmissibility:
    def test_stability_bound_limit(self):
        assert material.stability_bound_lambda(1.0) == pytest.approx(0.5, rel=1e-12)

    def test_stability_bound_unbounded_at_zero(self):
        assert material.stability_bound_lambda(0.0) == math.inf
        assert material.softening_bound_lambda(0.0) == math.inf

    def test_stability_bound_midpoint_flips_predicate(self):
        bound = material.stability_bound_lambda(0.5)
        assert bound == pytest.approx(0.7432530855900659, rel=1e-10)
        assert material.stability_holds(bound - 1e-6, 0.5)
        assert not material.stability_holds(bound + 1e-6, 0.5)

    def test_softening_bound_values(self):
        assert material.softening_bound_lambda(1.0) == pytest.approx(0.5)
        assert material.softening_bound_lambda(0.5) == pytest.approx(1.25)

    def test_admissible_region_at_049(self):
        ds = np.linspace(1e-3, 1.0 - 1e-3, 1000)
        for d in ds:
            assert material.stability_holds(0.49, float(d))
            assert material.softening_holds(0.49, float(d))

    def test_boundary_half_is_admissible(self):
        # any lambda < 0.5 fulfills both conditions; the closure holds at 0.5
        for d in np.linspace(1e-3, 1.0, 500):
            assert material.stability_bound_lambda(float(d)) >= 0.5 - 1e-12
            assert material.softening_bound_lambda(float(d)) >= 0.5 - 1e-12

    def test_inadmissible_051_fails_near_one(self):
        ds = np.linspace(1e-3, 1.0 - 1e-3, 1000)
        failures = [float(d) for d in ds
                    if not (material.stability_holds(0.51, float(d))
                            and material.softening_holds(0.51, float(d)))]
        assert failures
        assert min(failures) > 0.85

    def test_bounds_agree_with_predicates(self):
        for d in (0.3, 0.6, 0.9):
            b = min(material.stability_bound_lambda(d),
                    material.softening_bound_lambda(d))
            assert material.stability_holds(b - 1e-7, d)
            assert material.softening_holds(b - 1e-7, d)
            assert not (material.stability_holds(b + 1e-7, d)
                        and material.softening_holds(b + 1e-7, d))


class TestSnapback:
    def test_case_i_stable_iff_beta_above_lambda(self):
        rep = material.snapback_predicate(material.case_i(), beta=0.5, lam=0.4)
        assert rep.classification is material.SnapbackClass.STABLE
        rep = material.snapback_predicate(material.case_i(), beta=0.3, lam=0.4)
        assert rep.classification is material.SnapbackClass.SNAPBACK_AT_ONSET

    def test_case_ii_always_snaps_back(self):
        for beta in (0.1, 1.0, 100.0):
            rep = material.snapback_predicate(material.case_ii(), beta=beta, lam=0.4)
            assert rep.snapback_at_onset
        assert material.snapback_beta_bound(material.case_ii(), 1e-6) > 1e5

    def test_case_ii_bound_value(self):
        d = 0.5
        assert material.snapback_beta_bound(material.case_ii(), d) == pytest.approx(
            (3.0 - d) / (d * (8.0 - 3.0 * d)), rel=1e-14)

    def test_case_iii_second_divergence(self):
        rep = material.snapback_predicate(material.case_iii(), beta=0.5, lam=0.4)
        assert rep.classification is material.SnapbackClass.SNAPBACK_WINDOW
        assert rep.second_divergence_dm == pytest.approx(0.94048, abs=1e-4)
        # the bound changes sign across the root
        root = rep.second_divergence_dm
        assert material.snapback_beta_bound(material.case_iii(), root - 1e-3) > 0.0
        assert material.snapback_beta_bound(material.case_iii(), root + 1e-3) < 0.0


class TestMaterialSpec:
    def test_positive_fields_enforced(self):
        with pytest.raises(DomainError):
            MaterialSpec(E=-1.0, L=1.0, l_c=0.5, sigma_c=1.0, G_c=1.0)
        with pytest.raises(DomainError):
            MaterialSpec(E=1.0, L=1.0, l_c=0.0, sigma_c=1.0, G_c=1.0)

    def test_interface_pairing(self):
        with pytest.raises(DomainError):
            MaterialSpec(E=1.0, L=1.0, l_c=0.5, sigma_c=1.0, G_c=1.0, k=10.0)

    def test_bilinear_needs_finite_softening(self):
        with pytest.raises(DomainError):
            MaterialSpec(E=1.0, L=2.0, l_c=6.0, sigma_c=1.0, G_c=0.02,
                         k=800.0, G_0=0.025)

    def test_groups(self):
        g = SPEC.groups()
        assert g.l_coh == pytest.approx(SPEC.E * SPEC.G_c / SPEC.sigma_c**2, rel=1e-15)
        assert g.lam == pytest.approx(0.4, rel=1e-14)
        assert g.beta == pytest.approx(0.5, rel=1e-14)

    def test_from_lambda_beta_roundtrip(self):
        spec = MaterialSpec.from_lambda_beta(lam=0.23, beta=0.71, E=3.0, L=2.5,
                                             sigma_c=1.7)
        assert spec.lam == pytest.approx(0.23, rel=1e-13)
        assert spec.beta == pytest.approx(0.71, rel=1e-13)

    def test_parse_variant(self):
        assert material.parse_variant("i") == material.case_i()
        assert material.parse_variant("II") == material.case_ii()
        with pytest.raises(DomainError):
            material.parse_variant("iv")


def test_law_set_matches_scalar_api():
    rng = np.random.default_rng(7)
    d = rng.uniform(0.0, 1.0, 40)
    for variant, spec in ((material.case_i(), SPEC), (material.case_ii(), SPEC),
                          (material.case_iii(), SPEC),
                          (material.block_bilinear(), BLOCK)):
        laws = material.law_set(variant, spec)
        for x in d:
            x = float(x)
            assert laws.omega(x) == pytest.approx(material.omega(variant, x), rel=1e-14)
            assert laws.omega_prime(x) == pytest.approx(
                material.omega_prime(variant, x), rel=1e-14)
            assert laws.y_c(x) == pytest.approx(material.y_c(variant, spec, x),
                                                rel=1e-13)
            assert laws.y_c_prime(x) == pytest.approx(
                material.y_c_prime(variant, spec, x), rel=1e-12, abs=1e-15)
            assert laws.antiderivative(x) == pytest.approx(
                material.yc_antiderivative(variant, spec, x), rel=1e-13, abs=1e-16)
