"""Tests for the verification oracle suite."""

import json
import math

import numpy as np
import pytest

from clark_measures import (
    ClarkMeasure2D,
    CurveComponent,
    Graph,
    InnerFunction1D,
    Poly1,
    QuadratureGrid,
    RIF_n1,
    TorusPoint,
    UnimodularConstant,
    embed_clark2d,
    embed_clark_nd,
    embedding_map,
    integrate_embed_nd,
    integrate_measure2d,
    product_map,
    rif_clark_measure,
    rif_map,
)
from clark_measures.product2d import ProductInner, product_branch_measure
from clark_measures.verify import (
    EMBED_BASE_REL,
    PRODUCT_BASE_REL,
    RIF_BASE_REL,
    FourierEntry,
    IdentityResidual,
    MassCheck,
    SupportSample,
    VerificationReport,
    embed_integrator,
    embedding_boundary_map,
    fourier_rp_check,
    herglotz_rhs,
    measure_integrator,
    poisson_identity_check,
    product_boundary_map,
    product_integrator,
    rif_boundary_map,
    sample_test_points,
    support_inclusion_check,
    total_mass_check,
)

EXP = InnerFunction1D(singular_atoms=((0.0, 1.0),))
IDENT = InnerFunction1D(monomial_power=1)
SQUARE = InnerFunction1D(monomial_power=2)
GRID = QuadratureGrid(4096)


def example_rif() -> RIF_n1:
    return RIF_n1(p1=Poly1((4, -3, 1)), p2=Poly1((-1, -1)), n=2)


def poisson_f(z1, z2):
    def f(w1, w2):
        return (
            (1.0 - abs(z1) ** 2)
            / np.abs(w1 - z1) ** 2
            * (1.0 - abs(z2) ** 2)
            / np.abs(w2 - z2) ** 2
        )

    return f


class TestHerglotzRhs:
    def test_monomial_origin(self):
        phi = lambda z: z[0] * z[1]  # noqa: E731
        for nu in (0.0, 1.0, math.pi):
            assert herglotz_rhs(phi, UnimodularConstant.from_nu(nu), (0j, 0j)) == 1.0

    def test_monomial_half(self):
        phi = lambda z: z[0] * z[1]  # noqa: E731
        value = herglotz_rhs(phi, UnimodularConstant.from_nu(0.0), (0.5, 0.5))
        assert value == pytest.approx(5.0 / 3.0, rel=1e-15)

    def test_rejects_non_interior(self):
        with pytest.raises(ValueError):
            herglotz_rhs(lambda z: 1.0 + 0j, UnimodularConstant.from_nu(0.0), (0j, 0j))

    def test_two_sided_against_measure(self):
        # the quotient at an interior point equals the measure integral
        alpha = UnimodularConstant.from_nu(0.0)
        mu = embed_clark2d(EXP, alpha, K=400)
        z = (0.4, 0.3j)
        rhs = herglotz_rhs(embedding_map(EXP, 2), alpha, z)
        res = measure_integrator(mu, GRID, tail_angles=[0.0])(z)
        assert abs(res.value - rhs) <= 1e-6 * rhs + res.error_bound


class TestSamplePoints:
    def test_reproducible(self):
        assert sample_test_points(2, 10, seed=5) == sample_test_points(2, 10, seed=5)
        assert sample_test_points(2, 10, seed=5) != sample_test_points(2, 10, seed=6)

    def test_shape_and_radius(self):
        pts = sample_test_points(3, 50)
        assert len(pts) == 50
        assert all(len(z) == 3 for z in pts)
        assert max(abs(c) for z in pts for c in z) <= 0.95


class TestIntegrators:
    def test_antidiagonal_fast_path_matches_generic(self):
        alpha = UnimodularConstant.from_nu(0.7)
        mu = embed_clark2d(EXP, alpha, K=25)
        em = embed_clark_nd(EXP, alpha, 2, K=25)
        fast = embed_integrator(em, GRID)
        via_measure = measure_integrator(mu, GRID)
        rng = np.random.default_rng(2)
        for _ in range(5):
            z = tuple(
                rng.uniform(0, 0.9) * np.exp(1j * rng.uniform(0, 2 * math.pi))
                for _ in range(2)
            )
            generic = integrate_measure2d(mu, poisson_f(*z), GRID)
            assert abs(fast(z).value - generic.value.real) <= 1e-10
            assert abs(via_measure(z).value - generic.value.real) <= 1e-10

    def test_nd_fast_path_matches_nested(self):
        alpha = UnimodularConstant.from_nu(0.7)
        em = embed_clark_nd(EXP, alpha, 3, K=25)
        fast = embed_integrator(em, GRID, tail_angles=[0.0])
        z = (0.3 + 0.4j, -0.5 + 0.2j, 0.1 - 0.6j)

        def f(w1, w2, w3):
            out = np.ones(np.broadcast(w1, w2, w3).shape)
            for zi, w in zip(z, (w1, w2, w3)):
                out = out * (1 - abs(zi) ** 2) / np.abs(w - zi) ** 2
            return out

        nested = integrate_embed_nd(em, f, QuadratureGrid(512))
        assert abs(fast(z).value - nested.value.real) <= 1e-10

    def test_nd_fast_path_matches_kernel_semigroup(self):
        # integration over {zeta_1 zeta_2 zeta_3 = eta} reproduces the
        # one-variable kernel at the product point
        alpha = UnimodularConstant.from_nu(1.3)
        em = embed_clark_nd(EXP, alpha, 3, K=25)
        fast = embed_integrator(em, GRID)
        z = (0.5, 0.2j, -0.3 + 0.1j)
        w = z[0] * z[1] * z[2]
        closed = sum(
            wk * (1 - abs(w) ** 2) / abs(p.value - w) ** 2 for p, wk in em.base.atoms
        )
        assert abs(fast(z).value - closed) <= 1e-10

    def test_rejects_wrong_arity(self):
        em = embed_clark_nd(EXP, UnimodularConstant.from_nu(0.0), 3, K=5)
        with pytest.raises(ValueError):
            embed_integrator(em, GRID)((0.1, 0.2))

    def test_product_integrator_runs_fiber_path(self):
        P = ProductInner(EXP, EXP)
        alpha = UnimodularConstant.from_nu(0.9)
        integrate = product_integrator(P, alpha, GRID, K=300)
        z = (0.3 + 0.2j, -0.1 + 0.5j)
        rhs = herglotz_rhs(product_map(P), alpha, z)
        res = integrate(z)
        assert abs(res.value - rhs) / rhs <= PRODUCT_BASE_REL + res.error_bound / rhs


class TestPoissonIdentity:
    def test_monomial_embedding_tight(self):
        alpha = UnimodularConstant.from_nu(0.7)
        em = embed_clark_nd(IDENT, alpha, 2, K=1)
        report = poisson_identity_check(
            em, embedding_map(IDENT, 2), alpha, sample_test_points(2, 100), GRID
        )
        assert report.passed
        assert max(r.relative_error for r in report.identity_residuals) <= 1e-10

    def test_rif_identity_tight(self):
        R = example_rif()
        alpha = UnimodularConstant.from_nu(math.pi / 2)
        mu = rif_clark_measure(R, alpha)
        report = poisson_identity_check(
            mu, rif_map(R), alpha, sample_test_points(2, 20), GRID,
            base_rel=RIF_BASE_REL,
        )
        assert report.passed

    def test_negative_control_dropped_line(self):
        R = example_rif()
        alpha = UnimodularConstant.from_nu(math.pi)
        mu = rif_clark_measure(R, alpha)
        crippled = ClarkMeasure2D(curves=mu.curves, lines=(), tail_bound=0.0)
        points = sample_test_points(2, 10)
        good = poisson_identity_check(mu, rif_map(R), alpha, points, GRID,
                                      base_rel=RIF_BASE_REL)
        bad = poisson_identity_check(crippled, rif_map(R), alpha, points, GRID,
                                     base_rel=RIF_BASE_REL)
        assert good.passed
        assert not bad.passed
        assert max(r.relative_error for r in bad.identity_residuals) > 0.1

    def test_zero_point_residual_equals_mass_error(self):
        alpha = UnimodularConstant.from_nu(0.4)
        em = embed_clark_nd(EXP, alpha, 2, K=50)
        integrate = embed_integrator(em, GRID, tail_angles=[0.0])
        phi = embedding_map(EXP, 2)
        report = poisson_identity_check(em, phi, alpha, ((0j, 0j),), GRID,
                                        integrate=integrate)
        mass = total_mass_check(em, phi, alpha, integrate=integrate, dimension=2)
        r = report.identity_residuals[0]
        assert abs(r.lhs - r.rhs) == mass.error


class TestTotalMass:
    def test_probability_when_phi_vanishes_at_zero(self):
        alpha = UnimodularConstant.from_nu(1.1)
        em = embed_clark_nd(IDENT, alpha, 2, K=1)
        mass = total_mass_check(em, embedding_map(IDENT, 2), alpha)
        assert mass.expected == 1.0
        assert mass.passed

    def test_exponential_mass_closed_form(self):
        alpha = UnimodularConstant.from_nu(0.0)
        em = embed_clark_nd(EXP, alpha, 2, K=2000)
        mass = total_mass_check(em, embedding_map(EXP, 2), alpha)
        expected = (1 - math.exp(-2)) / (1 - math.exp(-1)) ** 2
        assert mass.expected == pytest.approx(expected, rel=1e-14)
        assert mass.error <= mass.tolerance

    def test_rif_mass(self):
        R = example_rif()
        alpha = UnimodularConstant.from_nu(math.pi)
        mu = rif_clark_measure(R, alpha)
        mass = total_mass_check(mu, rif_map(R), alpha, GRID)
        assert mass.expected == pytest.approx(1.0)
        assert mass.passed


class TestSupportInclusion:
    def test_square_embedding(self):
        alpha = UnimodularConstant.from_nu(0.0)
        mu = embed_clark2d(SQUARE, alpha, K=2)
        samples = support_inclusion_check(
            mu, embedding_boundary_map(SQUARE, 2), alpha
        )
        assert len(samples) == 2 * 16
        assert all(s.passed for s in samples)
        assert max(s.deviation for s in samples) <= 1e-12

    def test_rif_line_samples(self):
        R = example_rif()
        alpha = UnimodularConstant.from_nu(math.pi)
        mu = rif_clark_measure(R, alpha)
        samples = support_inclusion_check(mu, rif_boundary_map(R), alpha)
        assert any(s.point[0] == 1.0 + 0j for s in samples)
        assert all(s.passed for s in samples)

    def test_product_branch_samples(self):
        P = ProductInner(EXP, EXP)
        alpha = UnimodularConstant.from_nu(1.2)
        mu = product_branch_measure(P, alpha, K=10)
        samples = support_inclusion_check(
            mu, product_boundary_map(P), alpha,
            exemptions=(((1 + 0j), (1 + 0j)),),
        )
        assert all(s.passed for s in samples)
        assert len(samples) == len(mu.curves) * 16

    def test_wrong_alpha_fails(self):
        alpha = UnimodularConstant.from_nu(0.0)
        mu = embed_clark2d(SQUARE, alpha, K=2)
        samples = support_inclusion_check(
            mu, embedding_boundary_map(SQUARE, 2), UnimodularConstant.from_nu(2.0)
        )
        assert not any(s.passed for s in samples)

    def test_zero_weight_components_skipped(self):
        from clark_measures import Antidiagonal

        mu = ClarkMeasure2D(
            curves=(
                CurveComponent(Antidiagonal(TorusPoint(0.0)), 1.0),
                CurveComponent(Antidiagonal(TorusPoint(1.0)), 0.0),
            )
        )
        samples = support_inclusion_check(
            mu, embedding_boundary_map(IDENT, 2), UnimodularConstant.from_nu(0.0)
        )
        assert len(samples) == 16


class TestFourierRP:
    def test_monomial_embedding_orthogonality(self):
        alpha = UnimodularConstant.from_nu(0.9)
        mu = embed_clark2d(IDENT, alpha, K=1)
        entries = fourier_rp_check(mu, kmax=2, grid=GRID)
        assert len(entries) == 8
        assert all(e.passed for e in entries)
        assert max(e.modulus for e in entries) <= 1e-12

    def test_rif_measure(self):
        R = example_rif()
        alpha = UnimodularConstant.from_nu(math.pi)
        mu = rif_clark_measure(R, alpha)
        entries = fourier_rp_check(mu, kmax=8, grid=GRID)
        assert all(e.passed for e in entries)

    def test_product_branch_measure(self):
        P = ProductInner(EXP, EXP)
        alpha = UnimodularConstant.from_nu(0.3)
        mu = product_branch_measure(P, alpha, K=40)
        entries = fourier_rp_check(mu, kmax=3, grid=GRID)
        assert all(e.passed for e in entries)

    def test_diagonal_negative_control(self):
        diagonal = ClarkMeasure2D(
            curves=(
                CurveComponent(
                    Graph(lambda z: z), lambda z: np.ones(np.shape(z), dtype=float)
                ),
            )
        )
        entries = fourier_rp_check(diagonal, kmax=2, grid=GRID)
        worst = {e.k: e for e in entries}
        assert worst[(1, -1)].modulus >= 0.5
        assert not worst[(1, -1)].passed

    def test_rejects_bad_kmax(self):
        with pytest.raises(ValueError):
            fourier_rp_check(ClarkMeasure2D(), 0)


class TestReport:
    def make_report(self):
        return VerificationReport(
            identity_residuals=(
                IdentityResidual(z=(0.1 + 0.2j, 0j), lhs=1.0, rhs=1.0,
                                 relative_error=0.0, tolerance=1e-6),
            ),
            mass=MassCheck(computed=1.0, expected=1.0, error=0.0, tolerance=1e-8),
            fourier=(FourierEntry(k=(1, -1), modulus=0.0, tolerance=1e-8),),
            support=(SupportSample(point=(1 + 0j, 1 + 0j), deviation=0.0,
                                   exempt=False, tolerance=1e-8),),
            tolerances={"identity_base_rel": 1e-6},
            seed=1729,
        )

    def test_passed_reflects_sections(self):
        report = self.make_report()
        assert report.passed
        failing = VerificationReport(
            identity_residuals=(
                IdentityResidual(z=(0j, 0j), lhs=2.0, rhs=1.0,
                                 relative_error=1.0, tolerance=1e-6),
            )
        )
        assert not failing.passed

    def test_json_round_trip(self):
        report = self.make_report()
        data = json.loads(json.dumps(report.to_json_dict()))
        assert VerificationReport.from_json_dict(data) == report

    def test_undefined_deviation_round_trips(self):
        report = VerificationReport(
            support=(SupportSample(point=(1 + 0j, 1 + 0j), deviation=None,
                                   exempt=True, tolerance=1e-8),)
        )
        data = json.loads(json.dumps(report.to_json_dict()))
        assert VerificationReport.from_json_dict(data) == report

    def test_rejects_unknown_fields(self):
        data = self.make_report().to_json_dict()
        data["extra"] = 1
        with pytest.raises(ValueError):
            VerificationReport.from_json_dict(data)

    def test_rejects_inconsistent_flag(self):
        data = self.make_report().to_json_dict()
        data["passed"] = False
        with pytest.raises(ValueError):
            VerificationReport.from_json_dict(data)
