import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clark_measures.torus_core import (
    Antidiagonal,
    ClarkMeasure2D,
    CurveComponent,
    DiskPoint,
    Graph,
    LineComponent,
    DiscreteMeasure1D,
    QuadratureError,
    QuadratureGrid,
    TorusPoint,
    UnimodularConstant,
    canonical_angle,
    circle_distance,
    integrate_measure2d,
    pairwise_sum,
    periodic_quadrature,
    poisson_kernel,
    poisson_kernel_nd,
)

TWO_PI = 2.0 * math.pi


class TestPoints:
    def test_torus_point_canonicalizes(self):
        assert TorusPoint(TWO_PI + 0.5).theta == pytest.approx(0.5, abs=1e-15)
        assert TorusPoint(-0.25).theta == pytest.approx(TWO_PI - 0.25, abs=1e-15)
        assert TorusPoint(TWO_PI).theta == 0.0

    def test_torus_point_value(self):
        p = TorusPoint(math.pi / 2)
        assert p.value == pytest.approx(1j, abs=1e-15)

    def test_close_to_wraps(self):
        assert TorusPoint(1e-15).close_to(TorusPoint(TWO_PI - 1e-15))
        assert not TorusPoint(0.0).close_to(TorusPoint(1e-6))

    def test_circle_distance(self):
        assert circle_distance(0.1, TWO_PI - 0.1) == pytest.approx(0.2, abs=1e-14)

    def test_disk_point_rejects_boundary(self):
        with pytest.raises(ValueError):
            DiskPoint(1.0 + 0j)
        with pytest.raises(ValueError):
            DiskPoint(1.2j)
        assert DiskPoint(0.3 + 0.4j).value == 0.3 + 0.4j

    def test_unimodular_constant(self):
        u = UnimodularConstant.from_nu(3 * math.pi)
        assert u.nu == pytest.approx(math.pi)
        assert abs(abs(u.alpha) - 1) <= 1e-15
        v = UnimodularConstant.from_complex(-1j)
        assert v.nu == pytest.approx(3 * math.pi / 2)
        with pytest.raises(ValueError):
            UnimodularConstant.from_complex(0.5)


class TestPoissonKernel:
    def test_at_origin_is_one(self):
        for theta in (0.0, 1.0, 4.5):
            assert poisson_kernel(0, TorusPoint(theta)) == pytest.approx(1.0, abs=1e-15)

    def test_half_at_angle_zero(self):
        assert poisson_kernel(0.5, TorusPoint(0.0)) == pytest.approx(3.0, abs=1e-14)

    def test_half_at_angle_pi(self):
        assert poisson_kernel(0.5, TorusPoint(math.pi)) == pytest.approx(1 / 3, abs=1e-14)

    def test_rejects_exterior(self):
        with pytest.raises(ValueError):
            poisson_kernel(1.0, TorusPoint(0.0))

    def test_nd_products(self):
        assert poisson_kernel_nd([0, 0], [TorusPoint(1.0), TorusPoint(2.0)]) == pytest.approx(1.0)
        assert poisson_kernel_nd([0.5, 0], [TorusPoint(0.0), TorusPoint(2.0)]) == pytest.approx(3.0)
        assert poisson_kernel_nd([0.5, 0.5], [TorusPoint(0.0), TorusPoint(0.0)]) == pytest.approx(9.0)

    def test_nd_rejects_mismatch(self):
        with pytest.raises(ValueError):
            poisson_kernel_nd([0.5], [TorusPoint(0.0), TorusPoint(1.0)])
        with pytest.raises(ValueError):
            poisson_kernel_nd([], [])

    def test_vectorized_positive(self):
        zeta = QuadratureGrid(128).points()
        vals = poisson_kernel(0.7j, zeta)
        assert vals.shape == (128,)
        assert np.all(vals > 0)


class TestPairwiseSum:
    def test_matches_fsum(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=1001)
        assert pairwise_sum(x) == pytest.approx(math.fsum(x), rel=1e-15)

    def test_repeatable(self):
        rng = np.random.default_rng(11)
        x = rng.normal(size=4096) + 1j * rng.normal(size=4096)
        assert pairwise_sum(x) == pairwise_sum(x.copy())

    def test_empty(self):
        assert pairwise_sum(np.array([])) == 0.0

    def test_axis(self):
        a = np.arange(12.0).reshape(3, 4)
        assert np.allclose(pairwise_sum(a, axis=-1), a.sum(axis=-1))


class TestPeriodicQuadrature:
    def test_constant(self):
        grid = QuadratureGrid(256)
        assert periodic_quadrature(lambda z: np.ones_like(z), grid) == 1.0

    def test_cosine_vanishes(self):
        grid = QuadratureGrid(4)
        val = periodic_quadrature(lambda z: z.real, grid)
        assert abs(val) <= 1e-15

    def test_poisson_mean(self):
        grid = QuadratureGrid(4096)
        val = periodic_quadrature(lambda z: poisson_kernel(0.5, z), grid)
        assert val == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=-20, max_value=20),
           st.floats(min_value=-1, max_value=1),
           st.floats(min_value=-1, max_value=1))
    def test_exact_for_trig_polynomials(self, m, re, im):
        # modes |m| < N/2 integrate to exactly their zeroth coefficient
        grid = QuadratureGrid(64)
        c = complex(re, im)
        val = periodic_quadrature(lambda z: c * z ** m, grid)
        expected = c if m == 0 else 0.0
        assert abs(val - expected) <= 1e-14

    def test_single_undefined_node_allowed(self):
        grid = QuadratureGrid(256)

        def f(z):
            out = np.ones_like(z)
            out[0] = np.nan
            return out

        val = periodic_quadrature(f, grid)
        assert val == pytest.approx(255 / 256, abs=1e-15)

    def test_many_undefined_nodes_fail(self):
        grid = QuadratureGrid(256)

        def f(z):
            out = np.ones_like(z)
            out[:10] = np.nan
            return out

        with pytest.raises(QuadratureError) as err:
            periodic_quadrature(f, grid)
        assert len(err.value.undefined_angles) > 0


class TestDiscreteMeasure1D:
    def test_rejects_nonpositive_weights(self):
        with pytest.raises(ValueError):
            DiscreteMeasure1D(atoms=((TorusPoint(0.0), 0.0),))

    def test_rejects_duplicate_atoms(self):
        with pytest.raises(ValueError):
            DiscreteMeasure1D(atoms=((TorusPoint(1.0), 1.0), (TorusPoint(1.0 + 1e-14), 1.0)))

    def test_arrays(self):
        mu = DiscreteMeasure1D(atoms=((TorusPoint(0.0), 0.5), (TorusPoint(math.pi), 0.25)))
        assert mu.total_listed_mass == pytest.approx(0.75)
        assert np.allclose(mu.points_array(), [1.0, -1.0])


class TestIntegrateMeasure2D:
    def test_unit_antidiagonal_constant(self):
        mu = ClarkMeasure2D(curves=(CurveComponent(Antidiagonal(TorusPoint(0.0)), 1.0),))
        res = integrate_measure2d(mu, lambda z1, z2: np.ones_like(z1), QuadratureGrid(256))
        assert res.value == pytest.approx(1.0, abs=1e-14)

    def test_line_with_poisson_kernel(self):
        mu = ClarkMeasure2D(lines=(LineComponent(TorusPoint(0.0), 0.5),))

        def f(z1, z2):
            return poisson_kernel(0.0, z1) * poisson_kernel(0.3, z2)

        res = integrate_measure2d(mu, f, QuadratureGrid(4096))
        assert res.value == pytest.approx(0.5, abs=1e-10)

    def test_mass_of_mixed_measure(self):
        mu = ClarkMeasure2D(
            curves=(CurveComponent(Antidiagonal(TorusPoint(1.0)), 0.25),
                    CurveComponent(Graph(lambda z: np.conj(z)),
                                   lambda z: np.abs(z - 1) ** 2)),
            lines=(LineComponent(TorusPoint(0.0), 0.5),),
        )
        res = integrate_measure2d(mu, lambda z1, z2: np.ones_like(z1), QuadratureGrid(512))
        # graph weight |zeta-1|^2 integrates to 2 under normalized measure
        assert res.value == pytest.approx(0.25 + 2.0 + 0.5, abs=1e-12)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(min_value=-2, max_value=2), st.floats(min_value=-2, max_value=2))
    def test_linearity(self, a, b):
        mu = ClarkMeasure2D(
            curves=(CurveComponent(Antidiagonal(TorusPoint(0.7)), 0.4),),
            lines=(LineComponent(TorusPoint(2.0), 0.3),),
        )
        grid = QuadratureGrid(128)

        def f(z1, z2):
            return z1 * np.conj(z2)

        def g(z1, z2):
            return np.abs(z2 - 0.5) ** 2

        lhs = integrate_measure2d(mu, lambda x, y: a * f(x, y) + b * g(x, y), grid).value
        rhs = a * integrate_measure2d(mu, f, grid).value + b * integrate_measure2d(mu, g, grid).value
        assert abs(lhs - rhs) <= 1e-12 * (abs(a) + abs(b) + 1)

    def test_repeated_runs_bit_identical(self):
        mu = ClarkMeasure2D(
            curves=(CurveComponent(Antidiagonal(TorusPoint(0.3)), 0.9),),
        )
        grid = QuadratureGrid(512)

        def f(z1, z2):
            return poisson_kernel(0.4 + 0.2j, z1) * poisson_kernel(-0.1j, z2)

        r1 = integrate_measure2d(mu, f, grid)
        r2 = integrate_measure2d(mu, f, grid)
        assert r1.value == r2.value and r1.error_bound == r2.error_bound

    def test_tail_bound_enters_error(self):
        mu = ClarkMeasure2D(
            curves=(CurveComponent(Antidiagonal(TorusPoint(0.0)), 1.0),),
            tail_bound=0.01,
        )
        res = integrate_measure2d(mu, lambda z1, z2: 3 * np.ones_like(z1), QuadratureGrid(64))
        assert res.error_bound >= 0.01 * 3

    def test_undefined_graph_nodes_tolerated(self):
        def g(z):
            out = np.conj(z).astype(complex)
            out[np.abs(z - 1) < 1e-9] = np.nan
            return out

        mu = ClarkMeasure2D(curves=(CurveComponent(Graph(g), lambda z: np.ones(z.shape)),))
        res = integrate_measure2d(mu, lambda z1, z2: np.ones_like(z2), QuadratureGrid(256))
        assert res.value == pytest.approx(1.0, abs=1e-14)


def test_canonical_angle_edge_cases():
    assert canonical_angle(0.0) == 0.0
    assert canonical_angle(-1e-18) == 0.0 or canonical_angle(-1e-18) < TWO_PI
    assert 0.0 <= canonical_angle(1e9) < TWO_PI
