import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clark_measures.clark1d import (
    UnsupportedFunctionError,
    clark_atomic_singular,
    clark_blaschke,
    clark_measure1d,
    level_points,
)
from clark_measures.inner1d import (
    InnerFunction1D,
    Unimodular,
    angular_derivative_modulus,
    boundary_value,
    eval_inner,
)
from clark_measures.torus_core import (
    DiskPoint,
    TorusPoint,
    UnimodularConstant,
    circle_distance,
)

TWO_PI = 2.0 * math.pi

IDENTITY = InnerFunction1D(monomial_power=1)
SQUARE = InnerFunction1D(monomial_power=2)
BLASCHKE_MONO = InnerFunction1D(monomial_power=1, blaschke_zeros=(DiskPoint(0.5j),))
DEGREE5 = InnerFunction1D(
    unimodular_factor=UnimodularConstant.from_nu(1.1),
    monomial_power=2,
    blaschke_zeros=(DiskPoint(0.3 + 0.2j), DiskPoint(-0.6j), DiskPoint(0.55)),
)
EXP_ATOM = InnerFunction1D(singular_atoms=((TorusPoint(0.0), 1.0),))


def level_roots_oracle(phi, alpha):
    """Solve phi* = alpha as a polynomial root problem (independent path)."""
    p1 = np.array([phi.unimodular_factor.alpha])
    for a in phi.blaschke_zeros:
        p1 = np.polymul(p1, np.array([-1.0, a.value]))
    p1 = np.concatenate([p1, np.zeros(phi.monomial_power, dtype=complex)])
    p2 = np.array([alpha.alpha])
    for a in phi.blaschke_zeros:
        p2 = np.polymul(p2, np.array([-a.value.conjugate(), 1.0]))
    n = max(len(p1), len(p2))
    diff = np.zeros(n, dtype=complex)
    diff[n - len(p1):] += p1
    diff[n - len(p2):] -= p2
    roots = np.roots(diff)
    roots = roots[np.abs(np.abs(roots) - 1.0) < 1e-6]
    return np.sort(np.mod(np.angle(roots), TWO_PI))


def herglotz_rhs_origin(phi, alpha):
    v = eval_inner(phi, 0.0)
    return (1.0 - abs(v) ** 2) / abs(alpha.alpha - v) ** 2


class TestClarkBlaschke:
    def test_identity_single_atom(self):
        for nu in (0.0, 0.9, 4.4):
            mu = clark_blaschke(IDENTITY, UnimodularConstant.from_nu(nu))
            assert len(mu.atoms) == 1
            zeta, w = mu.atoms[0]
            assert circle_distance(zeta.theta, nu) <= 1e-12
            assert w == pytest.approx(1.0, abs=1e-12)
            assert mu.tail_bound == 0.0

    def test_square_at_one(self):
        mu = clark_blaschke(SQUARE, UnimodularConstant.one())
        angles = sorted(z.theta for z, _ in mu.atoms)
        assert angles == pytest.approx([0.0, math.pi], abs=1e-12)
        for _, w in mu.atoms:
            assert w == pytest.approx(0.5, abs=1e-12)

    def test_mass_identity_with_interior_zero(self):
        mu = clark_blaschke(BLASCHKE_MONO, UnimodularConstant.one())
        assert len(mu.atoms) == 2
        assert mu.total_listed_mass == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("nu", [0.0, 0.7, 2.5, 5.9])
    def test_degree5_against_polynomial_roots(self, nu):
        alpha = UnimodularConstant.from_nu(nu)
        mu = clark_blaschke(DEGREE5, alpha)
        oracle = level_roots_oracle(DEGREE5, alpha)
        assert len(mu.atoms) == 5 == len(oracle)
        for zeta, _ in mu.atoms:
            assert min(circle_distance(zeta.theta, t) for t in oracle) < 1e-9

    @pytest.mark.parametrize("nu", [0.0, 2.5])
    def test_degree5_mass_identity(self, nu):
        alpha = UnimodularConstant.from_nu(nu)
        mu = clark_blaschke(DEGREE5, alpha)
        assert mu.total_listed_mass == pytest.approx(herglotz_rhs_origin(DEGREE5, alpha), rel=1e-12)

    def test_atom_correctness_and_weight_oracle(self):
        alpha = UnimodularConstant.from_nu(1.3)
        mu = clark_blaschke(DEGREE5, alpha)
        for zeta, w in mu.atoms:
            bv = boundary_value(DEGREE5, zeta)
            assert isinstance(bv, Unimodular)
            assert abs(bv.value - alpha.alpha) <= 1e-9
            assert w == pytest.approx(1.0 / angular_derivative_modulus(DEGREE5, zeta), rel=1e-8)

    def test_mutual_singularity_of_atom_sets(self):
        mu = clark_blaschke(DEGREE5, UnimodularConstant.one())
        nu_other = clark_blaschke(DEGREE5, UnimodularConstant.from_nu(0.5))
        for z1, _ in mu.atoms:
            for z2, _ in nu_other.atoms:
                assert circle_distance(z1.theta, z2.theta) > 1e-9

    @settings(max_examples=30, deadline=None)
    @given(st.floats(min_value=0.0, max_value=TWO_PI - 1e-9))
    def test_cube_roots_property(self, nu):
        cube = InnerFunction1D(monomial_power=3)
        mu = clark_blaschke(cube, UnimodularConstant.from_nu(nu))
        expected = sorted((nu + TWO_PI * m) / 3 % TWO_PI for m in range(3))
        angles = sorted(z.theta for z, _ in mu.atoms)
        for got, want in zip(angles, expected):
            assert circle_distance(got, want) <= 1e-11
        for _, w in mu.atoms:
            assert w == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_rejects_constant_and_singular(self):
        with pytest.raises(UnsupportedFunctionError):
            clark_blaschke(InnerFunction1D(), UnimodularConstant.one())
        with pytest.raises(UnsupportedFunctionError):
            clark_blaschke(EXP_ATOM, UnimodularConstant.one())


class TestClarkAtomicSingular:
    def test_standard_instance_locations(self):
        mu = clark_atomic_singular(1.0, TorusPoint(0.0), UnimodularConstant.one(), K=5)
        assert len(mu.atoms) == 11
        for k in range(-5, 6):
            eta = (TWO_PI * k - 1j) / (TWO_PI * k + 1j)
            target = cmath.phase(eta) % TWO_PI
            assert min(circle_distance(z.theta, target) for z, _ in mu.atoms) <= 1e-12

    def test_standard_instance_weights(self):
        mu = clark_atomic_singular(1.0, TorusPoint(0.0), UnimodularConstant.one(), K=5)
        for zeta, w in mu.atoms:
            # invert eta = (s-i)/(s+i): s = i(1+eta)/(1-eta) real
            eta = zeta.value
            s = (1j * (1.0 + eta) / (1.0 - eta)).real
            assert w == pytest.approx(2.0 / (1.0 + s * s), rel=1e-12)

    def test_center_atom_is_minus_one_with_weight_two(self):
        mu = clark_atomic_singular(1.0, TorusPoint(0.0), UnimodularConstant.one(), K=1)
        center = min(mu.atoms, key=lambda zw: circle_distance(zw[0].theta, math.pi))
        assert circle_distance(center[0].theta, math.pi) <= 1e-14
        assert center[1] == pytest.approx(2.0, rel=1e-14)

    def test_weights_match_radial_derivative_oracle(self):
        mu = clark_atomic_singular(1.0, TorusPoint(0.0), UnimodularConstant.one(), K=2)
        for zeta, w in mu.atoms:
            assert w == pytest.approx(1.0 / angular_derivative_modulus(EXP_ATOM, zeta), rel=1e-8)

    def test_mass_bracket_standard(self):
        alpha = UnimodularConstant.one()
        rhs = (1.0 - math.exp(-2.0)) / abs(1.0 - math.exp(-1.0)) ** 2
        mu = clark_atomic_singular(1.0, TorusPoint(0.0), alpha, K=10_000)
        partial = mu.total_listed_mass
        assert partial <= rhs + 1e-12
        assert partial + mu.tail_bound >= rhs - 1e-9

    @pytest.mark.parametrize("c,theta_xi,nu", [(0.7, 2.0, 0.9), (2.5, 5.5, 3.1), (1.0, 0.0, 1e-3)])
    def test_general_parameters(self, c, theta_xi, nu):
        alpha = UnimodularConstant.from_nu(nu)
        phi = InnerFunction1D(singular_atoms=((TorusPoint(theta_xi), c),))
        mu = clark_atomic_singular(c, TorusPoint(theta_xi), alpha, K=400)
        for zeta, w in mu.atoms:
            bv = boundary_value(phi, zeta)
            assert isinstance(bv, Unimodular)
            # residual scales with the phase condition number |phi'(eta)| = 1/w
            assert abs(bv.value - alpha.alpha) <= 1e-9 + 1e-14 / w
            if 1.0 / w < 1e4:
                assert abs(bv.value - alpha.alpha) <= 1e-9
        rhs = (1.0 - math.exp(-2.0 * c)) / abs(alpha.alpha - math.exp(-c)) ** 2
        assert mu.total_listed_mass <= rhs + 1e-12
        assert mu.total_listed_mass + mu.tail_bound >= rhs - 1e-12

    def test_tail_bound_shrinks(self):
        alpha = UnimodularConstant.one()
        tails = [clark_atomic_singular(1.0, TorusPoint(0.0), alpha, K=K).tail_bound
                 for K in (10, 100, 1000)]
        assert tails[0] > tails[1] > tails[2] > 0

    def test_rejects_bad_truncation(self):
        with pytest.raises(ValueError):
            clark_atomic_singular(1.0, TorusPoint(0.0), UnimodularConstant.one(), K=0)
        with pytest.raises(ValueError):
            clark_atomic_singular(-1.0, TorusPoint(0.0), UnimodularConstant.one(), K=5)


class TestDispatchAndLevelPoints:
    def test_dispatch_blaschke(self):
        mu = clark_measure1d(SQUARE, UnimodularConstant.one())
        assert mu.generator_id == "blaschke"

    def test_dispatch_singular_folds_prefactor(self):
        phi = InnerFunction1D(
            unimodular_factor=UnimodularConstant.from_nu(0.8),
            singular_atoms=((TorusPoint(1.5), 0.6),),
        )
        alpha = UnimodularConstant.from_nu(2.2)
        mu = clark_measure1d(phi, alpha, K=50)
        assert mu.generator_id == "atomic_singular"
        for zeta, _ in mu.atoms:
            bv = boundary_value(phi, zeta)
            assert abs(bv.value - alpha.alpha) <= 1e-9

    def test_dispatch_rejects_mixed(self):
        mixed = InnerFunction1D(monomial_power=1, singular_atoms=((TorusPoint(0.0), 1.0),))
        with pytest.raises(UnsupportedFunctionError):
            clark_measure1d(mixed, UnimodularConstant.one())
        twoatoms = InnerFunction1D(
            singular_atoms=((TorusPoint(0.0), 1.0), (TorusPoint(3.0), 1.0)),
        )
        with pytest.raises(UnsupportedFunctionError):
            clark_measure1d(twoatoms, UnimodularConstant.one())

    def test_level_points_identity(self):
        lp = level_points(IDENTITY, UnimodularConstant.one())
        assert len(lp.points) == 1 and lp.points[0].theta == pytest.approx(0.0, abs=1e-12)
        assert lp.accumulation == ()

    def test_level_points_square_at_minus_one(self):
        lp = level_points(SQUARE, UnimodularConstant.from_complex(-1.0))
        angles = sorted(p.theta for p in lp.points)
        assert angles == pytest.approx([math.pi / 2, 3 * math.pi / 2], abs=1e-12)

    def test_level_points_singular_accumulation(self):
        lp = level_points(EXP_ATOM, UnimodularConstant.one(), K=20)
        assert len(lp.points) == 41
        assert len(lp.accumulation) == 1
        assert lp.accumulation[0].theta == 0.0
