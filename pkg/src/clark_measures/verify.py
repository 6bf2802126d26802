"""Identity and structure checks for computed Clark measures.

Every measure the package produces is tested against the defining property:
its Poisson integral must reproduce (1-|Phi(z)|^2)/|alpha-Phi(z)|^2 on the
polydisc.  Structural side conditions are checked alongside: finite total
mass, support inside the alpha level set, and vanishing mixed-sign Fourier
coefficients.

The Poisson integrals are evaluated independently of the construction paths:
plain quadrature over the measure components, with two accelerated layouts
(a rank-2 denominator update for antidiagonal families and a spectral
convolution for higher-dimensional embeddings) that the tests pin against
the generic integrators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .embed import EmbeddedClarkND
from .inner1d import InnerFunction1D, Unimodular, boundary_value
from .product2d import ProductInner, product_clark_integrate
from .rif2d import RIF_n1, RIFError, rif_boundary_value
from .torus_core import (
    Antidiagonal,
    ClarkMeasure2D,
    IntegralResult,
    QuadratureGrid,
    TorusPoint,
    UnimodularConstant,
    integrate_measure2d,
    max_undefined_nodes,
    pairwise_sum,
)

__all__ = [
    "DEFAULT_SEED",
    "EMBED_BASE_REL",
    "PRODUCT_BASE_REL",
    "RIF_BASE_REL",
    "SUPPORT_TOL",
    "FOURIER_BASE_TOL",
    "IdentityResidual",
    "MassCheck",
    "FourierEntry",
    "SupportSample",
    "VerificationReport",
    "herglotz_rhs",
    "sample_test_points",
    "measure_integrator",
    "embed_integrator",
    "product_integrator",
    "poisson_identity_check",
    "total_mass_check",
    "support_inclusion_check",
    "fourier_rp_check",
    "product_fourier_rp_check",
    "embedding_boundary_map",
    "product_boundary_map",
    "rif_boundary_map",
]

DEFAULT_SEED = 1729
DEFAULT_GRID_N = 4096

# per-module relative tolerances for the identity check
EMBED_BASE_REL = 1e-6
PRODUCT_BASE_REL = 1e-5
RIF_BASE_REL = 1e-8

SUPPORT_TOL = 1e-8
FOURIER_BASE_TOL = 1e-8

_CHUNK_ROWS = 1024
TWO_PI = 2.0 * math.pi


def _as_alpha(alpha) -> UnimodularConstant:
    if isinstance(alpha, UnimodularConstant):
        return alpha
    return UnimodularConstant.from_complex(complex(alpha))


def _poisson_1d(z: complex, zeta) -> np.ndarray:
    return (1.0 - abs(z) ** 2) / np.abs(zeta - z) ** 2


def _poisson_sup(z: complex) -> float:
    return (1.0 + abs(z)) / (1.0 - abs(z))


def herglotz_rhs(phi, alpha, z) -> float:
    """(1-|Phi(z)|^2)/|alpha-Phi(z)|^2 for an interior point z."""
    value = complex(phi(z))
    if abs(value) >= 1.0:
        raise ValueError(f"Phi(z) = {value} is not interior")
    a = _as_alpha(alpha).alpha
    return (1.0 - abs(value) ** 2) / abs(a - value) ** 2


def sample_test_points(d: int, count: int = 100, seed: int = DEFAULT_SEED,
                       max_radius: float = 0.95):
    """Reproducible interior test points: radii uniform in [0, max_radius],
    angles uniform, per coordinate."""
    rng = np.random.default_rng(seed)
    radii = rng.uniform(0.0, max_radius, size=(count, d))
    angles = rng.uniform(0.0, TWO_PI, size=(count, d))
    points = radii * np.exp(1j * angles)
    return tuple(tuple(complex(c) for c in row) for row in points)


# ---------------------------------------------------------------------------
# report sections


def _pair(c: complex):
    return [float(np.real(c)), float(np.imag(c))]


@dataclass(frozen=True)
class IdentityResidual:
    """One test point of the Poisson identity."""

    z: tuple
    lhs: float
    rhs: float
    relative_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.relative_error <= self.tolerance


@dataclass(frozen=True)
class MassCheck:
    computed: float
    expected: float
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.error <= self.tolerance


@dataclass(frozen=True)
class FourierEntry:
    k: tuple
    modulus: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.modulus <= self.tolerance


@dataclass(frozen=True)
class SupportSample:
    """A sampled support point and its level-set deviation |Phi*(s) - alpha|.

    deviation is None when the boundary value is undefined at the sample; the
    sample then passes only through the exemption list."""

    point: tuple
    deviation: float
    exempt: bool
    tolerance: float

    @property
    def passed(self) -> bool:
        if self.exempt:
            return True
        return self.deviation is not None and self.deviation <= self.tolerance


@dataclass(frozen=True)
class VerificationReport:
    identity_residuals: tuple = ()
    mass: MassCheck = None
    fourier: tuple = ()
    support: tuple = ()
    tolerances: dict = field(default_factory=dict)
    seed: int = None

    @property
    def passed(self) -> bool:
        sections = list(self.identity_residuals) + list(self.fourier) + list(self.support)
        if self.mass is not None:
            sections.append(self.mass)
        return all(item.passed for item in sections)

    def to_json_dict(self) -> dict:
        return {
            "identity_residuals": [
                {
                    "z": [_pair(c) for c in r.z],
                    "lhs": r.lhs,
                    "rhs": r.rhs,
                    "relative_error": r.relative_error,
                    "tolerance": r.tolerance,
                }
                for r in self.identity_residuals
            ],
            "mass": None
            if self.mass is None
            else {
                "computed": self.mass.computed,
                "expected": self.mass.expected,
                "error": self.mass.error,
                "tolerance": self.mass.tolerance,
            },
            "fourier": [
                {"k": [int(v) for v in e.k], "modulus": e.modulus, "tolerance": e.tolerance}
                for e in self.fourier
            ],
            "support": [
                {
                    "point": [_pair(c) for c in s.point],
                    "deviation": s.deviation,
                    "exempt": s.exempt,
                    "tolerance": s.tolerance,
                }
                for s in self.support
            ],
            "tolerances": dict(self.tolerances),
            "seed": self.seed,
            "passed": self.passed,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "VerificationReport":
        if not isinstance(data, dict):
            raise ValueError("report must be a JSON object")
        keys = {"identity_residuals", "mass", "fourier", "support",
                "tolerances", "seed", "passed"}
        if set(data) - keys:
            raise ValueError(f"unknown report fields: {sorted(set(data) - keys)}")

        def as_complex(pair):
            re, im = pair
            return complex(float(re), float(im))

        residuals = tuple(
            IdentityResidual(
                z=tuple(as_complex(p) for p in r["z"]),
                lhs=float(r["lhs"]),
                rhs=float(r["rhs"]),
                relative_error=float(r["relative_error"]),
                tolerance=float(r["tolerance"]),
            )
            for r in data.get("identity_residuals", ())
        )
        mass = data.get("mass")
        if mass is not None:
            mass = MassCheck(
                computed=float(mass["computed"]),
                expected=float(mass["expected"]),
                error=float(mass["error"]),
                tolerance=float(mass["tolerance"]),
            )
        fourier = tuple(
            FourierEntry(
                k=tuple(int(v) for v in e["k"]),
                modulus=float(e["modulus"]),
                tolerance=float(e["tolerance"]),
            )
            for e in data.get("fourier", ())
        )
        support = tuple(
            SupportSample(
                point=tuple(as_complex(p) for p in s["point"]),
                deviation=None if s["deviation"] is None else float(s["deviation"]),
                exempt=bool(s["exempt"]),
                tolerance=float(s["tolerance"]),
            )
            for s in data.get("support", ())
        )
        report = cls(
            identity_residuals=residuals,
            mass=mass,
            fourier=fourier,
            support=support,
            tolerances=dict(data.get("tolerances", {})),
            seed=data.get("seed"),
        )
        if "passed" in data and bool(data["passed"]) != report.passed:
            raise ValueError("stored pass flag disagrees with recorded residuals")
        return report


# ---------------------------------------------------------------------------
# Poisson integrators


def _antidiagonal_poisson(etas, weights, z1, z2, grid, tail_angles):
    """Quadrature of P_{z1}(zeta) P_{z2}(eta conj(zeta)) summed over atoms.

    |eta conj(zeta) - z2|^2 = 1 + |z2|^2 - 2 Re(eta conj(z2 zeta)), a rank-2
    update over (atom, node) pairs, so the denominator grid is a single
    matrix product per atom chunk.
    """
    n = grid.n_nodes
    zeta = grid.points()
    p1 = _poisson_1d(z1, zeta)
    u = np.conj(z2 * zeta)
    U = np.stack([u.real, -u.imag])
    base = 1.0 + abs(z2) ** 2
    num2 = 1.0 - abs(z2) ** 2
    full_parts, half_parts = [], []
    for lo in range(0, len(etas), _CHUNK_ROWS):
        chunk = etas[lo:lo + _CHUNK_ROWS]
        w = weights[lo:lo + _CHUNK_ROWS]
        E = np.stack([chunk.real, chunk.imag], axis=1)
        P2 = num2 / (base - 2.0 * (E @ U))
        full_parts.append(float(w @ (P2 @ p1)) / n)
        half_parts.append(float(w @ (P2[:, ::2] @ p1[::2])) / (n // 2))
    v_full = float(pairwise_sum(np.array(full_parts))) if full_parts else 0.0
    v_half = float(pairwise_sum(np.array(half_parts))) if half_parts else 0.0
    if tail_angles is not None:
        E = np.stack([np.cos(tail_angles), np.sin(tail_angles)], axis=1)
        rows = (num2 / (base - 2.0 * (E @ U))) @ p1 / n
        # omitted atoms sit within o(1-r) of the given accumulation angles,
        # where the per-antidiagonal integral varies by far less than 2x
        sup_tail = 2.0 * float(np.max(rows)) if len(rows) else 0.0
    else:
        sup_tail = _poisson_sup(z1) * _poisson_sup(z2)
    return v_full, v_half, sup_tail


def measure_integrator(mu: ClarkMeasure2D, grid: QuadratureGrid = None,
                       tail_angles=None):
    """z -> Poisson integral of mu with an error bound.

    Antidiagonal components run through the rank-2 fast path; graph and line
    components through the generic quadrature.  tail_angles, when given, are
    the accumulation angles of the omitted antidiagonal family and tighten
    the tail term from a global Poisson bound to a local one.
    """
    grid = grid if grid is not None else QuadratureGrid(DEFAULT_GRID_N)
    etas, weights, rest = [], [], []
    for comp in mu.curves:
        if isinstance(comp.kind, Antidiagonal):
            etas.append(comp.kind.eta.value)
            weights.append(comp.weight)
        else:
            rest.append(comp)
    etas = np.array(etas, dtype=complex)
    weights = np.array(weights, dtype=float)
    angles = None if tail_angles is None else np.asarray(tail_angles, dtype=float)
    remainder = None
    if rest or mu.lines:
        remainder = ClarkMeasure2D(curves=tuple(rest), lines=mu.lines, tail_bound=0.0)

    def integrate(z) -> IntegralResult:
        z1, z2 = (complex(c) for c in z)
        value, error = 0.0, 0.0
        if len(etas):
            v_full, v_half, sup_tail = _antidiagonal_poisson(
                etas, weights, z1, z2, grid, angles
            )
            value += v_full
            error += abs(v_full - v_half) + mu.tail_bound * sup_tail
        elif mu.tail_bound:
            error += mu.tail_bound * _poisson_sup(z1) * _poisson_sup(z2)
        if remainder is not None:
            def f(w1, w2):
                return _poisson_1d(z1, w1) * _poisson_1d(z2, w2)

            res = integrate_measure2d(remainder, f, grid)
            value += float(np.real(res.value))
            error += res.error_bound
        return IntegralResult(value, error)

    return integrate


def embed_integrator(em: EmbeddedClarkND, grid: QuadratureGrid = None,
                     tail_angles=None):
    """Poisson integrator for an embedded measure.

    d = 2 uses the antidiagonal fast path.  d >= 3 integrates over each
    subtorus {prod zeta_i = eta} as a circular convolution of the sampled
    one-variable Poisson kernels: the product of their DFTs evaluated as a
    trigonometric series at the atom angle, which is exactly the nested
    trapezoid rule on the free angles.
    """
    grid = grid if grid is not None else QuadratureGrid(DEFAULT_GRID_N)
    base = em.base
    if em.dimension == 2:
        etas = base.points_array()
        weights = base.weights_array()
        angles = None if tail_angles is None else np.asarray(tail_angles, dtype=float)

        def integrate2(z) -> IntegralResult:
            z1, z2 = (complex(c) for c in z)
            v_full, v_half, sup_tail = _antidiagonal_poisson(
                etas, weights, z1, z2, grid, angles
            )
            error = abs(v_full - v_half) + base.tail_bound * sup_tail
            return IntegralResult(v_full, error)

        return integrate2

    d = em.dimension
    atom_angles = np.array([p.theta for p, _ in base.atoms])
    weights = base.weights_array()
    angles = None if tail_angles is None else np.asarray(tail_angles, dtype=float)

    def convolved(z, zeta, n):
        spec = np.ones(n, dtype=complex)
        for zi in z:
            spec *= np.fft.fft(_poisson_1d(zi, zeta)) / n
        freqs = np.fft.fftfreq(n, d=1.0 / n)
        eval_angles = atom_angles if angles is None else np.concatenate([atom_angles, angles])
        values = np.empty(len(eval_angles))
        for lo in range(0, len(eval_angles), _CHUNK_ROWS):
            block = eval_angles[lo:lo + _CHUNK_ROWS]
            values[lo:lo + _CHUNK_ROWS] = np.real(np.exp(1j * np.outer(block, freqs)) @ spec)
        return values

    def integrate(z) -> IntegralResult:
        z = tuple(complex(c) for c in z)
        if len(z) != d:
            raise ValueError(f"expected {d} coordinates, got {len(z)}")
        n = grid.n_nodes
        zeta = grid.points()
        c_full = convolved(z, zeta, n)
        c_half = convolved(z, zeta[::2], n // 2)
        k = len(atom_angles)
        v_full = float(weights @ c_full[:k])
        v_half = float(weights @ c_half[:k])
        if angles is not None:
            sup_tail = 2.0 * float(np.max(c_full[k:])) if len(c_full) > k else 0.0
        else:
            sup_tail = math.prod(_poisson_sup(zi) for zi in z)
        error = abs(v_full - v_half) + base.tail_bound * sup_tail
        return IntegralResult(v_full, error)

    return integrate


def product_integrator(P: ProductInner, alpha, grid: QuadratureGrid = None,
                       K: int = 1000, split: bool = True):
    """Poisson integrator running through the product fiber quadrature."""
    grid = grid if grid is not None else QuadratureGrid(DEFAULT_GRID_N)
    alpha = _as_alpha(alpha)

    def integrate(z) -> IntegralResult:
        z1, z2 = (complex(c) for c in z)

        def f(w1, w2):
            return _poisson_1d(z1, w1) * _poisson_1d(z2, w2)

        f_split = None
        if split:
            f_split = (lambda w: _poisson_1d(z1, w), lambda w: _poisson_1d(z2, w))
        return product_clark_integrate(P, alpha, f, grid, K=K, f_split=f_split)

    return integrate


def _default_integrator(mu, grid):
    if isinstance(mu, EmbeddedClarkND):
        return embed_integrator(mu, grid), mu.dimension
    if isinstance(mu, ClarkMeasure2D):
        return measure_integrator(mu, grid), 2
    raise TypeError(f"no default integrator for {type(mu).__name__}")


# ---------------------------------------------------------------------------
# checks


def poisson_identity_check(mu, phi, alpha, test_points, grid: QuadratureGrid = None,
                           base_rel: float = EMBED_BASE_REL, integrate=None,
                           seed: int = None) -> VerificationReport:
    """Per-point residuals of the Poisson identity against herglotz_rhs.

    Each point passes when its relative error is within base_rel plus the
    integrator's reported error bound scaled by the right-hand side.
    """
    alpha = _as_alpha(alpha)
    if integrate is None:
        integrate, _ = _default_integrator(mu, grid)
    residuals = []
    for z in test_points:
        rhs = herglotz_rhs(phi, alpha, z)
        res = integrate(z)
        lhs = float(np.real(res.value))
        residuals.append(
            IdentityResidual(
                z=tuple(complex(c) for c in z),
                lhs=lhs,
                rhs=rhs,
                relative_error=abs(lhs - rhs) / rhs,
                tolerance=base_rel + res.error_bound / rhs,
            )
        )
    return VerificationReport(
        identity_residuals=tuple(residuals),
        tolerances={"identity_base_rel": base_rel},
        seed=seed,
    )


def total_mass_check(mu, phi, alpha, grid: QuadratureGrid = None,
                     base_abs: float = 1e-8, integrate=None,
                     dimension: int = None) -> MassCheck:
    """Total mass against the Herglotz quotient at the origin.

    The Poisson kernel is 1 at z = 0, so the mass is the identity integrand
    there and this check equals the z = 0 identity residual exactly.
    """
    alpha = _as_alpha(alpha)
    if integrate is None:
        integrate, inferred = _default_integrator(mu, grid)
        dimension = dimension if dimension is not None else inferred
    elif dimension is None:
        dimension = 2
    origin = (0j,) * dimension
    expected = herglotz_rhs(phi, alpha, origin)
    res = integrate(origin)
    computed = float(np.real(res.value))
    return MassCheck(
        computed=computed,
        expected=expected,
        error=abs(computed - expected),
        tolerance=base_abs + res.error_bound,
    )


def support_inclusion_check(mu: ClarkMeasure2D, boundary_map, alpha,
                            samples_per_component: int = 16,
                            exemptions=(), tolerance: float = SUPPORT_TOL):
    """Samples of every positive-weight component checked against the level
    set: |Phi*(s) - alpha| <= tolerance, unless s is within tolerance of a
    declared singular/accumulation point.

    boundary_map maps a torus point pair to Phi* there, or None where the
    nontangential value does not exist.
    """
    alpha_value = _as_alpha(alpha).alpha
    m = int(samples_per_component)
    thetas = np.mod(0.37 + TWO_PI * np.arange(m) / m, TWO_PI)
    zeta = np.exp(1j * thetas)
    exempt_points = [
        tuple(p.value if isinstance(p, TorusPoint) else complex(p) for p in pair)
        for pair in exemptions
    ]

    def is_exempt(point):
        return any(
            max(abs(point[0] - e[0]), abs(point[1] - e[1])) <= tolerance
            for e in exempt_points
        )

    def record(point):
        value = boundary_map(point)
        deviation = None if value is None else float(abs(complex(value) - alpha_value))
        samples.append(
            SupportSample(point=point, deviation=deviation,
                          exempt=is_exempt(point), tolerance=tolerance)
        )

    samples = []
    for comp in mu.curves:
        if isinstance(comp.kind, Antidiagonal) and comp.weight == 0.0:
            continue
        z2 = comp.second_coordinate(zeta)
        for j in range(m):
            if not (np.isfinite(z2[j].real) and np.isfinite(z2[j].imag)):
                continue
            record((complex(zeta[j]), complex(z2[j])))
    for line in mu.lines:
        for j in range(m):
            record((line.tau.value, complex(zeta[j])))
    return tuple(samples)


def fourier_rp_check(mu: ClarkMeasure2D, kmax: int, grid: QuadratureGrid = None,
                     base_tol: float = FOURIER_BASE_TOL):
    """Mixed-sign Fourier coefficients of the measure.

    For a Clark measure of an inner function all of them vanish; each entry's
    tolerance is base_tol plus the measure's tail bound plus the grid-halving
    estimate of its own quadrature.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    grid = grid if grid is not None else QuadratureGrid(DEFAULT_GRID_N)
    n = grid.n_nodes
    zeta = grid.points()
    allowed = max_undefined_nodes(n)

    etas, weights, graph_data = [], [], []
    for comp in mu.curves:
        if isinstance(comp.kind, Antidiagonal):
            etas.append(comp.kind.eta.value)
            weights.append(comp.weight)
            continue
        g = comp.second_coordinate(zeta)
        w = comp.weight_values(zeta)
        mask = np.isfinite(g) & np.isfinite(w)
        if n - int(mask.sum()) > allowed:
            raise ValueError("graph component undefined on too many nodes")
        graph_data.append((g, w, mask))
    etas = np.array(etas, dtype=complex)
    weights = np.array(weights, dtype=float)

    moments = {m: complex(np.mean(zeta ** m)) for m in range(-2 * kmax, 2 * kmax + 1)}
    moments_half = {m: complex(np.mean(zeta[::2] ** m)) for m in moments}

    pairs = [
        (k1, k2)
        for k1 in range(-kmax, kmax + 1)
        for k2 in range(-kmax, kmax + 1)
        if k1 * k2 < 0
    ]
    entries = []
    for k1, k2 in pairs:
        val = 0j
        val_half = 0j
        if len(etas):
            a = complex(weights @ etas ** (-k2))
            val += a * moments[k2 - k1]
            val_half += a * moments_half[k2 - k1]
        for g, w, mask in graph_data:
            with np.errstate(all="ignore"):
                nodes = w * zeta ** (-k1) * g ** (-k2)
            clean = nodes[mask]
            val += complex(pairwise_sum(clean)) / len(clean)
            half_mask = mask[::2]
            clean_half = nodes[::2][half_mask]
            val_half += complex(pairwise_sum(clean_half)) / len(clean_half)
        for line in mu.lines:
            contrib = line.constant * line.tau.value ** (-k1)
            val += contrib * moments[-k2]
            val_half += contrib * moments_half[-k2]
        entries.append(
            FourierEntry(
                k=(k1, k2),
                modulus=float(abs(val)),
                tolerance=base_tol + mu.tail_bound + float(abs(val - val_half)),
            )
        )
    return tuple(entries)


def product_fourier_rp_check(P: ProductInner, alpha, kmax: int,
                             grid: QuadratureGrid = None, K: int = 1000,
                             base_tol: float = FOURIER_BASE_TOL):
    """Mixed-sign Fourier coefficients of a product measure.

    Branch graphs of a singular fiber oscillate without bound near the
    fiber atom, so sampling the curve components on a grid cannot converge
    there.  Each coefficient is instead integrated by the product path,
    whose substitution flattens the fiber oscillation; the integrator's
    reported bound is the tolerance term.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    alpha = _as_alpha(alpha)
    grid = grid if grid is not None else QuadratureGrid(DEFAULT_GRID_N)
    entries = []
    for k1 in range(-kmax, kmax + 1):
        for k2 in range(-kmax, kmax + 1):
            if k1 * k2 >= 0:
                continue

            def f(z1, z2, m1=k1, m2=k2):
                return z1 ** (-m1) * z2 ** (-m2)

            f_split = (lambda w, m=k1: w ** (-m), lambda w, m=k2: w ** (-m))
            res = product_clark_integrate(P, alpha, f, grid, K=K, f_split=f_split)
            entries.append(
                FourierEntry(
                    k=(k1, k2),
                    modulus=float(abs(res.value)),
                    tolerance=base_tol + res.error_bound,
                )
            )
    return tuple(entries)


# ---------------------------------------------------------------------------
# boundary maps for the support check


def embedding_boundary_map(phi: InnerFunction1D, d: int = 2):
    """(s_1, ..., s_d) -> phi*(s_1 ... s_d), None where undefined."""

    def rule(point):
        w = 1.0 + 0.0j
        for c in point:
            w *= complex(c)
        bv = boundary_value(phi, TorusPoint.from_complex(w, tol=1e-6))
        return bv.value if isinstance(bv, Unimodular) else None

    return rule


def product_boundary_map(P: ProductInner):
    def rule(point):
        z1, z2 = point
        b1 = boundary_value(P.phi, TorusPoint.from_complex(complex(z1), tol=1e-6))
        b2 = boundary_value(P.psi, TorusPoint.from_complex(complex(z2), tol=1e-6))
        if isinstance(b1, Unimodular) and isinstance(b2, Unimodular):
            return b1.value * b2.value
        return None

    return rule


def rif_boundary_map(R: RIF_n1):
    def rule(point):
        try:
            return rif_boundary_value(R, point)
        except RIFError:
            return None

    return rule
