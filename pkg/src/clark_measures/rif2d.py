"""Clark measures of bidegree-(n,1) rational inner functions on the bidisc.

phi(z) = (z_2 q1(z_1) + q2(z_1)) / (p1(z_1) + z_2 p2(z_1)) where q1, q2 are
the degree-n reflections of p1, p2 and the denominator has no zeros on the
open bidisc.  Solving phi* = alpha on the torus gives a single graph branch
zeta -> conj(B_alpha(zeta)) weighted by W_alpha; at exceptional alpha
(nontangential values of phi at denominator singularities on the torus) the
measure also carries vertical Lebesgue lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npp

from .torus_core import (
    ClarkMeasure2D,
    CurveComponent,
    Graph,
    LineComponent,
    QuadratureGrid,
    TorusPoint,
    UnimodularConstant,
    circle_distance,
)

__all__ = [
    "Poly1",
    "RIF_n1",
    "LevelRational",
    "RIFError",
    "reflect",
    "rif_map",
    "b_alpha",
    "w_alpha",
    "w_alpha_values",
    "singularities",
    "exceptional_values",
    "line_constant",
    "rif_clark_measure",
    "rif_boundary_value",
]

_STABILITY_ANGLES = 4096
_STABILITY_FLOOR = 1e-10
_ATORAL_FLOOR = 1e-10
_TORUS_TOL = 1e-8
_DENOMINATOR_FLOOR = 1e-14
_EXCEPTIONAL_SNAP = 1e-6


class RIFError(ValueError):
    """Invalid rational inner data: unstable, non-atoral, or ill-posed."""


@dataclass(frozen=True)
class Poly1:
    """Univariate polynomial with ascending complex coefficients."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if not coeffs:
            coeffs = (0j,)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def is_zero(self) -> bool:
        return self.coefficients == (0j,)

    @property
    def degree(self) -> int:
        return -1 if self.is_zero else len(self.coefficients) - 1

    def __call__(self, z):
        scalar = np.isscalar(z) or isinstance(z, complex)
        out = npp.polyval(np.asarray(z, dtype=complex), np.array(self.coefficients))
        return complex(out) if scalar else out

    def derivative(self) -> "Poly1":
        return Poly1(tuple(npp.polyder(np.array(self.coefficients))))

    def scale(self, factor: complex) -> "Poly1":
        return Poly1(tuple(factor * c for c in self.coefficients))


def _root_candidates(q: Poly1) -> np.ndarray:
    """Roots of q with negligible leading coefficients dropped first.

    A leading coefficient many orders below the largest one only carries
    far-away roots but overflows the companion matrix; trimming moves torus
    roots by less than the 1e-8 residual filters downstream.
    """
    coeffs = np.array(q.coefficients)
    scale = float(np.max(np.abs(coeffs)))
    if scale == 0.0:
        return np.array([], dtype=complex)
    keep = len(coeffs)
    while keep > 1 and abs(coeffs[keep - 1]) <= 1e-14 * scale:
        keep -= 1
    if keep < 2:
        return np.array([], dtype=complex)
    return npp.polyroots(coeffs[:keep])


def _poly_sub(a: Poly1, b: Poly1) -> Poly1:
    return Poly1(tuple(npp.polysub(np.array(a.coefficients), np.array(b.coefficients))))


def _poly_mul(a: Poly1, b: Poly1) -> Poly1:
    return Poly1(tuple(npp.polymul(np.array(a.coefficients), np.array(b.coefficients))))


def reflect(q: Poly1, n: int) -> Poly1:
    """Degree-n reflection z^n conj(q)(1/conj(z)): conjugate-reversed coefficients."""
    if q.degree > n:
        raise ValueError(f"cannot reflect degree {q.degree} at degree {n}")
    if q.is_zero:
        return Poly1((0j,))
    padded = list(q.coefficients) + [0j] * (n - q.degree)
    return Poly1(tuple(c.conjugate() for c in reversed(padded)))


def _autocorrelation(q: Poly1) -> np.ndarray:
    """Coefficients a_m of |q(e^{i theta})|^2 = sum a_m e^{i m theta}, m = -d..d."""
    c = np.array(q.coefficients, dtype=complex)
    return np.correlate(c, c, mode="full")


def _trig_eval(corr: np.ndarray, theta, order: int = 0):
    d = (len(corr) - 1) // 2
    m = np.arange(-d, d + 1)
    factor = (1j * m) ** order if order else np.ones_like(m)
    theta_arr = np.asarray(theta, dtype=float)
    phases = np.exp(1j * np.outer(theta_arr.ravel(), m))
    out = phases @ (corr * factor)
    out = out.real.reshape(theta_arr.shape)
    return float(out) if np.isscalar(theta) else out


@dataclass(frozen=True)
class RIF_n1:
    """Stable, atoral denominator data p(z) = p1(z_1) + z_2 p2(z_1) of z_1-degree n."""

    p1: Poly1
    p2: Poly1
    n: int

    def __post_init__(self):
        p1 = self.p1 if isinstance(self.p1, Poly1) else Poly1(tuple(self.p1))
        p2 = self.p2 if isinstance(self.p2, Poly1) else Poly1(tuple(self.p2))
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)
        n = int(self.n)
        object.__setattr__(self, "n", n)
        if n < 1:
            raise RIFError("bidegree (n,1) needs n >= 1")
        if max(p1.degree, p2.degree) > n:
            raise RIFError(
                f"z_1-degree max(deg p1, deg p2) = {max(p1.degree, p2.degree)} exceeds n = {n}"
            )
        if p1.is_zero:
            raise RIFError("p1 must be nonzero (p(0,0) = p1(0) = 0 is unstable)")
        # Stability: p is linear in z_2, so p has a zero in the open bidisc
        # iff p1 has one in the open disc, or |p2| > |p1| somewhere on the
        # circle (max modulus applied to p2/p1).  The circle comparison is a
        # degree-n trig polynomial, so dense samples certify its sign.
        if p1.degree >= 1:
            roots = npp.polyroots(np.array(p1.coefficients))
            if np.any(np.abs(roots) < 1.0 - 1e-10):
                raise RIFError("p1 vanishes inside the disc (unstable)")
        angles = 2.0 * math.pi * np.arange(_STABILITY_ANGLES) / _STABILITY_ANGLES
        circle = np.exp(1j * angles)
        deficit = np.abs(p2(circle)) ** 2 - np.abs(p1(circle)) ** 2
        scale = max(float(np.max(np.abs(p1(circle)) ** 2)), 1.0)
        if float(np.max(deficit)) > _STABILITY_FLOOR * scale:
            raise RIFError("|p2| exceeds |p1| on the circle (unstable)")
        resultant = _poly_sub(
            _poly_mul(p1, reflect(p1, n)), _poly_mul(p2, reflect(p2, n))
        )
        if float(np.max(np.abs(np.array(resultant.coefficients)))) <= _ATORAL_FLOOR:
            raise RIFError("p and its reflection share a factor (non-atoral)")
        object.__setattr__(self, "_p1t", reflect(p1, n))
        object.__setattr__(self, "_p2t", reflect(p2, n))
        object.__setattr__(self, "_resultant", resultant)

    @property
    def p1_reflected(self) -> Poly1:
        return self._p1t

    @property
    def p2_reflected(self) -> Poly1:
        return self._p2t

    def denominator(self, z1, z2):
        return self.p1(z1) + np.asarray(z2) * self.p2(z1)

    def numerator(self, z1, z2):
        return np.asarray(z2) * self._p1t(z1) + self._p2t(z1)

    def to_json_dict(self) -> dict:
        return {
            "p1": [[c.real, c.imag] for c in self.p1.coefficients],
            "p2": [[c.real, c.imag] for c in self.p2.coefficients],
            "n": self.n,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "RIF_n1":
        if not isinstance(data, dict):
            raise ValueError("rational inner data must be an object")
        unknown = set(data) - {"p1", "p2", "n"}
        if unknown:
            raise ValueError(f"unknown keys: {sorted(unknown)}")
        if "p1" not in data or "p2" not in data or "n" not in data:
            raise ValueError("rational inner data needs p1, p2, and n")
        n = data["n"]
        if isinstance(n, bool) or not isinstance(n, int):
            raise ValueError("n must be an integer")

        def poly(key):
            seq = data[key]
            if not isinstance(seq, list):
                raise ValueError(f"{key} must be a list of [re, im] pairs")
            coeffs = []
            for pair in seq:
                if (
                    not isinstance(pair, list)
                    or len(pair) != 2
                    or not all(
                        isinstance(v, (int, float)) and not isinstance(v, bool)
                        for v in pair
                    )
                ):
                    raise ValueError(f"{key} entries must be [re, im] number pairs")
                coeffs.append(complex(pair[0], pair[1]))
            return Poly1(tuple(coeffs) if coeffs else (0j,))

        return cls(p1=poly("p1"), p2=poly("p2"), n=n)


def rif_map(R: RIF_n1):
    """The evaluable rule z -> phi(z) on the open bidisc."""

    def rule(z) -> complex:
        z1, z2 = z
        if not (abs(complex(z1)) < 1 and abs(complex(z2)) < 1):
            raise ValueError("rif_map evaluates interior points only")
        return complex(R.numerator(z1, z2) / R.denominator(z1, z2))

    return rule


@dataclass(frozen=True)
class LevelRational:
    """The one-variable rational function B whose conjugate graphs the level set.

    shared_torus_roots flags angles where numerator and denominator vanish
    together (degenerate alpha at an exceptional value); the curve rule
    returns NaN there.
    """

    num: Poly1
    den: Poly1
    shared_torus_roots: tuple

    def __call__(self, z):
        scalar = np.isscalar(z) or isinstance(z, complex)
        z_arr = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            num = self.num(z_arr)
            den = self.den(z_arr)
            out = np.where(np.abs(den) < _DENOMINATOR_FLOOR, np.nan + 0j, num / den)
        return complex(out[()]) if scalar else out

    @property
    def degenerate(self) -> bool:
        return bool(self.shared_torus_roots)

    def curve_rule(self):
        """zeta -> conj(B(zeta)), the second coordinate of the level curve."""

        def rule(zeta):
            return np.conj(self(zeta))

        return rule


def b_alpha(R: RIF_n1, alpha: UnimodularConstant) -> LevelRational:
    """B_alpha = (q1 - alpha p2)/(alpha p1 - q2), q = reflected p."""
    num = _poly_sub(R.p1_reflected, R.p2.scale(alpha.alpha))
    den = _poly_sub(R.p1.scale(alpha.alpha), R.p2_reflected)
    shared = []
    if num.degree >= 1 and den.degree >= 1:
        for root in _root_candidates(num):
            if abs(abs(root) - 1.0) > _TORUS_TOL:
                continue
            if abs(den(complex(root))) < _TORUS_TOL * max(
                1.0, float(np.max(np.abs(np.array(den.coefficients))))
            ):
                shared.append(TorusPoint.from_complex(root, tol=_TORUS_TOL))
    return LevelRational(num=num, den=den, shared_torus_roots=tuple(shared))


def _weight_correlations(R: RIF_n1, alpha: UnimodularConstant):
    num_corr_1 = _autocorrelation(R.p1)
    num_corr_2 = _autocorrelation(R.p2)
    width = max(len(num_corr_1), len(num_corr_2))
    num_corr = np.zeros(width, dtype=complex)
    pad1 = (width - len(num_corr_1)) // 2
    pad2 = (width - len(num_corr_2)) // 2
    num_corr[pad1:width - pad1] += num_corr_1
    num_corr[pad2:width - pad2] -= num_corr_2
    den_poly = _poly_sub(R.p1_reflected, R.p2.scale(alpha.alpha))
    den_corr = _autocorrelation(den_poly)
    if len(den_corr) < width:
        pad = (width - len(den_corr)) // 2
        den_corr = np.pad(den_corr, (pad, pad))
    elif len(den_corr) > width:
        num_corr = np.pad(num_corr, ((len(den_corr) - width) // 2,) * 2)
    return num_corr, den_corr


def _limit_ratio(num_corr, den_corr, theta: float) -> float:
    """lim num/den at theta for vanishing trig-polynomial denominators."""
    d = (len(den_corr) - 1) // 2
    scale = float(np.sum(np.abs(den_corr)))
    for order in range(1, 2 * d + 1):
        den_val = _trig_eval(den_corr, theta, order)
        if abs(den_val) > 1e-8 * scale * max(1.0, d) ** order:
            return max(_trig_eval(num_corr, theta, order) / den_val, 0.0)
    raise RIFError(f"weight limit does not resolve at angle {theta}")


def w_alpha(R: RIF_n1, alpha: UnimodularConstant, zeta: TorusPoint) -> float:
    """W_alpha(zeta) = (|p1|^2 - |p2|^2)/|q1 - alpha p2|^2, with the limiting
    value substituted where the denominator vanishes (exceptional alpha)."""
    num_corr, den_corr = _weight_correlations(R, alpha)
    den = _trig_eval(den_corr, zeta.theta)
    if den > _DENOMINATOR_FLOOR:
        return max(_trig_eval(num_corr, zeta.theta) / den, 0.0)
    return _limit_ratio(num_corr, den_corr, zeta.theta)


def w_alpha_values(R: RIF_n1, alpha: UnimodularConstant, zeta) -> np.ndarray:
    """Vectorized W_alpha over an array of unimodular points."""
    zeta = np.asarray(zeta, dtype=complex)
    thetas = np.mod(np.angle(zeta), 2.0 * math.pi)
    num_corr, den_corr = _weight_correlations(R, alpha)
    num = _trig_eval(num_corr, thetas)
    den = _trig_eval(den_corr, thetas)
    with np.errstate(all="ignore"):
        out = np.where(den > _DENOMINATOR_FLOOR, num / np.where(den > 0, den, 1.0), np.nan)
    out = np.maximum(out, 0.0)
    for idx in np.flatnonzero(~np.isfinite(out)):
        out[idx] = _limit_ratio(num_corr, den_corr, float(thetas[idx]))
    return out


def _refined_cluster_root(resultant: Poly1, cluster: np.ndarray) -> complex:
    """Newton-refine a multiplicity-m cluster on the (m-1)-th derivative."""
    poly = resultant
    for _ in range(len(cluster) - 1):
        poly = poly.derivative()
    dpoly = poly.derivative()
    z = complex(np.mean(cluster))
    for _ in range(100):
        val, slope = poly(z), dpoly(z)
        if abs(slope) == 0.0:
            break
        step = val / slope
        z -= step
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            break
    return z


def singularities(R: RIF_n1):
    """Common torus zeros of p and its reflection, as (tau, gamma) pairs.

    Roots of the z_2-resultant are clustered (np.roots scatters a
    multiplicity-m torus root by ~eps^(1/m)), each cluster Newton-refined on
    the matching derivative, then held to the 1e-8 torus filter.
    """
    res = R._resultant
    if res.degree < 1:
        return ()
    roots = _root_candidates(res)
    near = [r for r in roots if abs(abs(r) - 1.0) <= 1e-3]
    clusters = []
    for r in sorted(near, key=lambda w: np.angle(w)):
        if clusters and abs(r - clusters[-1][-1]) < 1e-2:
            clusters[-1].append(r)
        else:
            clusters.append([r])
    if len(clusters) > 1 and abs(clusters[0][0] - clusters[-1][-1]) < 1e-2:
        clusters[0].extend(clusters.pop())
    found = []
    for cluster in clusters:
        z1 = _refined_cluster_root(res, np.array(cluster))
        if abs(abs(z1) - 1.0) > _TORUS_TOL:
            continue
        tau = TorusPoint.from_complex(z1, tol=_TORUS_TOL)
        p2_val = R.p2(tau.value)
        if abs(p2_val) < 1e-12:
            continue
        z2 = -R.p1(tau.value) / p2_val
        if abs(abs(z2) - 1.0) > _TORUS_TOL:
            continue
        gamma = TorusPoint.from_complex(z2, tol=_TORUS_TOL)
        if abs(R.denominator(tau.value, gamma.value)) > _TORUS_TOL or abs(
            R.numerator(tau.value, gamma.value)
        ) > _TORUS_TOL:
            continue
        if not any(tau.close_to(t, 1e-8) and gamma.close_to(g, 1e-8) for t, g in found):
            found.append((tau, gamma))
    return tuple(found)


def _radial_limit(values_at):
    """Richardson-extrapolated limit of values_at(r) along r = 1 - 2^-m."""
    previous = None
    extrapolated = None
    for m in range(4, 25):
        current = complex(values_at(1.0 - 2.0 ** (-m)))
        if previous is not None:
            nxt = 2.0 * current - previous
            if extrapolated is not None and abs(nxt - extrapolated) < 1e-9:
                return nxt
            extrapolated = nxt
        previous = current
    raise RIFError("radial limit did not converge")


def rif_boundary_value(R: RIF_n1, zeta) -> complex:
    """phi*(zeta) on the torus; radial extrapolation at singular points."""
    t1, t2 = zeta
    z1 = t1.value if isinstance(t1, TorusPoint) else complex(t1)
    z2 = t2.value if isinstance(t2, TorusPoint) else complex(t2)
    den = R.denominator(z1, z2)
    scale = max(
        float(np.max(np.abs(np.array(R.p1.coefficients)))),
        float(np.max(np.abs(np.array(R.p2.coefficients)))),
    )
    if abs(den) > 1e-10 * scale:
        return complex(R.numerator(z1, z2) / den)
    return _radial_limit(lambda r: R.numerator(r * z1, r * z2) / R.denominator(r * z1, r * z2))


def exceptional_values(R: RIF_n1):
    """Nontangential values of phi at its torus singularities, deduplicated."""
    values = []
    for tau, gamma in singularities(R):
        limit = _radial_limit(
            lambda r: R.numerator(r * tau.value, r * gamma.value)
            / R.denominator(r * tau.value, r * gamma.value)
        )
        alpha = UnimodularConstant.from_complex(limit, tol=1e-6)
        if not any(circle_distance(alpha.nu, v.nu) < 1e-8 for v in values):
            values.append(alpha)
    return tuple(values)


def _dphi_dz1(R: RIF_n1, z1: complex, z2: complex) -> complex:
    p1d, p2d = R.p1.derivative(), R.p2.derivative()
    q1d, q2d = R.p1_reflected.derivative(), R.p2_reflected.derivative()
    n_val = R.numerator(z1, z2)
    d_val = R.denominator(z1, z2)
    n_der = z2 * q1d(z1) + q2d(z1)
    d_der = p1d(z1) + z2 * p2d(z1)
    return (n_der * d_val - n_val * d_der) / (d_val * d_val)


def line_constant(R: RIF_n1, tau: TorusPoint) -> float:
    """1/|dphi/dz_1(tau, .)|, checked z_2-independent along the line."""
    samples = np.exp(1j * (0.37 + 2.0 * math.pi * np.arange(16) / 16))
    sing_z2 = [g.value for t, g in singularities(R) if t.close_to(tau, 1e-8)]
    moduli = []
    for z2 in samples:
        if any(abs(z2 - g) < 1e-3 for g in sing_z2):
            continue
        moduli.append(abs(_dphi_dz1(R, tau.value, complex(z2))))
    moduli = np.array(moduli)
    spread = float(np.max(moduli) - np.min(moduli))
    if spread > 1e-8 * max(1.0, float(np.max(moduli))):
        raise RIFError(f"line slope is not constant along z_1 = {tau.value}")
    slope = float(np.mean(moduli))
    if slope <= 0:
        raise RIFError("vanishing line slope")
    return 1.0 / slope


def rif_clark_measure(
    R: RIF_n1,
    alpha: UnimodularConstant,
    grid: QuadratureGrid = None,
) -> ClarkMeasure2D:
    """Graph component with weight W_alpha; plus Lebesgue lines when alpha is
    (within 1e-6 of) an exceptional value.  tail_bound is 0: nothing truncated."""
    snapped, is_exceptional = alpha, False
    for value in exceptional_values(R):
        if circle_distance(alpha.nu, value.nu) <= _EXCEPTIONAL_SNAP:
            snapped, is_exceptional = value, True
            break
    level = b_alpha(R, snapped)
    weight_rule = lambda zeta: w_alpha_values(R, snapped, zeta)  # noqa: E731
    curve = CurveComponent(kind=Graph(level.curve_rule()), weight=weight_rule)
    lines = []
    if is_exceptional:
        for tau, gamma in singularities(R):
            value = _radial_limit(
                lambda r: R.numerator(r * tau.value, r * gamma.value)
                / R.denominator(r * tau.value, r * gamma.value)
            )
            if circle_distance(math.atan2(value.imag, value.real), snapped.nu) < 1e-8:
                lines.append(LineComponent(tau=tau, constant=line_constant(R, tau)))
    return ClarkMeasure2D(curves=(curve,), lines=tuple(lines), tail_bound=0.0)
