"""Clark measures of product functions Psi(z) = phi(z_1) psi(z_2).

The measure integrates f by an outer quadrature in one coordinate and, at
each node, the 1D Clark measure of the other factor at the rotated level
beta = alpha conj(outer factor boundary value).  Three evaluation paths:

* both factors Blaschke-type: batched companion-matrix fibers,
* exactly one atomic-singular factor: that factor is always taken as the
  fiber (its closed-form atom family is uniformly accurate), the Blaschke
  factor as the smooth outer coordinate,
* both atomic-singular: the outer circle is unrolled to the real line via
  x = c cot(theta/2), where the fiber atoms become translated Lorentzians;
  folding the line back to [0, 2pi) gives a smooth periodic integrand with
  closed-form wrapped-kernel truncation corrections and a Richardson step
  in the layer count.

Closed-form branch families are provided for the two classical examples
(exp x exp and Blaschke-pair x exp) and cross-checked against the generic
solver in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clark1d import (
    DEFAULT_TRUNCATION,
    UnsupportedFunctionError,
    clark_measure1d,
)
from .inner1d import (
    InnerFunction1D,
    Unimodular,
    boundary_value,
    boundary_values_array,
    eval_inner,
)
from .torus_core import (
    ClarkMeasure2D,
    CurveComponent,
    DiscreteMeasure1D,
    Graph,
    IntegralResult,
    QuadratureGrid,
    TorusPoint,
    UnimodularConstant,
    max_undefined_nodes,
    pairwise_sum,
)

__all__ = [
    "ProductInner",
    "BranchFamily",
    "SkipNode",
    "BranchCollisionError",
    "product_map",
    "fiber_measure",
    "product_clark_integrate",
    "product_branch_family",
    "product_branch_measure",
    "expexp_branches",
    "blaschke_exp_branches",
    "branch_curves",
]

TWO_PI = 2.0 * math.pi
PRODUCT_TRUNCATION = 1000
_GENERAL_PATH_MAX_LAYERS = 128


class SkipNode(Exception):
    """Raised at outer nodes where the outer factor's boundary value is 0."""


class BranchCollisionError(ValueError):
    """Two closed-form branches collide (vanishing discriminant)."""


def _supported_factor(psi: InnerFunction1D) -> str:
    if psi.is_blaschke_type and psi.degree >= 1:
        return "blaschke"
    if psi.degree == 0 and len(psi.singular_atoms) == 1:
        return "singular"
    raise UnsupportedFunctionError(
        "factor must be Blaschke-type of degree >= 1 or a single singular atom"
    )


@dataclass(frozen=True)
class ProductInner:
    """Product inner function phi(z_1) psi(z_2) with discrete fiber measures."""

    phi: InnerFunction1D
    psi: InnerFunction1D

    def __post_init__(self):
        _supported_factor(self.psi)

    def kinds(self):
        return _supported_factor(self.phi), _supported_factor(self.psi)

    def to_json_dict(self) -> dict:
        return {"phi": self.phi.to_json_dict(), "psi": self.psi.to_json_dict()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "ProductInner":
        if not isinstance(data, dict):
            raise ValueError("product spec must be a JSON object")
        if set(data) != {"phi", "psi"}:
            raise ValueError("product spec must have exactly the keys 'phi' and 'psi'")
        return cls(
            phi=InnerFunction1D.from_json_dict(data["phi"]),
            psi=InnerFunction1D.from_json_dict(data["psi"]),
        )


@dataclass(frozen=True)
class BranchFamily:
    """Closed-form or solver-backed branch parameterization of the level set.

    branches holds (g, W) pairs of vectorized rules of the outer coordinate;
    index_range is the (k_min, k_max) window for Z-indexed families.
    """

    kind: str
    branches: tuple
    index_range: tuple = None
    tail_bound: float = 0.0


def product_map(P: ProductInner):
    """The evaluable rule (z_1, z_2) -> phi(z_1) psi(z_2)."""

    def rule(z) -> complex:
        z1, z2 = z
        return eval_inner(P.phi, z1) * eval_inner(P.psi, z2)

    return rule


def fiber_measure(
    P: ProductInner,
    zeta1: TorusPoint,
    alpha: UnimodularConstant,
    K: int = None,
) -> DiscreteMeasure1D:
    """1D Clark measure of psi at the level alpha conj(phi*(zeta1))."""
    bv = boundary_value(P.phi, zeta1)
    if not isinstance(bv, Unimodular):
        raise SkipNode(f"phi* vanishes at angle {zeta1.theta!r}")
    beta = UnimodularConstant.from_complex(alpha.alpha * bv.value.conjugate())
    return clark_measure1d(P.psi, beta, DEFAULT_TRUNCATION if K is None else K)


# ---------------------------------------------------------------------------
# closed-form branch families


def expexp_branches(nu: float, k: int):
    """Level-set branch of exp(-(1+z1)/(1-z1)) exp(-(1+z2)/(1-z2)) at e^{i nu}.

    Returns (g, W): z_2 = g(zeta) solves psi*(z_2) = e^{i nu} conj(phi*(zeta))
    on the k-th sheet, and W is the fiber weight 1/|psi'(g)|.  Both rules are
    vectorized over unimodular arrays and satisfy g(1) = 1, W(1) = 0.
    """
    s = float(nu) + TWO_PI * int(k)

    def g(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        a = s * (zeta - 1.0)
        return (a + 2j) / (a + 2j * zeta)

    def W(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        a = s * (zeta - 1.0)
        return 2.0 * np.abs(zeta - 1.0) ** 2 / np.abs(a + 2j * zeta) ** 2

    return g, W


def _blaschke_pair_roots(beta, lam: complex):
    """Roots of z^2 - (lam + beta conj(lam)) z + beta = 0, vectorized."""
    beta = np.asarray(beta, dtype=complex)
    b = lam + beta * np.conj(lam)
    disc = b * b - 4.0 * beta
    bad = np.abs(disc) <= 1e-12
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise BranchCollisionError(f"discriminant vanishes at sample index {idx}")
    root = np.sqrt(disc)
    return 0.5 * (b + root), 0.5 * (b - root)


def _blaschke_pair_weight(g, lam: complex):
    # 1/|psi'| for psi(z) = z (lam - z)/(1 - conj(lam) z)
    g = np.asarray(g, dtype=complex)
    return np.abs(1.0 - np.conj(lam) * g) ** 2 / np.abs(
        np.conj(lam) * g * g - 2.0 * g + lam
    )


def blaschke_exp_branches(lam, nu: float):
    """Two level-set branches of exp(-(1+z1)/(1-z1)) * [z2 (lam-z2)/(1-conj(lam) z2)].

    Solving psi*(z_2) = beta(zeta) with beta = e^{i nu} e^{i cot(theta/2)} is a
    quadratic; the two roots are labeled at the base point zeta = -1 by the
    sign of the square root and continued by nearest-neighbor matching along
    the input array.  Rules return NaN at zeta = 1 (the level set's
    accumulation line).
    """
    lam = lam.value if hasattr(lam, "value") else complex(lam)
    if abs(lam) >= 1:
        raise ValueError("Blaschke parameter must lie inside the disc")
    nu = float(nu)

    def _beta(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        theta = np.angle(zeta)
        with np.errstate(divide="ignore", invalid="ignore"):
            x = 1.0 / np.tan(0.5 * theta)
            out = np.exp(1j * (nu + x))
            out = np.where(np.abs(zeta - 1.0) < 1e-12, np.nan + 0j, out)
        return out

    def _tracked_roots(zeta):
        zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
        beta = _beta(zeta)
        ok = ~np.isnan(beta)
        r_plus = np.full(zeta.shape, np.nan + 0j)
        r_minus = np.full(zeta.shape, np.nan + 0j)
        if ok.any():
            rp, rm = _blaschke_pair_roots(beta[ok], lam)
            r_plus[ok], r_minus[ok] = rp, rm
        base_plus, base_minus = _blaschke_pair_roots(np.array([_beta(-1.0 + 0j)]), lam)
        prev = (complex(base_plus[0]), complex(base_minus[0]))
        out0 = np.empty_like(r_plus)
        out1 = np.empty_like(r_minus)
        for j in range(len(zeta)):
            a, b = r_plus[j], r_minus[j]
            if np.isnan(a):
                out0[j] = out1[j] = np.nan + 0j
                continue
            keep = abs(a - prev[0]) + abs(b - prev[1])
            swap = abs(b - prev[0]) + abs(a - prev[1])
            if swap < keep:
                a, b = b, a
            out0[j], out1[j] = a, b
            prev = (a, b)
        return out0, out1

    def _branch(which):
        def g(zeta):
            roots = _tracked_roots(zeta)
            return roots[which]

        def W(zeta):
            roots = _tracked_roots(zeta)
            with np.errstate(invalid="ignore"):
                return _blaschke_pair_weight(roots[which], lam)

        return g, W

    return _branch(0), _branch(1)


def branch_curves(
    P: ProductInner,
    alpha: UnimodularConstant,
    thetas: np.ndarray,
    K: int = 20,
):
    """Sampled level-set branches for plotting: (label, z2 values, weights).

    Closed forms are used for the two classical families; otherwise each
    node's fiber atoms are sorted by angle and stitched by index.
    """
    thetas = np.asarray(thetas, dtype=float)
    zeta = np.exp(1j * thetas)
    kinds = P.kinds()
    curves = []
    if kinds == ("singular", "singular") and _is_standard_exp(P.phi) and _is_standard_exp(P.psi):
        for k in range(-K, K + 1):
            g, W = expexp_branches(alpha.nu, k)
            curves.append((f"k={k}", g(zeta), W(zeta)))
        return curves
    if kinds == ("singular", "blaschke") and _is_standard_exp(P.phi) and _is_blaschke_pair(P.psi):
        lam = P.psi.blaschke_zeros[0].value
        for label, (g, W) in zip(("plus", "minus"), blaschke_exp_branches(lam, alpha.nu)):
            curves.append((label, g(zeta), W(zeta)))
        return curves
    n_branches = None
    values, weights = [], []
    for theta in thetas:
        try:
            mu = fiber_measure(P, TorusPoint(float(theta)), alpha, K=K)
        except SkipNode:
            values.append(None)
            weights.append(None)
            continue
        atoms = sorted(mu.atoms, key=lambda zw: zw[0].theta)
        values.append(np.array([z.value for z, _ in atoms]))
        weights.append(np.array([w for _, w in atoms]))
        n_branches = len(atoms) if n_branches is None else n_branches
    for b in range(n_branches or 0):
        zs = np.array([np.nan + 0j if v is None or len(v) <= b else v[b] for v in values])
        ws = np.array([np.nan if w is None or len(w) <= b else w[b] for w in weights])
        curves.append((f"branch{b}", zs, ws))
    return curves


def product_branch_family(
    P: ProductInner,
    alpha: UnimodularConstant,
    K: int = 50,
) -> BranchFamily:
    """Closed-form branch family of the level set, where one is known."""
    kinds = P.kinds()
    if kinds == ("singular", "singular") and _is_standard_exp(P.phi) and _is_standard_exp(P.psi):
        branches = tuple(expexp_branches(alpha.nu, k) for k in range(-K, K + 1))
        return BranchFamily(kind="exp_exp", branches=branches, index_range=(-K, K))
    if kinds == ("singular", "blaschke") and _is_standard_exp(P.phi) and _is_blaschke_pair(P.psi):
        lam = P.psi.blaschke_zeros[0].value
        return BranchFamily(
            kind="blaschke_exp", branches=tuple(blaschke_exp_branches(lam, alpha.nu))
        )
    raise UnsupportedFunctionError("no closed-form branch family for this product")


def product_branch_measure(
    P: ProductInner,
    alpha: UnimodularConstant,
    K: int = 50,
) -> ClarkMeasure2D:
    """The branch family as a graph-component measure.

    For the Z-indexed exp x exp family the mass of branch k is
    4/((nu + 2 pi k)^2 + 4), the c = 2 Lorentzian family, so the dropped
    branches carry the same closed-form tail bound as a truncated atom list.
    """
    family = product_branch_family(P, alpha, K)
    curves = tuple(CurveComponent(Graph(g), W) for g, W in family.branches)
    tail = 0.0
    if family.index_range is not None:
        K = family.index_range[1]
        if K < 2:
            raise ValueError("Z-indexed branch family needs K >= 2")
        tail = (1.0 / math.pi**2) * (1.0 / K + 1.0 / (K - 1))
    return ClarkMeasure2D(curves=curves, tail_bound=tail)


def _is_standard_exp(phi: InnerFunction1D) -> bool:
    return (
        phi.degree == 0
        and len(phi.singular_atoms) == 1
        and phi.singular_atoms[0][0].theta == 0.0
        and abs(phi.singular_atoms[0][1] - 1.0) < 1e-15
        and abs(phi.unimodular_factor.nu) < 1e-15
    )


def _is_blaschke_pair(psi: InnerFunction1D) -> bool:
    return (
        psi.is_blaschke_type
        and psi.monomial_power == 1
        and len(psi.blaschke_zeros) == 1
        and abs(psi.unimodular_factor.nu) < 1e-15
    )


# ---------------------------------------------------------------------------
# integration paths


def _exp_params(phi: InnerFunction1D):
    xi, c = phi.singular_atoms[0]
    return phi.unimodular_factor.nu, c, xi


def _lorentz(c: float, u: np.ndarray) -> np.ndarray:
    return 2.0 * c / (c * c + u * u)


def _wrapped_lorentz(c: float, s: np.ndarray) -> np.ndarray:
    # sum_m 2c/(c^2 + (s+2 pi m)^2) = sinh(c)/(cosh(c) - cos(s))
    return math.sinh(c) / (math.cosh(c) - np.cos(s))


def _exp_point(xi_value: complex, c: float, y: np.ndarray) -> np.ndarray:
    # xi e^{i Delta} with cot(Delta/2) = y/c
    return xi_value * (y + 1j * c) / (y - 1j * c)


def _blaschke_fiber_atoms(psi: InnerFunction1D, beta: np.ndarray):
    """Fiber atoms of a Blaschke-type psi at levels beta, batched over nodes.

    Solves e^{ia} z^k prod(a_j - z) = beta prod(1 - conj(a_j) z) per node via
    companion-matrix eigenvalues.  Returns (roots, weights) of shape (n, N).
    """
    n = psi.degree
    p1 = np.array([psi.unimodular_factor.alpha])
    for a in psi.blaschke_zeros:
        p1 = np.polymul(p1, np.array([-1.0, a.value]))
    p1 = np.concatenate([p1, np.zeros(psi.monomial_power, dtype=complex)])
    p2 = np.array([1.0 + 0j])
    for a in psi.blaschke_zeros:
        p2 = np.polymul(p2, np.array([-a.value.conjugate(), 1.0]))
    size = n + 1
    c1 = np.zeros(size, dtype=complex)
    c2 = np.zeros(size, dtype=complex)
    c1[size - len(p1):] = p1
    c2[size - len(p2):] = p2
    coeffs = c1[None, :] - beta[:, None] * c2[None, :]
    monic = coeffs[:, 1:] / coeffs[:, :1]
    companion = np.zeros((len(beta), n, n), dtype=complex)
    if n > 1:
        idx = np.arange(n - 1)
        companion[:, idx + 1, idx] = 1.0
    companion[:, :, -1] = -monic[:, ::-1]
    roots = np.linalg.eigvals(companion).T
    slope = np.full(roots.shape, float(psi.monomial_power))
    for a in psi.blaschke_zeros:
        aj = a.value
        slope += (1.0 - abs(aj) ** 2) / np.abs(roots - aj) ** 2
    return roots, 1.0 / slope


def _integrate_blaschke_outer(P, alpha, f, grid, K, swap):
    """Outer quadrature over the Blaschke factor, fibers from the other factor.

    With swap=True the outer coordinate is z_2 (phi supplies the fibers) and
    f receives (fiber, outer); otherwise (outer, fiber).
    """
    outer, inner = (P.psi, P.phi) if swap else (P.phi, P.psi)
    thetas = grid.thetas()
    zeta = np.exp(1j * thetas)
    outer_bv = boundary_values_array(outer, thetas)
    beta = alpha.alpha * np.conj(outer_bv)
    inner_kind = _supported_factor(inner)
    if inner_kind == "blaschke":
        atoms, weights = _blaschke_fiber_atoms(inner, beta)
        args = (atoms, zeta[None, :]) if swap else (zeta[None, :], atoms)
        with np.errstate(all="ignore"):
            fv = np.asarray(f(*args), dtype=complex)
        finite = np.isfinite(fv)
        node_sums = pairwise_sum(np.where(finite, fv, 0.0) * weights, axis=0)
        node_sums = np.where(finite.all(axis=0), node_sums, np.nan)
        dropped_bound = 0.0
    else:
        a2, c2, xi2 = _exp_params(inner)
        k = np.arange(-K, K + 1)
        base = a2 - np.angle(beta)
        y = base[None, :] + TWO_PI * k[:, None]
        lor = _lorentz(c2, y)
        eta = _exp_point(xi2.value, c2, y)
        args = (eta, zeta[None, :]) if swap else (zeta[None, :], eta)
        with np.errstate(all="ignore"):
            fv = np.asarray(f(*args), dtype=complex)
        corner_args = (
            (np.full_like(zeta, xi2.value), zeta) if swap else (zeta, np.full_like(zeta, xi2.value))
        )
        with np.errstate(all="ignore"):
            corner = np.asarray(f(*corner_args), dtype=complex)
        finite = np.isfinite(fv)
        clean = np.where(finite, fv, 0.0) * lor
        wrapped = _wrapped_lorentz(c2, base)
        sums_full = pairwise_sum(clean, axis=0) + (wrapped - lor.sum(axis=0)) * corner
        half_mask = np.abs(k) <= K // 2
        sums_half = pairwise_sum(clean[half_mask], axis=0) \
            + (wrapped - lor[half_mask].sum(axis=0)) * corner
        # per-node Richardson step in the truncation order (residual ~ 1/K^2)
        node_sums = sums_full + (sums_full - sums_half) / 3.0
        node_sums = np.where(finite.all(axis=0) & np.isfinite(corner), node_sums, np.nan)
        dropped_bound = float(np.mean(np.abs(sums_full - sums_half))) / 3.0
    allowance = max_undefined_nodes(grid.n_nodes)
    bad = ~np.isfinite(node_sums)
    n_bad = int(bad.sum())
    if n_bad > allowance:
        raise UnsupportedFunctionError(
            f"{n_bad} skipped outer nodes exceed the allowance {allowance}"
        )
    good = ~bad
    clean = np.where(good, node_sums, 0.0)
    value = complex(pairwise_sum(clean) / max(int(good.sum()), 1))
    evens = clean[::2]
    good_evens = good[::2]
    half = complex(pairwise_sum(evens) / max(int(good_evens.sum()), 1))
    return IntegralResult(value=value, error_bound=abs(value - half) + dropped_bound)


def _expexp_profile(base, c, xi_value, f_one, layers):
    """Wrapped profile sum_{|m|<=layers} L_c(base+2 pi m) f(point(base+2 pi m)).

    Returns (full, half) profiles where half keeps |m| <= layers//2, both
    topped up with the closed-form wrapped kernel times f at the atom.
    """
    m = np.arange(-layers, layers + 1)
    full = np.zeros(len(base), dtype=complex)
    half = np.zeros(len(base), dtype=complex)
    kern_full = np.zeros(len(base))
    kern_half = np.zeros(len(base))
    half_layers = layers // 2
    for start in range(0, len(m), 256):
        mm = m[start:start + 256, None]
        x = base[None, :] + TWO_PI * mm
        lor = _lorentz(c, x)
        vals = np.asarray(f_one(_exp_point(xi_value, c, x)), dtype=complex)
        contrib = lor * vals
        full += contrib.sum(axis=0)
        kern_full += lor.sum(axis=0)
        inner_mask = np.abs(mm[:, 0]) <= half_layers
        if inner_mask.any():
            half += contrib[inner_mask].sum(axis=0)
            kern_half += lor[inner_mask].sum(axis=0)
    corner = complex(np.asarray(f_one(np.array([xi_value])), dtype=complex)[0])
    wrapped = _wrapped_lorentz(c, base)
    return (
        full + (wrapped - kern_full) * corner,
        half + (wrapped - kern_half) * corner,
    )


def _integrate_expexp_separable(P, alpha, f_split, grid, K):
    a1, c1, xi1 = _exp_params(P.phi)
    a2, c2, xi2 = _exp_params(P.psi)
    f1, f2 = f_split
    n_s = max(1024, grid.n_nodes // 4)
    s = TWO_PI * np.arange(n_s) / n_s
    d0 = (a2 + a1 - alpha.nu) % TWO_PI
    q_full, q_half = _expexp_profile(s, c1, xi1.value, f1, K)
    p_full, p_half = _expexp_profile(d0 - s, c2, xi2.value, f2, K)
    i_full = complex(pairwise_sum(q_full * p_full) / n_s)
    i_half = complex(pairwise_sum(q_half * p_half) / n_s)
    value = i_full + (i_full - i_half) / 3.0
    evens = complex(pairwise_sum((q_full * p_full)[::2]) / (n_s // 2))
    evens_r = evens + (evens - complex(pairwise_sum((q_half * p_half)[::2]) / (n_s // 2))) / 3.0
    error = abs(value - evens_r) + abs(i_full - i_half) / 3.0
    return IntegralResult(value=value, error_bound=error)


def _integrate_expexp_general(P, alpha, f, grid, K):
    a1, c1, xi1 = _exp_params(P.phi)
    a2, c2, xi2 = _exp_params(P.psi)
    layers = min(K, _GENERAL_PATH_MAX_LAYERS)
    n_s = min(grid.n_nodes, 1024)
    s = TWO_PI * np.arange(n_s) / n_s
    d0 = (a2 + a1 - alpha.nu) % TWO_PI
    u0 = d0 - s
    ls = np.arange(-layers, layers + 1)
    y = u0[None, :] + TWO_PI * ls[:, None]
    lor2 = _lorentz(c2, y)
    eta = _exp_point(xi2.value, c2, y)
    w2 = _wrapped_lorentz(c2, u0)
    r2 = w2 - lor2.sum(axis=0)
    half_mask = np.abs(ls) <= layers // 2

    def fiber_sums(z1_row):
        # sum over fiber layers at fixed outer points z1_row (s-indexed)
        with np.errstate(all="ignore"):
            fv = np.asarray(f(np.broadcast_to(z1_row, eta.shape), eta), dtype=complex)
            corner = np.asarray(f(z1_row, np.full(n_s, xi2.value)), dtype=complex)
        full = (lor2 * fv).sum(axis=0) + r2 * corner
        half = (lor2[half_mask] * fv[half_mask]).sum(axis=0) \
            + (w2 - lor2[half_mask].sum(axis=0)) * corner
        return full, half

    total_full = np.zeros(n_s, dtype=complex)
    total_half = np.zeros(n_s, dtype=complex)
    kern1_full = np.zeros(n_s)
    kern1_half = np.zeros(n_s)
    for mval in range(-layers, layers + 1):
        x = s + TWO_PI * mval
        lor1 = _lorentz(c1, x)
        z1_row = _exp_point(xi1.value, c1, x)
        full, half = fiber_sums(z1_row)
        total_full += lor1 * full
        kern1_full += lor1
        if abs(mval) <= layers // 2:
            total_half += lor1 * half
            kern1_half += lor1
    w1 = _wrapped_lorentz(c1, s)
    corner_full, corner_half = fiber_sums(np.full(n_s, xi1.value))
    total_full += (w1 - kern1_full) * corner_full
    total_half += (w1 - kern1_half) * corner_half
    i_full = complex(pairwise_sum(total_full) / n_s)
    i_half = complex(pairwise_sum(total_half) / n_s)
    value = i_full + (i_full - i_half) / 3.0
    evens_f = complex(pairwise_sum(total_full[::2]) / (n_s // 2))
    evens_h = complex(pairwise_sum(total_half[::2]) / (n_s // 2))
    evens_r = evens_f + (evens_f - evens_h) / 3.0
    error = abs(value - evens_r) + abs(i_full - i_half) / 3.0
    return IntegralResult(value=value, error_bound=error)


def product_clark_integrate(
    P: ProductInner,
    alpha: UnimodularConstant,
    f,
    grid: QuadratureGrid,
    K: int = PRODUCT_TRUNCATION,
    f_split=None,
) -> IntegralResult:
    """Integrate f over the Clark measure of phi(z_1) psi(z_2).

    f(z_1, z_2) must accept broadcastable complex arrays.  When f factors as
    f(z_1, z_2) = f_split[0](z_1) * f_split[1](z_2), passing the pair enables
    the fast separable path for two singular factors (f is then unused).
    """
    if not isinstance(K, int) or K < 1:
        raise ValueError("truncation order K must be an integer >= 1")
    kinds = P.kinds()
    if kinds == ("singular", "singular"):
        if f_split is not None:
            return _integrate_expexp_separable(P, alpha, f_split, grid, K)
        return _integrate_expexp_general(P, alpha, f, grid, K)
    if f_split is not None:
        f = lambda z1, z2: f_split[0](z1) * f_split[1](z2)  # noqa: E731
    if kinds == ("singular", "blaschke"):
        return _integrate_blaschke_outer(P, alpha, f, grid, K, swap=True)
    return _integrate_blaschke_outer(P, alpha, f, grid, K, swap=False)
