"""Points on the circle and torus, Poisson kernels, periodic quadrature,
and the measure containers shared by every other module.

Angles are radians in [0, 2pi) throughout; the normalized measure
m = dtheta/2pi is used everywhere, so a quadrature is just a node mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

TWO_PI = 2.0 * math.pi

# Canonical point-equality tolerance on the circle, in radians.
ANGLE_TOL = 1e-12

# Chunk size (rows) for batched antidiagonal evaluation; fixed so that
# results never depend on available memory.
_CHUNK_ROWS = 1024


class TorusCoreError(Exception):
    """Base class for errors raised by this package."""


class QuadratureError(TorusCoreError):
    """Too many undefined nodes, or an ill-formed quadrature request."""

    def __init__(self, message, undefined_angles=None, component_index=None):
        super().__init__(message)
        self.undefined_angles = tuple(undefined_angles or ())
        self.component_index = component_index


def canonical_angle(theta: float) -> float:
    """Reduce an angle into [0, 2pi)."""
    t = math.fmod(float(theta), TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:  # fmod rounding can land exactly on 2pi
        t = 0.0
    return t


def circle_distance(a: float, b: float) -> float:
    """Shortest angular distance between two angles."""
    d = abs(canonical_angle(a) - canonical_angle(b))
    return min(d, TWO_PI - d)


def angles_close(a: float, b: float, tol: float = ANGLE_TOL) -> bool:
    return circle_distance(a, b) <= tol


@dataclass(frozen=True)
class TorusPoint:
    """A point e^{i theta} on the unit circle, stored by its angle."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", canonical_angle(self.theta))

    @property
    def value(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta))

    @classmethod
    def from_complex(cls, w: complex, tol: float = 1e-9) -> "TorusPoint":
        w = complex(w)
        if abs(abs(w) - 1.0) > tol:
            raise ValueError(f"not a unimodular value: |{w}| = {abs(w)}")
        return cls(math.atan2(w.imag, w.real))

    def close_to(self, other: "TorusPoint", tol: float = ANGLE_TOL) -> bool:
        return angles_close(self.theta, other.theta, tol)


@dataclass(frozen=True)
class DiskPoint:
    """A point strictly inside the unit disc."""

    value: complex

    def __post_init__(self):
        v = complex(self.value)
        object.__setattr__(self, "value", v)
        if not abs(v) < 1.0:
            raise ValueError(f"point not inside the open disc: |{v}| = {abs(v)}")


@dataclass(frozen=True)
class UnimodularConstant:
    """alpha = e^{i nu} with nu in [0, 2pi); construct via from_nu/from_complex."""

    alpha: complex
    nu: float

    def __post_init__(self):
        if abs(abs(self.alpha) - 1.0) > 1e-14:
            raise ValueError(f"not unimodular: |alpha| = {abs(self.alpha)}")

    @classmethod
    def from_nu(cls, nu: float) -> "UnimodularConstant":
        t = canonical_angle(nu)
        return cls(alpha=complex(math.cos(t), math.sin(t)), nu=t)

    @classmethod
    def from_complex(cls, alpha: complex, tol: float = 1e-9) -> "UnimodularConstant":
        a = complex(alpha)
        if abs(abs(a) - 1.0) > tol:
            raise ValueError(f"not a unimodular value: |{a}| = {abs(a)}")
        return cls.from_nu(math.atan2(a.imag, a.real))

    @classmethod
    def one(cls) -> "UnimodularConstant":
        return cls.from_nu(0.0)


@dataclass(frozen=True)
class QuadratureGrid:
    """Uniform periodic grid theta_j = 2pi j / N under m = dtheta/2pi."""

    n_nodes: int = 4096

    def __post_init__(self):
        if int(self.n_nodes) < 2:
            raise ValueError("grid needs at least 2 nodes")
        object.__setattr__(self, "n_nodes", int(self.n_nodes))

    def thetas(self) -> np.ndarray:
        return np.arange(self.n_nodes) * (TWO_PI / self.n_nodes)

    def points(self) -> np.ndarray:
        return np.exp(1j * self.thetas())

    def halved(self) -> "QuadratureGrid":
        return QuadratureGrid(max(2, self.n_nodes // 2))


@dataclass(frozen=True)
class IntegralResult:
    """A computed integral together with its reported error bound."""

    value: complex
    error_bound: float

    def __complex__(self):
        return complex(self.value)


def pairwise_sum(values, axis: int = -1):
    """Sum along an axis with a fixed pairwise tree.

    The tree shape depends only on the axis length, so results are
    bit-identical across runs and evaluation schedules.
    """
    a = np.asarray(values)
    if a.ndim == 0:
        return a[()]
    a = np.moveaxis(a, axis, -1)
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-1], dtype=a.dtype)[()] if a.ndim > 1 else a.dtype.type(0)
    while a.shape[-1] > 1:
        if a.shape[-1] % 2:
            pad = np.zeros(a.shape[:-1] + (1,), dtype=a.dtype)
            a = np.concatenate([a, pad], axis=-1)
        a = a[..., 0::2] + a[..., 1::2]
    out = a[..., 0]
    return out[()] if out.ndim == 0 else out


def max_undefined_nodes(n_nodes: int) -> int:
    """Allowed count of undefined integrand nodes on an N-node grid.

    Undefined values only occur on measure-zero sets (boundary singularities),
    so one node is always allowed even on small grids; beyond that the
    allowance scales as N/1000.
    """
    return max(1, n_nodes // 1000)


def _node_mean_with_estimate(values: np.ndarray, n_undef_allowed: int,
                             component_index=None):
    """Mean over the last axis with NaN policy and a halving error estimate.

    Returns (mean, estimate, undefined_count). NaN/inf entries are dropped
    (zero-substituted); more than the allowed number raises QuadratureError.
    """
    v = np.asarray(values)
    n = v.shape[-1]
    bad = ~np.isfinite(v)
    n_bad = int(np.count_nonzero(bad))
    if n_bad:
        if n_bad > n_undef_allowed:
            idx = np.argwhere(bad)
            angles = tuple(TWO_PI * i[-1] / n for i in idx[:32])
            raise QuadratureError(
                f"{n_bad} undefined nodes exceed the allowance {n_undef_allowed}",
                undefined_angles=angles, component_index=component_index)
        v = np.where(bad, 0.0, v)
    full = pairwise_sum(v, axis=-1) / n
    half = pairwise_sum(v[..., 0::2], axis=-1) / max(1, (n + 1) // 2)
    return full, np.abs(full - half), n_bad


def periodic_quadrature(f, grid: QuadratureGrid) -> complex:
    """(1/N) sum_j f(e^{i theta_j}): the periodic trapezoid rule under m.

    `f` must be vectorized over a complex numpy array of unimodular points
    and signal undefined nodes with NaN (numpy propagates NaN naturally).
    """
    with np.errstate(all="ignore"):
        vals = np.asarray(f(grid.points()))
    if vals.shape != (grid.n_nodes,):
        vals = np.broadcast_to(vals, (grid.n_nodes,)).astype(complex)
    mean, _, _ = _node_mean_with_estimate(vals, max_undefined_nodes(grid.n_nodes))
    return complex(mean)


def _as_complex(z) -> complex:
    if isinstance(z, DiskPoint):
        return z.value
    return complex(z)


def poisson_kernel(z, zeta):
    """P_z(zeta) = (1-|z|^2)/|zeta-z|^2 for z in the disc, zeta on the circle.

    `zeta` may be a TorusPoint, a complex scalar, or a numpy array.
    """
    zv = _as_complex(z)
    if not abs(zv) < 1.0:
        raise ValueError(f"Poisson kernel needs |z| < 1, got |z| = {abs(zv)}")
    if isinstance(zeta, TorusPoint):
        w = zeta.value
    else:
        w = np.asarray(zeta) if isinstance(zeta, np.ndarray) else complex(zeta)
    num = 1.0 - abs(zv) ** 2
    d = w - zv
    out = num / (d.real ** 2 + d.imag ** 2)
    return out if isinstance(out, np.ndarray) else float(out)


def poisson_kernel_nd(z: Sequence, zeta: Sequence):
    """Product of one-variable Poisson kernels over matching coordinates."""
    if len(z) != len(zeta):
        raise ValueError(f"dimension mismatch: {len(z)} vs {len(zeta)}")
    if len(z) < 1:
        raise ValueError("need at least one coordinate")
    out = None
    for zj, wj in zip(z, zeta):
        factor = poisson_kernel(zj, wj)
        out = factor if out is None else out * factor
    return out


@dataclass(frozen=True)
class DiscreteMeasure1D:
    """Atomic measure on the circle: (point, weight) pairs plus a tail bound
    for the total weight of omitted atoms of an infinite family."""

    atoms: tuple
    tail_bound: float = 0.0
    generator_id: Optional[str] = None

    def __post_init__(self):
        atoms = tuple((p if isinstance(p, TorusPoint) else TorusPoint(p), float(w))
                      for p, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if self.tail_bound < 0 or not math.isfinite(self.tail_bound):
            raise ValueError("tail_bound must be finite and nonnegative")
        for _, w in atoms:
            if not (w > 0 and math.isfinite(w)):
                raise ValueError(f"atom weights must be positive and finite, got {w}")
        if len(atoms) > 1:
            order = sorted(a.theta for a, _ in atoms)
            gaps = [order[i + 1] - order[i] for i in range(len(order) - 1)]
            gaps.append(TWO_PI - (order[-1] - order[0]))
            if min(gaps) <= ANGLE_TOL:
                raise ValueError("atoms must be pairwise distinct on the circle")

    @property
    def total_listed_mass(self) -> float:
        return float(pairwise_sum(np.array([w for _, w in self.atoms])) if self.atoms else 0.0)

    def points_array(self) -> np.ndarray:
        return np.array([p.value for p, _ in self.atoms], dtype=complex)

    def weights_array(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms], dtype=float)


@dataclass(frozen=True)
class Antidiagonal:
    """The curve zeta -> (zeta, eta conj(zeta)) through eta."""

    eta: TorusPoint


@dataclass(frozen=True)
class Graph:
    """The curve zeta -> (zeta, g(zeta)) for a unimodular-valued rule g.

    `g` must be vectorized over complex arrays and may return NaN where
    it is undefined (measure-zero sets only).
    """

    g: Callable


@dataclass(frozen=True)
class CurveComponent:
    """A weighted curve on the torus: antidiagonal (constant weight) or graph
    (weight is a nonnegative rule of the first coordinate)."""

    kind: Union[Antidiagonal, Graph]
    weight: Union[float, Callable]

    def __post_init__(self):
        if isinstance(self.kind, Antidiagonal):
            w = float(self.weight)
            if w < 0 or not math.isfinite(w):
                raise ValueError("antidiagonal weight must be a finite constant >= 0")
            object.__setattr__(self, "weight", w)
        elif isinstance(self.kind, Graph):
            if not callable(self.weight):
                raise ValueError("graph components need a weight rule")
        else:
            raise TypeError("kind must be Antidiagonal or Graph")

    def second_coordinate(self, zeta: np.ndarray) -> np.ndarray:
        if isinstance(self.kind, Antidiagonal):
            return self.kind.eta.value * np.conj(zeta)
        with np.errstate(all="ignore"):
            return np.asarray(self.kind.g(zeta), dtype=complex)

    def weight_values(self, zeta: np.ndarray) -> np.ndarray:
        if isinstance(self.kind, Antidiagonal):
            return np.full(np.shape(zeta), self.weight, dtype=float)
        with np.errstate(all="ignore"):
            return np.asarray(self.weight(zeta), dtype=float)


@dataclass(frozen=True)
class LineComponent:
    """The vertical line {zeta_1 = tau} carrying c * (Lebesgue in zeta_2)."""

    tau: TorusPoint
    constant: float

    def __post_init__(self):
        if not (self.constant > 0 and math.isfinite(self.constant)):
            raise ValueError("line constant must be positive and finite")


@dataclass(frozen=True)
class ClarkMeasure2D:
    """Curve components plus vertical lines; atoms are unrepresentable."""

    curves: tuple = ()
    lines: tuple = ()
    tail_bound: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(self, "lines", tuple(self.lines))
        if self.tail_bound < 0 or not math.isfinite(self.tail_bound):
            raise ValueError("tail_bound must be finite and nonnegative")


def _antidiagonal_block(mu: ClarkMeasure2D):
    """Split curves into a batched antidiagonal block and the rest."""
    etas, weights, graph_items = [], [], []
    for idx, comp in enumerate(mu.curves):
        if isinstance(comp.kind, Antidiagonal):
            etas.append(comp.kind.eta.value)
            weights.append(comp.weight)
        else:
            graph_items.append((idx, comp))
    return (np.array(etas, dtype=complex), np.array(weights, dtype=float), graph_items)


def integrate_measure2d(mu: ClarkMeasure2D, f, grid: QuadratureGrid) -> IntegralResult:
    """Integrate f over a 2D measure: sum of curve and line quadratures.

    `f(z1, z2)` must accept equal-shaped complex arrays. The reported bound
    is the grid-halving estimate summed over components plus
    tail_bound * (sup of |f| over all evaluated nodes).
    """
    n = grid.n_nodes
    zeta = grid.points()
    allowed = max_undefined_nodes(n)
    etas, weights, graph_items = _antidiagonal_block(mu)

    component_values = []
    component_estimates = []
    sup_f = 0.0

    # Antidiagonals share the rank-1 structure z2 = eta conj(zeta); evaluate in
    # fixed-size chunks so memory stays bounded and results stay deterministic.
    conj_zeta = np.conj(zeta)
    for start in range(0, len(etas), _CHUNK_ROWS):
        eta_blk = etas[start:start + _CHUNK_ROWS, None]
        w_blk = weights[start:start + _CHUNK_ROWS]
        z2 = eta_blk * conj_zeta[None, :]
        z1 = np.broadcast_to(zeta[None, :], z2.shape)
        with np.errstate(all="ignore"):
            fv = np.asarray(f(z1, z2), dtype=complex)
        finite = np.isfinite(fv)
        if finite.any():
            sup_f = max(sup_f, float(np.max(np.abs(np.where(finite, fv, 0.0)))))
        means, ests, _ = _node_mean_with_estimate(fv, allowed, component_index=start)
        component_values.extend((w_blk * means).tolist())
        component_estimates.extend((w_blk * ests).tolist())

    for idx, comp in graph_items:
        z2 = comp.second_coordinate(zeta)
        wv = comp.weight_values(zeta)
        with np.errstate(all="ignore"):
            fv = np.asarray(f(zeta, z2), dtype=complex)
        finite = np.isfinite(fv)
        if finite.any():
            sup_f = max(sup_f, float(np.max(np.abs(np.where(finite, fv, 0.0)))))
        vals = fv * wv
        try:
            mean, est, _ = _node_mean_with_estimate(vals, allowed, component_index=idx)
        except QuadratureError:
            raise
        component_values.append(complex(mean))
        component_estimates.append(float(est))

    for j, line in enumerate(mu.lines):
        z1 = np.full(n, line.tau.value, dtype=complex)
        with np.errstate(all="ignore"):
            fv = np.asarray(f(z1, zeta), dtype=complex)
        finite = np.isfinite(fv)
        if finite.any():
            sup_f = max(sup_f, float(np.max(np.abs(np.where(finite, fv, 0.0)))))
        mean, est, _ = _node_mean_with_estimate(
            fv, allowed, component_index=len(mu.curves) + j)
        component_values.append(line.constant * complex(mean))
        component_estimates.append(line.constant * float(est))

    total = complex(pairwise_sum(np.array(component_values, dtype=complex))) \
        if component_values else 0.0 + 0.0j
    quad_est = float(pairwise_sum(np.array(component_estimates, dtype=float))) \
        if component_estimates else 0.0
    return IntegralResult(value=total, error_bound=quad_est + mu.tail_bound * sup_f)
