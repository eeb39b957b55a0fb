"""Geodesics issued from the origin, in closed form and by ODE integration."""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import (ORIGIN, NilPoint, TangentVector, as_point, metric_at,
                   translation_to)

HALF_PI = kernels.HALF_PI
_POLE_EPS = 1e-15


@dataclass(frozen=True)
class GeodesicDirection:
    """Heading ``alpha`` and pitch ``theta`` of a unit-speed geodesic.

    ``alpha`` is wrapped to [-pi, pi]; at the poles (``|theta| = pi/2``)
    it carries no information and is set to 0.
    """

    alpha: float
    theta: float

    def __post_init__(self):
        alpha = float(self.alpha)
        theta = float(self.theta)
        if not (math.isfinite(alpha) and math.isfinite(theta)):
            raise ValueError("direction angles must be finite")
        if abs(theta) > HALF_PI + 1e-12:
            raise ValueError(f"theta must lie in [-pi/2, pi/2], got {theta}")
        if abs(theta) >= HALF_PI - _POLE_EPS:
            theta = math.copysign(HALF_PI, theta)
            alpha = 0.0
        elif not -math.pi <= alpha <= math.pi:
            alpha = math.remainder(alpha, 2.0 * math.pi)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "theta", theta)

    @property
    def c(self) -> float:
        return 0.0 if abs(self.theta) == HALF_PI else math.cos(self.theta)

    @property
    def w(self) -> float:
        return math.sin(self.theta)

    @classmethod
    def from_vector(cls, v) -> "GeodesicDirection":
        """Direction of a nonzero vector at the origin (normalised)."""
        v1, v2, v3 = v
        n = math.sqrt(v1 * v1 + v2 * v2 + v3 * v3)
        if n == 0.0:
            raise ValueError("zero vector has no direction")
        return cls(math.atan2(v2, v1), math.asin(max(-1.0, min(1.0, v3 / n))))


@dataclass(frozen=True)
class GeodesicArc:
    start: NilPoint
    direction: GeodesicDirection
    length: float

    def __post_init__(self):
        object.__setattr__(self, "start", as_point(self.start))
        if not self.length >= 0.0:
            raise ValueError(f"arc length must be >= 0, got {self.length}")

    def point_at(self, t: float) -> NilPoint:
        return translation_to(self.start).act(geodesic_point(self.direction, t))

    def endpoint(self) -> NilPoint:
        return self.point_at(self.length)


def geodesic_point(direction: GeodesicDirection, t: float) -> NilPoint:
    """Point at arc length ``t`` along the geodesic from the origin."""
    return NilPoint(*kernels.point_scalar(direction.alpha, direction.theta, float(t)))


def geodesic_tangent(direction: GeodesicDirection, t: float) -> TangentVector:
    """Velocity (coordinate components) at arc length ``t``; unit g-norm."""
    base = geodesic_point(direction, t)
    return TangentVector(*kernels.tangent_scalar(direction.alpha, direction.theta, float(t)),
                         base=base)


def unit_tangent_at_origin(direction: GeodesicDirection) -> TangentVector:
    c = direction.c
    return TangentVector(c * math.cos(direction.alpha), c * math.sin(direction.alpha),
                         direction.w)


def christoffel_at(x: float) -> np.ndarray:
    """Levi-Civita symbols ``G[i, j, k]`` = Gamma^i_jk at a point with first coordinate x."""
    g_inv = metric_at((x, 0.0, 0.0)).inverse
    # dg[l, j, k] = d g_jk / d x^l; only the x derivative is nonzero
    dg = np.zeros((3, 3, 3))
    dg[0] = [[0.0, 0.0, 0.0],
             [0.0, 2.0 * x, -1.0],
             [0.0, -1.0, 0.0]]
    first_kind = 0.5 * (np.einsum("jlk->ljk", dg) + np.einsum("klj->ljk", dg) - dg)
    return np.einsum("il,ljk->ijk", g_inv, first_kind)


def integrate_geodesic(p0, v0, s: float, steps: int, backend=None):
    """Integrate the geodesic ODE with classical fixed-step RK4.

    ``v0`` is rescaled to unit length at ``p0``. Returns ``(endpoint, path)``
    where ``path`` holds the ``steps + 1`` points of the integration grid.
    """
    if s < 0:
        raise ValueError(f"arc length must be >= 0, got {s}")
    if steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps}")
    p0 = as_point(p0)
    if s == 0:
        return p0, [p0]
    v = np.array(list(v0), float)
    n = metric_at(p0).norm(v)
    if n == 0.0:
        raise ValueError("initial velocity must be nonzero")
    state = np.concatenate([p0.as_array(), v / n])
    traj = kernels.rk4(state, s / steps, steps, 1, backend=backend)[0]
    path = [NilPoint(*row[:3]) for row in traj]
    return path[-1], path


def sample_geodesic(arc: GeodesicArc, n: int) -> list:
    """``n + 1`` points at uniform arc-length spacing along ``arc``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    to_start = translation_to(arc.start)
    pts = []
    for k in range(n + 1):
        t = arc.length if k == n else arc.length * k / n
        pts.append(to_start.act(geodesic_point(arc.direction, t)))
    return pts


def polyline(arc: GeodesicArc, n: int) -> np.ndarray:
    """Rows (t, x, y, z) for :func:`sample_geodesic`, as consumed by the CLI."""
    pts = sample_geodesic(arc, n)
    ts = [arc.length if k == n else arc.length * k / n for k in range(n + 1)]
    return np.array([[t, *p] for t, p in zip(ts, pts)])


__all__ = [
    "GeodesicArc", "GeodesicDirection", "christoffel_at", "geodesic_point",
    "geodesic_tangent", "integrate_geodesic", "polyline", "sample_geodesic",
    "unit_tangent_at_origin", "ORIGIN",
]
