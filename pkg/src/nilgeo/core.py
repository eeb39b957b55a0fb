"""Points, translations, isometries and the metric of Nil.

Points live in the affine chart (x, y, z) of the projective model; the
homogeneous row (1; x, y, z) only appears where a 4x4 matrix acts on it.
A translation with parameters (a, b, c) acts on points from the right,

    (1; p, q, r) -> (1; p, q, r) @ M(a, b, c) = (1; a + p, b + q, c + a q + r),

which is left multiplication by (a, b, c) in the Heisenberg group. The
invariant line element is dx^2 + dy^2 + (dz - x dy)^2.
"""

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np


def _fmt(v: float) -> str:
    return f"{v:.17g}"


@dataclass(frozen=True)
class NilPoint:
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"NilPoint.{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)

    @classmethod
    def origin(cls) -> "NilPoint":
        return cls(0.0, 0.0, 0.0)

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def homogeneous(self) -> np.ndarray:
        return np.array([1.0, self.x, self.y, self.z])

    def __str__(self):
        return ",".join(_fmt(v) for v in self)


ORIGIN = NilPoint.origin()


def as_point(p) -> NilPoint:
    """Coerce a NilPoint or any length-3 sequence to a NilPoint."""
    if isinstance(p, NilPoint):
        return p
    x, y, z = p
    return NilPoint(x, y, z)


@dataclass(frozen=True)
class NilTranslation:
    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def identity(cls) -> "NilTranslation":
        return cls(0.0, 0.0, 0.0)

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def matrix(self) -> np.ndarray:
        """The 4x4 collineation acting on homogeneous rows."""
        a, b, c = self.a, self.b, self.c
        return np.array([[1.0, a, b, c],
                         [0.0, 1.0, 0.0, 0.0],
                         [0.0, 0.0, 1.0, a],
                         [0.0, 0.0, 0.0, 1.0]])

    def act(self, p) -> NilPoint:
        p = as_point(p)
        return NilPoint(self.a + p.x, self.b + p.y, self.c + self.a * p.y + p.z)

    __call__ = act


@dataclass(frozen=True)
class TangentVector:
    v1: float
    v2: float
    v3: float
    base: NilPoint = ORIGIN

    def __post_init__(self):
        for name in ("v1", "v2", "v3"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"TangentVector.{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)

    def __iter__(self):
        return iter((self.v1, self.v2, self.v3))

    def as_array(self) -> np.ndarray:
        return np.array([self.v1, self.v2, self.v3])

    def norm(self) -> float:
        """Length measured with the metric at the base point."""
        return metric_at(self.base).norm(self)


@dataclass(frozen=True)
class MetricTensor:
    """g_ij at a point; only its x coordinate matters."""

    x: float

    @property
    def matrix(self) -> np.ndarray:
        x = self.x
        return np.array([[1.0, 0.0, 0.0],
                         [0.0, 1.0 + x * x, -x],
                         [0.0, -x, 1.0]])

    @property
    def inverse(self) -> np.ndarray:
        x = self.x
        return np.array([[1.0, 0.0, 0.0],
                         [0.0, 1.0, x],
                         [0.0, x, 1.0 + x * x]])

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    def inner(self, u, v) -> float:
        u1, u2, u3 = u
        v1, v2, v3 = v
        x = self.x
        # (du3 - x du2)(dv3 - x dv2) form of the line element
        return u1 * v1 + u2 * v2 + (u3 - x * u2) * (v3 - x * v2)

    def norm(self, v) -> float:
        return math.sqrt(self.inner(v, v))


# ---------------------------------------------------------------------------
# translation algebra
# ---------------------------------------------------------------------------

def compose(t1: NilTranslation, t2: NilTranslation) -> NilTranslation:
    """Translation equal to applying ``t1`` first, then ``t2``."""
    a, b, c = t1
    x, y, z = t2
    return NilTranslation(x + a, y + b, z + x * b + c)


def invert(t: NilTranslation) -> NilTranslation:
    return NilTranslation(-t.a, -t.b, t.a * t.b - t.c)


def translation_to(p) -> NilTranslation:
    """The translation taking the origin to ``p``."""
    p = as_point(p)
    return NilTranslation(p.x, p.y, p.z)


def act(t: NilTranslation, p) -> NilPoint:
    return t.act(p)


def pushforward(t: NilTranslation, v: TangentVector) -> TangentVector:
    """Differential of ``t`` applied to a vector based at any point."""
    return TangentVector(v.v1, v.v2, v.v3 + t.a * v.v2, base=t.act(v.base))


def metric_at(p) -> MetricTensor:
    return MetricTensor(as_point(p).x)


def angle_between(u, v, p=None) -> float:
    """Angle in [0, pi] between two tangent vectors at ``p``.

    ``p`` defaults to the base point of ``u`` when ``u`` is a TangentVector,
    else the origin. Raises ValueError for a zero vector.
    """
    if p is None:
        p = u.base if isinstance(u, TangentVector) else ORIGIN
    g = metric_at(p)
    nu = g.norm(u)
    nv = g.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("angle_between is undefined for a zero vector")
    cos = g.inner(u, v) / (nu * nv)
    return math.acos(min(1.0, max(-1.0, cos)))


# ---------------------------------------------------------------------------
# isometries fixing the origin
# ---------------------------------------------------------------------------

def rotate_about_z(p, omega: float) -> NilPoint:
    """Rotation by ``omega`` about the z axis through the origin."""
    x, y, z = as_point(p)
    co, so = math.cos(omega), math.sin(omega)
    xb = x * co - y * so
    yb = x * so + y * co
    zb = (z - 0.5 * x * y + 0.25 * (x * x - y * y) * math.sin(2.0 * omega)
          + 0.5 * x * y * math.cos(2.0 * omega))
    return NilPoint(xb, yb, zb)


def rotate_tangent(v: TangentVector, omega: float) -> TangentVector:
    """Differential of :func:`rotate_about_z` applied to ``v``."""
    x, y, _ = v.base
    v1, v2, v3 = v
    co, so = math.cos(omega), math.sin(omega)
    s2, c2 = math.sin(2.0 * omega), math.cos(2.0 * omega)
    dz = (v3 - 0.5 * (y * v1 + x * v2) + 0.5 * (x * v1 - y * v2) * s2
          + 0.5 * (y * v1 + x * v2) * c2)
    return TangentVector(v1 * co - v2 * so, v1 * so + v2 * co, dz,
                         base=rotate_about_z(v.base, omega))


def quadratic_map(p, direction: Literal["forward", "backward"] = "forward") -> NilPoint:
    """The map z -> z - xy/2 ("forward") linearising rotations, or its inverse."""
    x, y, z = as_point(p)
    if direction == "forward":
        return NilPoint(x, y, z - 0.5 * x * y)
    if direction == "backward":
        return NilPoint(x, y, z + 0.5 * x * y)
    raise ValueError(f"direction must be 'forward' or 'backward', got {direction!r}")


def linear_rotation(p, omega: float) -> NilPoint:
    """Plain Euclidean rotation of (x, y) by ``omega``; z untouched."""
    x, y, z = as_point(p)
    co, so = math.cos(omega), math.sin(omega)
    return NilPoint(x * co - y * so, x * so + y * co, z)


def reflect_y_axis(p) -> NilPoint:
    """Line reflection in the y axis, (x, y, z) -> (-x, y, -z); an involution."""
    x, y, z = as_point(p)
    return NilPoint(-x, y, -z)


def reflect_tangent(v: TangentVector) -> TangentVector:
    return TangentVector(-v.v1, v.v2, -v.v3, base=reflect_y_axis(v.base))
