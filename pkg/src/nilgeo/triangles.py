"""Geodesic triangles: interior angles, the two right-angled families, scans.

An interior angle at vertex ``A_i`` is measured by translating ``A_i`` to the
origin, solving the two boundary-value problems towards the translated
neighbours and taking the Euclidean angle between the two unit tangents;
the metric is the identity at the origin and translations are isometries.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .bvp import DEFAULT_CONFIG, SolverConfig, SolverFailure, local_target, shoot
from .core import NilPoint, as_point
from .flow import GeodesicArc, unit_tangent_at_origin

FAMILIES = ("fibre", "hyperbolic")


@dataclass(frozen=True)
class Triangle:
    A1: NilPoint
    A2: NilPoint
    A3: NilPoint

    def __post_init__(self):
        pts = [as_point(p) for p in (self.A1, self.A2, self.A3)]
        for name, p in zip(("A1", "A2", "A3"), pts):
            object.__setattr__(self, name, p)
        for i in range(3):
            for j in range(i + 1, 3):
                if math.dist(tuple(pts[i]), tuple(pts[j])) <= 1e-12:
                    raise ValueError(f"vertices A{i + 1} and A{j + 1} coincide")

    @property
    def vertices(self):
        return (self.A1, self.A2, self.A3)


@dataclass(frozen=True)
class VertexView:
    """What vertex ``index`` sees after being translated to the origin."""

    index: int
    targets: dict
    directions: dict
    lengths: dict
    residuals: dict
    alternatives: dict

    def pitch(self, j: int) -> float:
        return self.directions[j].theta


@dataclass(frozen=True)
class Side:
    i: int
    j: int
    arc: GeodesicArc
    length_from_j: float

    @property
    def length(self) -> float:
        return self.arc.length


@dataclass(frozen=True)
class TriangleReport:
    triangle: Triangle
    angles: tuple
    sides: tuple
    views: tuple
    angle_sum: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "angle_sum", float(sum(self.angles)))

    @property
    def vertices(self):
        return self.triangle.vertices

    def length(self, i: int, j: int) -> float:
        """d(A_i, A_j) with 0-based indices, measured from ``A_i``."""
        return self.views[i].lengths[j]

    def pitch(self, i: int, j: int) -> float:
        """Signed pitch at ``A_i`` of the side towards ``A_j`` (0-based)."""
        return self.views[i].pitch(j)

    def to_dict(self) -> dict:
        out = {
            "vertices": [list(p) for p in self.vertices],
            "angles": list(self.angles),
            "angle_sum": self.angle_sum,
            "angle_sum_minus_pi": self.angle_sum - math.pi,
            "sides": [],
            "vertex_frames": [],
        }
        for side in self.sides:
            out["sides"].append({
                "between": [side.i + 1, side.j + 1],
                "length": side.length,
                "length_from_other_end": side.length_from_j,
                "alpha": side.arc.direction.alpha,
                "theta": side.arc.direction.theta,
            })
        for v in self.views:
            out["vertex_frames"].append({
                "vertex": v.index + 1,
                "towards": [
                    {"vertex": j + 1,
                     "translated_target": list(v.targets[j]),
                     "alpha": v.directions[j].alpha,
                     "theta": v.directions[j].theta,
                     "length": v.lengths[j],
                     "residual": v.residuals[j],
                     "other_solution_lengths": list(v.alternatives[j])}
                    for j in sorted(v.targets)],
            })
        return out


def _solve_side(i, j, target, cfg, backend):
    try:
        return shoot(target, cfg, backend=backend)
    except SolverFailure as exc:
        raise SolverFailure(f"side A{i + 1}A{j + 1} seen from A{i + 1}: {exc}",
                            best_residual=exc.best_residual, target=exc.target) from exc


def triangle_report(tri, cfg: SolverConfig = DEFAULT_CONFIG, backend=None) -> TriangleReport:
    if not isinstance(tri, Triangle):
        tri = Triangle(*tri)
    verts = tri.vertices
    views, angles = [], []
    for i in range(3):
        others = [j for j in range(3) if j != i]
        targets, dirs, lengths, resid, alts, tangents = {}, {}, {}, {}, {}, []
        for j in others:
            tgt = local_target(verts[i], verts[j])
            sols = _solve_side(i, j, tgt, cfg, backend)
            best = sols[0]
            targets[j] = tgt
            dirs[j] = best.direction
            lengths[j] = best.s
            resid[j] = best.residual
            alts[j] = tuple(s.s for s in sols[1:])
            tangents.append(np.array(list(unit_tangent_at_origin(best.direction))))
        cos = float(np.dot(tangents[0], tangents[1]))
        angles.append(math.acos(min(1.0, max(-1.0, cos))))
        views.append(VertexView(i, targets, dirs, lengths, resid, alts))

    sides = tuple(
        Side(i, j, GeodesicArc(verts[i], views[i].directions[j], views[i].lengths[j]),
             views[j].lengths[i])
        for i, j in ((1, 2), (0, 2), (0, 1)))
    return TriangleReport(tri, tuple(angles), sides, tuple(views))


def _positive(**kw):
    for name, v in kw.items():
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"{name} must be positive and finite, got {v!r}")


def fibre_like_vertices(x3, z):
    return NilPoint(0, 0, 0), NilPoint(0, 0, z), NilPoint(x3, 0, z)


def hyperbolic_like_vertices(x3, y):
    return NilPoint(0, 0, 0), NilPoint(0, y, 0), NilPoint(x3, y, 0)


def fibre_like_triangle(x3: float, z: float, cfg: SolverConfig = DEFAULT_CONFIG,
                        backend=None) -> TriangleReport:
    """Right triangle with one side on the fibre through the origin."""
    _positive(x3=x3, z=z)
    return triangle_report(Triangle(*fibre_like_vertices(x3, z)), cfg, backend)


def hyperbolic_like_triangle(x3: float, y: float, cfg: SolverConfig = DEFAULT_CONFIG,
                             backend=None) -> TriangleReport:
    """Right triangle with all vertices in the base plane z = 0."""
    _positive(x3=x3, y=y)
    return triangle_report(Triangle(*hyperbolic_like_vertices(x3, y)), cfg, backend)


# ---------------------------------------------------------------------------
# family scans (table rows)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    param: float
    abs_theta: float
    d13: float
    omega1: float
    omega3: float
    angle_sum: float
    omega2: float = math.nan
    abs_theta_13: float = math.nan
    error: Optional[str] = None

    COLUMNS = ("abs_theta", "d13", "omega1", "omega3", "angle_sum")

    @property
    def ok(self) -> bool:
        return self.error is None

    @classmethod
    def from_report(cls, param, rep: TriangleReport) -> "TableRow":
        return cls(param=float(param),
                   abs_theta=abs(rep.pitch(0, 2)),
                   d13=rep.length(0, 2),
                   omega1=rep.angles[0],
                   omega3=rep.angles[2],
                   angle_sum=rep.angle_sum,
                   omega2=rep.angles[1],
                   abs_theta_13=abs(rep.pitch(2, 0)))

    @classmethod
    def failed(cls, param, message) -> "TableRow":
        nan = math.nan
        return cls(float(param), nan, nan, nan, nan, nan, error=message)


# family -> fixed parameter -> (varying parameter, vertex builder taking (fixed, varying))
_SCANS = {
    "fibre": {
        "z": ("x3", lambda z, x3: (x3, z)),
        "x3": ("z", lambda x3, z: (x3, z)),
    },
    "hyperbolic": {
        "x3": ("y", lambda x3, y: (x3, y)),
        "y": ("x3", lambda y, x3: (x3, y)),
    },
}


def varying_name(family: str, fixed_name: str) -> str:
    try:
        return _SCANS[family][fixed_name][0]
    except KeyError:
        raise ValueError(f"cannot fix {fixed_name!r} in the {family!r} family") from None


def family_scan(family: str, fixed: dict, varying, cfg: SolverConfig = DEFAULT_CONFIG,
                backend=None) -> list:
    """One :class:`TableRow` per value in ``varying``.

    ``fixed`` binds exactly one parameter, e.g. ``{"z": 0.5}`` for the fibre
    family or ``{"x3": 0.5}`` / ``{"y": 1/3}`` for the hyperbolic family.
    Solver failures are recorded in the row instead of raised.
    """
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")
    if len(fixed) != 1:
        raise ValueError("exactly one parameter must be fixed")
    (fixed_name, fixed_value), = fixed.items()
    varying_name(family, fixed_name)
    build = _SCANS[family][fixed_name][1]
    make = fibre_like_triangle if family == "fibre" else hyperbolic_like_triangle
    rows = []
    for v in varying:
        a, b = build(float(fixed_value), float(v))
        try:
            rows.append(TableRow.from_report(v, make(a, b, cfg, backend)))
        except SolverFailure as exc:
            rows.append(TableRow.failed(v, str(exc)))
    return rows


# Parameter grids of the three table presets.
PRESETS = {
    "table1": ("fibre", {"z": 0.5}, (1 / 1000, 1 / 3, 1.0, 4.0, 15.0, 100.0)),
    "table2": ("hyperbolic", {"x3": 0.5}, (1 / 100, 1 / 3, 3.0, 6.0, 20.0, 100.0)),
    "table3": ("hyperbolic", {"y": 1 / 3}, (1 / 100, 1 / 3, 3.0, 6.0, 20.0, 100.0)),
}


def preset_scan(name: str, cfg: SolverConfig = DEFAULT_CONFIG, backend=None) -> list:
    family, fixed, grid = PRESETS[name]
    return family_scan(family, fixed, grid, cfg, backend)


# ---------------------------------------------------------------------------
# angle sum exactly pi
# ---------------------------------------------------------------------------

class PiSumResult(NamedTuple):
    t: float
    report: TriangleReport


def interpolated_triangle(t, hyp, fib) -> Triangle:
    """Triangle A1 A2(t) A3(t) on the straight segments from the hyperbolic-like
    configuration (t = 0) to the fibre-like one (t = 1)."""
    x3h, yh = hyp
    x3f, zf = fib
    a2 = NilPoint(0.0, (1 - t) * yh, t * zf)
    a3 = NilPoint((1 - t) * x3h + t * x3f, (1 - t) * yh, t * zf)
    return Triangle(NilPoint(0, 0, 0), a2, a3)


def bisect_angle_sum(path, tol: float = 1e-6, cfg: SolverConfig = DEFAULT_CONFIG,
                     backend=None, max_iter: int = 200) -> PiSumResult:
    """Bisect ``t`` in (0, 1) until ``path(t)`` has angle sum within ``tol`` of pi.

    ``path`` maps t to a :class:`Triangle`; the sum must be below pi at t = 0
    and above pi at t = 1, otherwise ValueError.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")

    def excess(t):
        rep = triangle_report(path(t), cfg, backend)
        return rep.angle_sum - math.pi, rep

    lo, hi = 0.0, 1.0
    f_lo, _ = excess(lo)
    f_hi, _ = excess(hi)
    if not (f_lo < 0.0 < f_hi):
        raise ValueError(
            "endpoints do not straddle pi: sum - pi is "
            f"{f_lo:+.6g} at t=0 and {f_hi:+.6g} at t=1")
    mid = f_mid = math.nan
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid, rep = excess(mid)
        if abs(f_mid) <= tol:
            return PiSumResult(mid, rep)
        if f_mid < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4 * np.finfo(float).eps:
            break
    raise SolverFailure(f"bisection stalled at t={mid:.17g} with |sum - pi| = {abs(f_mid):.3e}")


def find_pi_sum(hyp, fib, tol: float = 1e-6, cfg: SolverConfig = DEFAULT_CONFIG,
                backend=None) -> PiSumResult:
    """Proper triangle with angle sum pi between a hyperbolic-like and a fibre-like one.

    ``hyp = (x3, y)`` must give a sum below pi and ``fib = (x3, z)`` a sum
    above pi. Both moving vertices travel on straight coordinate segments.
    """
    _positive(x3_h=hyp[0], y_h=hyp[1], x3_f=fib[0], z_f=fib[1])
    return bisect_angle_sum(lambda t: interpolated_triangle(t, hyp, fib), tol, cfg, backend)


class Example(NamedTuple):
    kind: str
    source: str
    report: TriangleReport


def classify_examples(cfg: SolverConfig = DEFAULT_CONFIG, backend=None) -> list:
    """One triangle each with angle sum greater than, less than and equal to pi."""
    greater = fibre_like_triangle(1.0, 0.5, cfg, backend)
    less = hyperbolic_like_triangle(0.5, 3.0, cfg, backend)
    t, equal = find_pi_sum((0.5, 3.0), (1.0, 0.5), tol=1e-9, cfg=cfg, backend=backend)
    return [
        Example("greater", "fibre-like right triangle x3=1, z=1/2 (preset table1)", greater),
        Example("less", "hyperbolic-like right triangle x3=1/2, y=3 (preset table2)", less),
        Example("equal", f"bisection between the two at t={t:.12f}", equal),
    ]
