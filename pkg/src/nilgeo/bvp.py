"""Geodesic boundary-value problem: which geodesic from the origin hits a target?

Unknowns are the initial heading, pitch and the arc length, ``(alpha, theta, s)``.
The closed-form endpoint map is inverted by damped Newton with a
central-difference Jacobian, started from every cell of an
``alpha x theta`` grid. Solutions are kept only inside the window
``|w s| < 2 pi``, where geodesics are still minimising, so that the shortest
root found is the distance.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import NilPoint, as_point, invert, translation_to
from .flow import GeodesicDirection, geodesic_point, unit_tangent_at_origin

AXIS_EPS = 1e-14
DEDUP_TOL = 1e-6
# One ulp of alpha moves z by ~s^2 ulp(alpha), so far targets cannot meet an
# absolute tolerance; acceptance uses max(tol, FLOOR_ULPS * eps * |target|^2).
FLOOR_ULPS = 64.0


class SolverFailure(RuntimeError):
    """No start converged inside the search window."""

    def __init__(self, message, best_residual=math.inf, target=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.target = target


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-10
    max_iter: int = 60
    n_alpha: int = 24
    n_theta: int = 17
    s_window: float = 4.0
    ws_bound: float = 2.0 * math.pi - 1e-6
    fd_step: float = 1e-7

    def __post_init__(self):
        for name in ("tol", "s_window", "ws_bound", "fd_step"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"SolverConfig.{name} must be positive, got {v!r}")
        if self.max_iter < 1:
            raise ValueError("SolverConfig.max_iter must be >= 1")
        if self.n_alpha < 2 or self.n_theta < 2:
            raise ValueError("SolverConfig grid sizes must be >= 2")

    def accept_tol(self, scale: float) -> float:
        """Residual accepted for a target at Euclidean distance ``scale``."""
        return max(self.tol, FLOOR_ULPS * np.finfo(float).eps * max(1.0, scale) ** 2)

    def start_grid(self):
        """Flattened (alpha, theta) starts; cell index = i * n_theta + j."""
        alphas = -math.pi + 2.0 * math.pi * np.arange(self.n_alpha) / self.n_alpha
        thetas = -kernels.HALF_PI + math.pi * (np.arange(self.n_theta) + 0.5) / self.n_theta
        a, t = np.meshgrid(alphas, thetas, indexing="ij")
        return a.ravel(), t.ravel()


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class ShootingSolution:
    direction: GeodesicDirection
    s: float
    residual: float
    branch: int

    @property
    def tangent(self):
        return unit_tangent_at_origin(self.direction)

    def endpoint(self) -> NilPoint:
        return geodesic_point(self.direction, self.s)


def _on_axis(p: NilPoint) -> bool:
    return math.hypot(p.x, p.y) <= AXIS_EPS * max(1.0, abs(p.z))


def _axis_solution(p: NilPoint) -> ShootingSolution:
    d = GeodesicDirection(0.0, math.copysign(kernels.HALF_PI, p.z))
    s = abs(p.z)
    end = geodesic_point(d, s)
    return ShootingSolution(d, s, math.dist(tuple(end), tuple(p)), -1)


def shoot(target, cfg: SolverConfig = DEFAULT_CONFIG, backend=None) -> list:
    """All geodesics from the origin to ``target`` found in the search window.

    Returns de-duplicated :class:`ShootingSolution` objects sorted by length,
    then heading, then pitch. Raises ValueError for the origin and
    :class:`SolverFailure` if no start converges.
    """
    p = as_point(target)
    if p.x == 0.0 and p.y == 0.0 and p.z == 0.0:
        raise ValueError("target must differ from the origin")
    if _on_axis(p):
        return [_axis_solution(p)]

    euclid = math.sqrt(p.x * p.x + p.y * p.y + p.z * p.z)
    s_max = cfg.s_window * euclid
    a0, t0 = cfg.start_grid()
    s0 = np.full(a0.shape, euclid)
    res = kernels.newton_starts(p.as_array(), a0, t0, s0, cfg.tol, cfg.max_iter,
                                cfg.fd_step, s_max, backend=backend)
    alpha, theta, s, resid = res.T
    ok = ((resid <= cfg.accept_tol(euclid)) & (s > 0.0) & (s <= s_max)
          & (np.abs(np.sin(theta) * s) < cfg.ws_bound))
    if not ok.any():
        best = float(np.nanmin(resid))
        raise SolverFailure(
            f"no geodesic to {p} converged (best residual {best:.3e})",
            best_residual=best, target=p)

    idx = np.nonzero(ok)[0]
    order = np.lexsort((theta[idx], alpha[idx], s[idx]))
    kept = []
    for k in idx[order]:
        d = GeodesicDirection(alpha[k], theta[k])
        tan = np.array(list(unit_tangent_at_origin(d)))
        for i, (sol, sol_tan) in enumerate(kept):
            if abs(sol.s - s[k]) <= DEDUP_TOL and np.max(np.abs(sol_tan - tan)) <= DEDUP_TOL:
                if resid[k] < sol.residual:
                    kept[i] = (ShootingSolution(d, float(s[k]), float(resid[k]), int(k)), tan)
                break
        else:
            kept.append((ShootingSolution(d, float(s[k]), float(resid[k]), int(k)), tan))
    return [sol for sol, _ in kept]


def local_target(p, q) -> NilPoint:
    """``q`` expressed in the frame where ``p`` has been translated to the origin."""
    return invert(translation_to(p)).act(q)


def distance(p, q, cfg: SolverConfig = DEFAULT_CONFIG, backend=None) -> float:
    p, q = as_point(p), as_point(q)
    if p == q:
        return 0.0
    target = local_target(p, q)
    if target == NilPoint.origin():
        return 0.0
    return shoot(target, cfg, backend=backend)[0].s


def initial_direction(p, q, cfg: SolverConfig = DEFAULT_CONFIG, backend=None):
    """Direction and unit tangent, in ``p``'s frame, of the shortest geodesic to ``q``."""
    p, q = as_point(p), as_point(q)
    if p == q:
        raise ValueError("initial direction is undefined for coincident points")
    sol = shoot(local_target(p, q), cfg, backend=backend)[0]
    return sol.direction, unit_tangent_at_origin(sol.direction)
