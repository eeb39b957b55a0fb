"""Hot numeric loops: closed-form geodesics, multi-start Newton, RK4.

Every kernel exists twice. The scalar ``*_scalar`` / ``*_numba`` functions
are written against :mod:`math` and compiled with numba when it is
enabled; with numba disabled they still run as plain Python. The
``*_numpy`` functions are independent vectorised versions that process a
whole batch of starts (or initial conditions) per array operation. The two
paths are cross-checked in the test suite and compared in
``benchmarks/bench_kernels.py``.

Geodesics start at the origin with unit speed. With ``c = cos(theta)``,
``w = sin(theta)`` and ``phi = w*t`` the curve is

    x = (2c/w) sin(phi/2) cos(phi/2 + alpha)
    y = (2c/w) sin(phi/2) sin(phi/2 + alpha)
    z = w t + c^2/(2 w^2) [(phi - sin phi) + (1 - cos phi) sin(phi + 2 alpha)]

For ``|phi| < SERIES_PHI`` a Taylor expansion in ``phi`` around the planar
(``w = 0``) curve is used instead, which avoids the cancellation in the
``1/w^2`` factor.
"""

import math

import numpy as np

from ._accel import njit, resolve_backend

HALF_PI = 0.5 * math.pi
TWO_PI = 2.0 * math.pi

# |w t| below this switches to the planar series; truncation error ~phi^6/40320.
SERIES_PHI = 1e-2
MAX_HALVINGS = 40


# ---------------------------------------------------------------------------
# closed form, scalar
# ---------------------------------------------------------------------------

@njit(cache=True)
def helix_point(alpha, c, w, t):
    """Exact closed form; loses accuracy as ``w t -> 0``."""
    phi = w * t
    h = math.sin(0.5 * phi)
    r = 2.0 * c * h / w
    x = r * math.cos(0.5 * phi + alpha)
    y = r * math.sin(0.5 * phi + alpha)
    z = phi + c * c / (2.0 * w * w) * (
        (phi - math.sin(phi)) + 2.0 * h * h * math.sin(phi + 2.0 * alpha))
    return x, y, z


@njit(cache=True)
def planar_series_point(alpha, c, w, t):
    """Taylor expansion in ``phi = w t``; valid for any ``w`` including 0."""
    phi = w * t
    p2 = phi * phi
    sinc_half = 1.0 - p2 / 24.0 + p2 * p2 / 1920.0
    f_sin = phi * (1.0 / 6.0 - p2 / 120.0 + p2 * p2 / 5040.0)
    f_cos = 0.5 - p2 / 24.0 + p2 * p2 / 720.0
    ct = c * t
    r = ct * sinc_half
    x = r * math.cos(0.5 * phi + alpha)
    y = r * math.sin(0.5 * phi + alpha)
    z = phi + 0.5 * ct * ct * (f_sin + f_cos * math.sin(phi + 2.0 * alpha))
    return x, y, z


@njit(cache=True)
def point_scalar(alpha, theta, t):
    if abs(theta) == HALF_PI:
        return 0.0, 0.0, math.copysign(t, theta)
    c = math.cos(theta)
    w = math.sin(theta)
    if abs(w * t) < SERIES_PHI:
        return planar_series_point(alpha, c, w, t)
    return helix_point(alpha, c, w, t)


@njit(cache=True)
def tangent_scalar(alpha, theta, t):
    if abs(theta) == HALF_PI:
        return 0.0, 0.0, math.copysign(1.0, theta)
    c = math.cos(theta)
    w = math.sin(theta)
    x, _, _ = point_scalar(alpha, theta, t)
    vx = c * math.cos(w * t + alpha)
    vy = c * math.sin(w * t + alpha)
    return vx, vy, w + x * vy


# ---------------------------------------------------------------------------
# closed form, vectorised
# ---------------------------------------------------------------------------

def point_numpy(alpha, theta, t):
    """Vectorised closed form; returns an array of shape ``broadcast + (3,)``."""
    alpha, theta, t = np.broadcast_arrays(
        np.asarray(alpha, float), np.asarray(theta, float), np.asarray(t, float))
    c = np.cos(theta)
    w = np.sin(theta)
    phi = w * t
    small = np.abs(phi) < SERIES_PHI
    axis = np.abs(theta) == HALF_PI

    p2 = phi * phi
    sinc_half = 1.0 - p2 / 24.0 + p2 * p2 / 1920.0
    f_sin = phi * (1.0 / 6.0 - p2 / 120.0 + p2 * p2 / 5040.0)
    f_cos = 0.5 - p2 / 24.0 + p2 * p2 / 720.0
    ct = c * t
    r_series = ct * sinc_half
    z_series = phi + 0.5 * ct * ct * (f_sin + f_cos * np.sin(phi + 2.0 * alpha))

    w_safe = np.where(small, 1.0, w)
    h = np.sin(0.5 * phi)
    r_helix = 2.0 * c * h / w_safe
    z_helix = phi + c * c / (2.0 * w_safe * w_safe) * (
        (phi - np.sin(phi)) + 2.0 * h * h * np.sin(phi + 2.0 * alpha))

    r = np.where(small, r_series, r_helix)
    z = np.where(small, z_series, z_helix)
    x = r * np.cos(0.5 * phi + alpha)
    y = r * np.sin(0.5 * phi + alpha)
    x = np.where(axis, 0.0, x)
    y = np.where(axis, 0.0, y)
    z = np.where(axis, np.copysign(t, theta), z)
    return np.stack([x, y, z], axis=-1)


# ---------------------------------------------------------------------------
# multi-start damped Newton, scalar loop
# ---------------------------------------------------------------------------

@njit(cache=True)
def normalize_params(alpha, theta, s):
    """Map (alpha, theta, s) to alpha in [-pi, pi), |theta| <= pi/2, s >= 0."""
    if s < 0.0:
        s = -s
        theta = -theta
        alpha += math.pi
    # wrap only when needed: (v + pi) % 2pi quantises v to ulp(pi)
    if not -math.pi <= theta < math.pi:
        theta = (theta + math.pi) % TWO_PI - math.pi
    if theta > HALF_PI:
        theta = math.pi - theta
        alpha += math.pi
    elif theta < -HALF_PI:
        theta = -math.pi - theta
        alpha += math.pi
    if not -math.pi <= alpha < math.pi:
        alpha = (alpha + math.pi) % TWO_PI - math.pi
    return alpha, theta, s


@njit(cache=True)
def _miss(alpha, theta, s, tx, ty, tz):
    x, y, z = point_scalar(alpha, theta, s)
    return x - tx, y - ty, z - tz


@njit(cache=True)
def newton_starts_numba(target, alpha0, theta0, s0, tol, max_iter, h, s_max):
    n = alpha0.shape[0]
    out = np.empty((n, 4))
    tx, ty, tz = target[0], target[1], target[2]
    jac = np.empty((3, 3))
    step = np.empty(3)
    for k in range(n):
        a, th, s = normalize_params(alpha0[k], theta0[k], s0[k])
        f0, f1, f2 = _miss(a, th, s, tx, ty, tz)
        r = math.sqrt(f0 * f0 + f1 * f1 + f2 * f2)
        it = 0
        while it < max_iter and r > tol:
            for j in range(3):
                da = h if j == 0 else 0.0
                dt = h if j == 1 else 0.0
                ds = h if j == 2 else 0.0
                p0, p1, p2 = _miss(a + da, th + dt, s + ds, tx, ty, tz)
                m0, m1, m2 = _miss(a - da, th - dt, s - ds, tx, ty, tz)
                jac[0, j] = (p0 - m0) / (2.0 * h)
                jac[1, j] = (p1 - m1) / (2.0 * h)
                jac[2, j] = (p2 - m2) / (2.0 * h)
            det = (jac[0, 0] * (jac[1, 1] * jac[2, 2] - jac[1, 2] * jac[2, 1])
                   - jac[0, 1] * (jac[1, 0] * jac[2, 2] - jac[1, 2] * jac[2, 0])
                   + jac[0, 2] * (jac[1, 0] * jac[2, 1] - jac[1, 1] * jac[2, 0]))
            if not (abs(det) > 1e-300):
                break
            # Cramer's rule for J step = -f
            b0, b1, b2 = -f0, -f1, -f2
            step[0] = (b0 * (jac[1, 1] * jac[2, 2] - jac[1, 2] * jac[2, 1])
                       - jac[0, 1] * (b1 * jac[2, 2] - jac[1, 2] * b2)
                       + jac[0, 2] * (b1 * jac[2, 1] - jac[1, 1] * b2)) / det
            step[1] = (jac[0, 0] * (b1 * jac[2, 2] - jac[1, 2] * b2)
                       - b0 * (jac[1, 0] * jac[2, 2] - jac[1, 2] * jac[2, 0])
                       + jac[0, 2] * (jac[1, 0] * b2 - b1 * jac[2, 0])) / det
            step[2] = (jac[0, 0] * (jac[1, 1] * b2 - b1 * jac[2, 1])
                       - jac[0, 1] * (jac[1, 0] * b2 - b1 * jac[2, 0])
                       + b0 * (jac[1, 0] * jac[2, 1] - jac[1, 1] * jac[2, 0])) / det
            lam = 1.0
            accepted = False
            na, nt, ns, rn = a, th, s, r
            g0, g1, g2 = f0, f1, f2
            for _ in range(MAX_HALVINGS):
                na, nt, ns = normalize_params(
                    a + lam * step[0], th + lam * step[1], s + lam * step[2])
                g0, g1, g2 = _miss(na, nt, ns, tx, ty, tz)
                rn = math.sqrt(g0 * g0 + g1 * g1 + g2 * g2)
                if rn < r:
                    accepted = True
                    break
                lam *= 0.5
            if not accepted:
                break
            a, th, s, r = na, nt, ns, rn
            f0, f1, f2 = g0, g1, g2
            it += 1
            if s > s_max:
                break
        out[k, 0] = a
        out[k, 1] = th
        out[k, 2] = s
        out[k, 3] = r
    return out


# ---------------------------------------------------------------------------
# multi-start damped Newton, vectorised over starts
# ---------------------------------------------------------------------------

def normalize_params_numpy(alpha, theta, s):
    neg = s < 0.0
    s = np.where(neg, -s, s)
    theta = np.where(neg, -theta, theta)
    alpha = np.where(neg, alpha + math.pi, alpha)
    out = (theta < -math.pi) | (theta >= math.pi)
    theta = np.where(out, np.mod(theta + math.pi, TWO_PI) - math.pi, theta)
    hi = theta > HALF_PI
    lo = theta < -HALF_PI
    theta = np.where(hi, math.pi - theta, np.where(lo, -math.pi - theta, theta))
    alpha = np.where(hi | lo, alpha + math.pi, alpha)
    out = (alpha < -math.pi) | (alpha >= math.pi)
    alpha = np.where(out, np.mod(alpha + math.pi, TWO_PI) - math.pi, alpha)
    return alpha, theta, s


def newton_starts_numpy(target, alpha0, theta0, s0, tol, max_iter, h, s_max):
    target = np.asarray(target, float)
    a, th, s = normalize_params_numpy(
        np.asarray(alpha0, float), np.asarray(theta0, float), np.asarray(s0, float))
    f = point_numpy(a, th, s) - target
    r = np.linalg.norm(f, axis=1)
    active = r > tol
    for _ in range(max_iter):
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        pa, pt, ps, fa, ra = a[idx], th[idx], s[idx], f[idx], r[idx]
        jac = np.empty((idx.size, 3, 3))
        for j in range(3):
            d = np.zeros(3)
            d[j] = h
            fp = point_numpy(pa + d[0], pt + d[1], ps + d[2])
            fm = point_numpy(pa - d[0], pt - d[1], ps - d[2])
            jac[:, :, j] = (fp - fm) / (2.0 * h)
        det = np.linalg.det(jac)
        ok = np.abs(det) > 1e-300
        step = np.zeros((idx.size, 3))
        if ok.any():
            step[ok] = np.linalg.solve(jac[ok], -fa[ok][:, :, None])[:, :, 0]

        lam = np.ones(idx.size)
        accepted = np.zeros(idx.size, bool)
        na, nt, ns, nf, nr = pa.copy(), pt.copy(), ps.copy(), fa.copy(), ra.copy()
        pending = ok.copy()
        for _ in range(MAX_HALVINGS):
            if not pending.any():
                break
            q = np.nonzero(pending)[0]
            ta, tt, ts = normalize_params_numpy(
                pa[q] + lam[q] * step[q, 0],
                pt[q] + lam[q] * step[q, 1],
                ps[q] + lam[q] * step[q, 2])
            tf = point_numpy(ta, tt, ts) - target
            tr = np.linalg.norm(tf, axis=1)
            better = tr < ra[q]
            hit = q[better]
            na[hit], nt[hit], ns[hit] = ta[better], tt[better], ts[better]
            nf[hit], nr[hit] = tf[better], tr[better]
            accepted[hit] = True
            pending[hit] = False
            lam[q[~better]] *= 0.5

        a[idx], th[idx], s[idx], f[idx], r[idx] = na, nt, ns, nf, nr
        still = accepted & (nr > tol) & (ns <= s_max)
        active[idx] = still
    return np.column_stack([a, th, s, r])


def newton_starts(target, alpha0, theta0, s0, tol, max_iter, h, s_max, backend=None):
    """Run damped Newton from every start; rows are (alpha, theta, s, residual)."""
    args = (np.asarray(target, float), np.ascontiguousarray(alpha0, float),
            np.ascontiguousarray(theta0, float), np.ascontiguousarray(s0, float),
            float(tol), int(max_iter), float(h), float(s_max))
    if resolve_backend(backend) == "numba":
        return newton_starts_numba(*args)
    return newton_starts_numpy(*args)


# ---------------------------------------------------------------------------
# geodesic ODE, RK4
# ---------------------------------------------------------------------------

@njit(cache=True)
def accel_scalar(x, v1, v2, v3):
    """-Gamma^i_jk v^j v^k for the Nil metric (only x enters)."""
    return (x * v2 * v2 - v2 * v3,
            v1 * v3 - x * v1 * v2,
            x * v1 * v3 - (x * x - 1.0) * v1 * v2)


@njit(cache=True)
def rk4_numba(state0, h, steps, stride):
    n_rec = steps // stride + 1
    out = np.empty((n_rec, 6))
    x, y, z, u, v, w = state0[0], state0[1], state0[2], state0[3], state0[4], state0[5]
    out[0, 0] = x
    out[0, 1] = y
    out[0, 2] = z
    out[0, 3] = u
    out[0, 4] = v
    out[0, 5] = w
    rec = 1
    for i in range(1, steps + 1):
        a1, b1, c1 = accel_scalar(x, u, v, w)
        xa = x + 0.5 * h * u
        ua, va, wa = u + 0.5 * h * a1, v + 0.5 * h * b1, w + 0.5 * h * c1
        a2, b2, c2 = accel_scalar(xa, ua, va, wa)
        xb = x + 0.5 * h * ua
        ub, vb, wb = u + 0.5 * h * a2, v + 0.5 * h * b2, w + 0.5 * h * c2
        a3, b3, c3 = accel_scalar(xb, ub, vb, wb)
        xc = x + h * ub
        uc, vc, wc = u + h * a3, v + h * b3, w + h * c3
        a4, b4, c4 = accel_scalar(xc, uc, vc, wc)
        x += h / 6.0 * (u + 2.0 * ua + 2.0 * ub + uc)
        y += h / 6.0 * (v + 2.0 * va + 2.0 * vb + vc)
        z += h / 6.0 * (w + 2.0 * wa + 2.0 * wb + wc)
        u += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        v += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        w += h / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4)
        if i % stride == 0:
            out[rec, 0] = x
            out[rec, 1] = y
            out[rec, 2] = z
            out[rec, 3] = u
            out[rec, 4] = v
            out[rec, 5] = w
            rec += 1
    return out


def _accel_numpy(x, vel):
    v1, v2, v3 = vel[..., 0], vel[..., 1], vel[..., 2]
    return np.stack([x * v2 * v2 - v2 * v3,
                     v1 * v3 - x * v1 * v2,
                     x * v1 * v3 - (x * x - 1.0) * v1 * v2], axis=-1)


def rk4_numpy(states0, h, steps, stride):
    """Batch RK4; ``states0`` has shape (n, 6), result (n, steps//stride + 1, 6)."""
    states0 = np.atleast_2d(np.asarray(states0, float))
    pos = states0[:, :3].copy()
    vel = states0[:, 3:].copy()
    out = np.empty((states0.shape[0], steps // stride + 1, 6))
    out[:, 0] = states0
    rec = 1
    for i in range(1, steps + 1):
        k1v = _accel_numpy(pos[:, 0], vel)
        v2 = vel + 0.5 * h * k1v
        k2v = _accel_numpy(pos[:, 0] + 0.5 * h * vel[:, 0], v2)
        v3 = vel + 0.5 * h * k2v
        k3v = _accel_numpy(pos[:, 0] + 0.5 * h * v2[:, 0], v3)
        v4 = vel + h * k3v
        k4v = _accel_numpy(pos[:, 0] + h * v3[:, 0], v4)
        pos = pos + h / 6.0 * (vel + 2.0 * v2 + 2.0 * v3 + v4)
        vel = vel + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if i % stride == 0:
            out[:, rec, :3] = pos
            out[:, rec, 3:] = vel
            rec += 1
    return out


def rk4(states0, h, steps, stride=1, backend=None):
    """Integrate a batch of geodesics; see :func:`rk4_numpy` for shapes."""
    states0 = np.atleast_2d(np.asarray(states0, float))
    if resolve_backend(backend) == "numba":
        return np.stack([rk4_numba(np.ascontiguousarray(s0), float(h), int(steps), int(stride))
                         for s0 in states0])
    return rk4_numpy(states0, float(h), int(steps), int(stride))
