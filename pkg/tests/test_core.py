import math

import numpy as np
import pytest

from nilgeo.core import (ORIGIN, MetricTensor, NilPoint, NilTranslation, TangentVector,
                         angle_between, compose, invert, linear_rotation, metric_at,
                         pushforward, quadratic_map, reflect_tangent, reflect_y_axis,
                         rotate_about_z, rotate_tangent, translation_to)


def close(p, q, tol=1e-12):
    return max(abs(a - b) for a, b in zip(p, q)) <= tol


# -- types ------------------------------------------------------------------

def test_point_rejects_non_finite():
    with pytest.raises(ValueError):
        NilPoint(0.0, math.nan, 0.0)
    with pytest.raises(ValueError):
        NilPoint(math.inf, 0.0, 0.0)


def test_point_str_keeps_full_precision():
    p = NilPoint(1 / 3, -2.0, 1e-17)
    assert tuple(float(s) for s in str(p).split(",")) == tuple(p)


def test_tangent_rejects_non_finite():
    with pytest.raises(ValueError):
        TangentVector(0.0, 0.0, math.inf)


# -- translations -------------------------------------------------------------

def test_compose_identity():
    t = NilTranslation(1.5, -2.0, 0.25)
    assert compose(NilTranslation.identity(), t) == t
    assert compose(t, NilTranslation.identity()) == t


def test_point_action_by_hand():
    assert NilTranslation(4, 5, 6).act((1, 2, 3)) == NilPoint(5, 7, 17)


def test_translations_do_not_commute():
    a = compose(NilTranslation(1, 0, 0), NilTranslation(0, 1, 0))
    b = compose(NilTranslation(0, 1, 0), NilTranslation(1, 0, 0))
    assert a.a == b.a and a.b == b.b
    assert a.c != b.c


def test_invert_examples():
    x3, y2, z3 = 0.7, 1.9, 0.5
    assert invert(NilTranslation(x3, 0, z3)) == NilTranslation(-x3, 0, -z3)
    a13 = invert(NilTranslation(x3, y2, 0)).act(ORIGIN)
    assert close(a13, (-x3, -y2, x3 * y2))
    assert invert(NilTranslation.identity()) == NilTranslation.identity()


def test_translation_to_examples():
    m = translation_to((4, 0, 0.5)).matrix()
    assert list(m[0]) == [1, 4, 0, 0.5]
    assert m[2, 3] == 4
    assert translation_to(ORIGIN) == NilTranslation.identity()
    x3, z3 = 0.8, 0.5
    assert invert(translation_to((x3, 0, z3))).act((0, 0, z3)) == NilPoint(-x3, 0, 0)


def test_group_laws(rng):
    for _ in range(200):
        t1, t2, t3 = (NilTranslation(*rng.uniform(-3, 3, 3)) for _ in range(3))
        assert close(compose(compose(t1, t2), t3), compose(t1, compose(t2, t3)))
        assert close(compose(t1, invert(t1)), (0, 0, 0))
        assert close(compose(invert(t1), t1), (0, 0, 0))


def test_action_matches_matrix_product(rng):
    for _ in range(200):
        t = NilTranslation(*rng.uniform(-3, 3, 3))
        p = NilPoint(*rng.uniform(-3, 3, 3))
        row = p.homogeneous() @ t.matrix()
        assert row[0] == 1.0
        assert close(row[1:], t.act(p))
        # points are group elements: acting equals composing
        assert close(compose(translation_to(p), t), t.act(p))


def test_translation_to_round_trip(rng):
    for p in rng.uniform(-5, 5, (50, 3)):
        t = translation_to(p)
        assert close(t.act(ORIGIN), p)
        assert close(invert(t).act(p), (0, 0, 0))


# -- metric -------------------------------------------------------------------

def test_metric_entries():
    assert np.array_equal(metric_at(ORIGIN).matrix, np.eye(3))
    g = metric_at((1, 7, -3))
    assert g.matrix[1, 1] == 2 and g.matrix[1, 2] == -1 and g.matrix[2, 1] == -1
    assert g.det == pytest.approx(1, abs=1e-12)
    inv = g.inverse
    assert (inv[1, 1], inv[1, 2], inv[2, 2]) == (1, 1, 2)


@pytest.mark.parametrize("x", np.linspace(-50, 50, 21))
def test_metric_det_and_inverse(x):
    g = MetricTensor(x)
    assert abs(g.det - 1) <= 1e-12 * max(1.0, x * x)
    np.testing.assert_allclose(g.matrix @ g.inverse, np.eye(3), atol=1e-12)


def test_inner_matches_matrix(rng):
    for _ in range(50):
        g = MetricTensor(rng.uniform(-4, 4))
        u, v = rng.normal(size=3), rng.normal(size=3)
        assert g.inner(u, v) == pytest.approx(u @ g.matrix @ v, rel=1e-12, abs=1e-12)


# -- pushforward and angles -------------------------------------------------------

def test_pushforward_examples():
    t = NilTranslation(0.3, -1, 2)
    assert tuple(pushforward(t, TangentVector(1, 0, 0))) == (1, 0, 0)
    v = pushforward(NilTranslation(2, 0, 0), TangentVector(0, 1, 0))
    assert tuple(v) == (0, 1, 2)
    assert v.base == NilPoint(2, 0, 0)
    assert v.norm() == pytest.approx(1, abs=1e-15)
    w = TangentVector(0.4, -0.2, 0.9)
    assert tuple(pushforward(NilTranslation.identity(), w)) == tuple(w)


def test_pushforward_is_isometric(rng):
    for _ in range(200):
        t = NilTranslation(*rng.uniform(-10, 10, 3))
        v = TangentVector(*rng.normal(size=3))
        pv = pushforward(t, v)
        assert abs(pv.norm() - np.linalg.norm(v.as_array())) <= 1e-12 * max(1.0, pv.norm())


def test_angle_examples():
    assert angle_between((1, 0, 0), (0, 0, 1), ORIGIN) == pytest.approx(math.pi / 2)
    u = TangentVector(0.3, 0.2, 0.1, base=NilPoint(3, 0, 0))
    assert angle_between(u, u) == pytest.approx(0, abs=1e-7)
    a = angle_between((0, 1, 0), (0, 0, 1), (1, 0, 0))
    assert a == pytest.approx(math.acos(-1 / math.sqrt(2)), abs=1e-12)
    assert a == pytest.approx(2.35619, abs=1e-5)


def test_angle_zero_vector_raises():
    with pytest.raises(ValueError):
        angle_between((0, 0, 0), (1, 0, 0), ORIGIN)


def test_angle_symmetric_and_scale_invariant(rng):
    for _ in range(100):
        p = NilPoint(*rng.uniform(-3, 3, 3))
        u, v = rng.normal(size=3), rng.normal(size=3)
        a = angle_between(u, v, p)
        assert angle_between(v, u, p) == pytest.approx(a, abs=1e-12)
        assert angle_between(3.7 * u, 0.01 * v, p) == pytest.approx(a, abs=1e-9)
        assert 0 <= a <= math.pi


# -- isometries fixing the origin ----------------------------------------------------

def test_rotation_examples():
    p = NilPoint(0.3, -1.2, 2.0)
    assert rotate_about_z(p, 0.0) == p
    assert close(rotate_about_z((1, 0, 0), math.pi / 2), (0, 1, 0), 1e-15)


def test_quadratic_map_examples():
    assert quadratic_map((2, 3, 10), "forward") == NilPoint(2, 3, 7)
    p = NilPoint(0.5, -4, 1)
    assert quadratic_map(quadratic_map(p, "forward"), "backward") == p
    with pytest.raises(ValueError):
        quadratic_map(p, "sideways")


def test_rotation_is_conjugated_linear_rotation(rng):
    # the rotation formula and its conjugacy by the quadratic map must agree
    for _ in range(500):
        p = NilPoint(*rng.uniform(-5, 5, 3))
        om = rng.uniform(-math.pi, math.pi)
        conj = quadratic_map(linear_rotation(quadratic_map(p, "forward"), om), "backward")
        scale = max(1.0, p.x * p.x + p.y * p.y)
        assert close(rotate_about_z(p, om), conj, 1e-12 * scale)


def test_rotation_group_property(rng):
    for _ in range(100):
        p = NilPoint(*rng.uniform(-3, 3, 3))
        a, b = rng.uniform(-3, 3, 2)
        assert close(rotate_about_z(rotate_about_z(p, a), b), rotate_about_z(p, a + b), 1e-12)


def test_reflection_examples():
    assert reflect_y_axis((1, 2, 3)) == NilPoint(-1, 2, -3)
    p = NilPoint(0.1, 0.2, -0.7)
    assert reflect_y_axis(reflect_y_axis(p)) == p


def _pullback_metric_error(f, df, p, rng):
    # an isometry satisfies g(f(p))(df v, df u) = g(p)(v, u)
    v, u = TangentVector(*rng.normal(size=3), base=p), TangentVector(*rng.normal(size=3), base=p)
    fv, fu = df(v), df(u)
    assert fv.base == f(p)
    return abs(metric_at(fv.base).inner(fv, fu) - metric_at(p).inner(v, u))


def test_rotation_and_reflection_are_isometries(rng):
    for _ in range(200):
        p = NilPoint(*rng.uniform(-3, 3, 3))
        om = rng.uniform(-math.pi, math.pi)
        assert _pullback_metric_error(lambda q: rotate_about_z(q, om),
                                      lambda v: rotate_tangent(v, om), p, rng) < 1e-10
        assert _pullback_metric_error(reflect_y_axis, reflect_tangent, p, rng) < 1e-12


def test_rotate_tangent_is_the_differential(rng):
    h = 1e-6
    for _ in range(20):
        p = NilPoint(*rng.uniform(-2, 2, 3))
        v = rng.normal(size=3)
        om = rng.uniform(-3, 3)
        fd = (rotate_about_z(p.as_array() + h * v, om).as_array()
              - rotate_about_z(p.as_array() - h * v, om).as_array()) / (2 * h)
        np.testing.assert_allclose(tuple(rotate_tangent(TangentVector(*v, base=p), om)), fd,
                                   atol=1e-7)


def test_isometries_preserve_angles_of_pushed_pairs(rng):
    for _ in range(200):
        t = NilTranslation(*rng.uniform(-3, 3, 3))
        u = pushforward(t, TangentVector(*rng.normal(size=3)))
        v = pushforward(t, TangentVector(*rng.normal(size=3)))
        a = angle_between(u, v)
        om = rng.uniform(-math.pi, math.pi)
        ru, rv = rotate_tangent(u, om), rotate_tangent(v, om)
        assert angle_between(ru, rv) == pytest.approx(a, abs=1e-9)
        fu, fv = reflect_tangent(u), reflect_tangent(v)
        assert angle_between(fu, fv) == pytest.approx(a, abs=1e-9)
