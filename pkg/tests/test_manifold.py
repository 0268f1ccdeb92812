import numpy as np
import pytest

from confsasaki import jets
from confsasaki.manifold import (AnalyticField, GeometryError, MetricChart, bracket, christoffel, curvature_4,
                                 exterior_derivative_1form, exterior_derivative_2form, gradient, point_geometry,
                                 sectional_curvature)


def _chart(fn, dim, name="test"):
    return MetricChart(dim, AnalyticField(fn, name), np.array([[-1.0, 1.0]] * dim), name=name)


def euclid(dim):
    return _chart(lambda x: np.eye(dim), dim, "flat")


def sphere_stereo():
    """Round unit sphere in stereographic coordinates: K = 1."""
    def g(x):
        c = 4.0 / (1.0 + x[0] * x[0] + x[1] * x[1]) ** 2
        return [[c, 0.0], [0.0, c]]
    return _chart(g, 2, "sphere")


def hyperbolic_half_plane():
    """dx^2 + dy^2 over y^2, shifted so y = 2 + x[1] stays positive: K = -1."""
    def g(x):
        c = 1.0 / ((2.0 + x[1]) * (2.0 + x[1]))
        return [[c, 0.0], [0.0, c]]
    return _chart(g, 2, "hyperbolic")


def test_flat_metric_has_zero_christoffels_and_curvature(rng):
    ch = euclid(3)
    for p in rng.uniform(-0.5, 0.5, size=(5, 3)):
        assert np.max(np.abs(christoffel(ch, p))) == 0.0
        assert np.max(np.abs(point_geometry(ch, p).riemann0)) == 0.0


def test_linear_coordinate_change_of_flat_metric_stays_flat(rng):
    A = rng.normal(size=(3, 3)) + 3 * np.eye(3)
    G = A.T @ A
    ch = _chart(lambda x: G, 3)
    assert np.max(np.abs(point_geometry(ch, np.zeros(3)).riemann0)) <= 1e-14


@pytest.mark.parametrize("chart,K", [(sphere_stereo(), 1.0), (hyperbolic_half_plane(), -1.0)])
def test_constant_curvature_surfaces(chart, K, rng):
    for p in rng.uniform(-0.6, 0.6, size=(8, 2)):
        geo = point_geometry(chart, p)
        X, Y = rng.normal(size=2), rng.normal(size=2)
        assert sectional_curvature(geo, X, Y) == pytest.approx(K, abs=1e-10)


def test_curvature_symmetries(rng):
    ch = _chart(lambda x: [[1.0 + x[1] * x[1], x[0] * x[2], 0.0],
                           [x[0] * x[2], 2.0 + x[0], 0.1 * x[1]],
                           [0.0, 0.1 * x[1], 1.5 + x[2] * x[0]]], 3)
    p = np.array([0.2, -0.3, 0.1])
    X, Y, Z, W = rng.normal(size=(4, 3))
    r = lambda a, b, c, d: curvature_4(ch, p, a, b, c, d)  # noqa: E731
    assert abs(r(X, Y, Z, W) + r(Y, X, Z, W)) <= 1e-12
    assert abs(r(X, Y, Z, W) + r(X, Y, W, Z)) <= 1e-12
    assert abs(r(X, Y, Z, W) - r(Z, W, X, Y)) <= 1e-12
    assert abs(r(X, Y, Z, W) + r(Y, Z, X, W) + r(Z, X, Y, W)) <= 1e-12


def test_sign_convention_on_sphere():
    """R(X, Y)Z = [nabla_X, nabla_Y]Z - nabla_[X,Y]Z gives g(R(X,Y)Y, X) > 0 on the sphere."""
    ch = sphere_stereo()
    assert curvature_4(ch, np.zeros(2), np.array([1.0, 0]), np.array([0, 1.0]), np.array([0, 1.0]),
                       np.array([1.0, 0])) > 0


def test_bracket_of_fields():
    X = AnalyticField(lambda x: [x[1], 0.0 * x[0]])
    Y = AnalyticField(lambda x: [0.0 * x[0], x[0]])
    p = np.array([0.3, 0.7])
    # [y d_x, x d_y] = y d_y - x d_x
    np.testing.assert_allclose(bracket(X, Y, p), [-0.3, 0.7], atol=1e-15)


def test_d_squared_is_zero(rng):
    # s = x0 x1 x2 + x2^2, so ds = (x1 x2, x0 x2, x0 x1 + 2 x2)
    ds = AnalyticField(lambda x: [x[1] * x[2], x[0] * x[2], x[0] * x[1] + 2.0 * x[2]])
    X = AnalyticField(lambda x: [1.0 + x[1] * x[1], x[0], 0.3 + 0.0 * x[0]])
    Y = AnalyticField(lambda x: [x[2], 0.5 + 0.0 * x[0], x[0] * x[1]])
    for p in rng.uniform(-0.5, 0.5, size=(5, 3)):
        assert abs(exterior_derivative_1form(ds, p, X, Y)) <= 1e-12


def test_closed_one_form_detects_non_exact(rng):
    # alpha = x0 dx1 has d alpha(d0, d1) = 1
    alpha = AnalyticField(lambda x: [0.0 * x[0], x[0], 0.0 * x[0]])
    assert exterior_derivative_1form(alpha, np.zeros(3), np.array([1.0, 0, 0]), np.array([0, 1.0, 0])) \
        == pytest.approx(1.0, abs=1e-15)


def test_d_of_exact_two_form(rng):
    # alpha = (x1 x2, x0^2 x2, x0 x1^2); Phi_ij = d_i alpha_j - d_j alpha_i
    def Phi(x):
        M = [[0.0 * x[0], 2.0 * x[0] * x[2], x[1] * x[1]],
             [x[2], 0.0 * x[0], 2.0 * x[0] * x[1]],
             [x[1], x[0] * x[0], 0.0 * x[0]]]
        return [[M[i][j] - M[j][i] for j in range(3)] for i in range(3)]

    field = AnalyticField(Phi)
    Xf = AnalyticField(lambda x: [x[1], 1.0 + 0.0 * x[0], x[0] * x[2]])
    Y, Z = rng.normal(size=(2, 3))
    for p in rng.uniform(-0.5, 0.5, size=(4, 3)):
        assert abs(exterior_derivative_2form(field, p, Xf, Y, Z)) <= 1e-12


def test_gradient_is_metric_dual(rng):
    ch = sphere_stereo()
    s = AnalyticField(lambda x: x[0] * x[0] + 3.0 * x[1])
    p = np.array([0.1, 0.2])
    v = rng.normal(size=2)
    g = ch.metric_at(p)
    assert gradient(ch, s, p) @ g @ v == pytest.approx(2 * 0.1 * v[0] + 3 * v[1], abs=1e-14)


def test_bad_domain_and_order():
    with pytest.raises(GeometryError):
        MetricChart(2, AnalyticField(lambda x: np.eye(2)), np.array([[1.0, -1.0], [0.0, 1.0]]))
    ch = MetricChart(2, AnalyticField(lambda x: np.eye(2)), np.array([[-1.0, 1.0]] * 2), max_order=1)
    with pytest.raises(GeometryError):
        point_geometry(ch, np.zeros(2), order=2)
    with pytest.raises(GeometryError):
        point_geometry(ch, np.zeros(2), order=0)


def test_asymmetric_metric_rejected():
    ch = _chart(lambda x: [[1.0, 0.5], [0.0, 1.0]], 2)
    with pytest.raises(GeometryError):
        point_geometry(ch, np.zeros(2))
