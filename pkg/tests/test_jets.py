import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confsasaki import jets
from confsasaki.jets import Jet, JetError

from conftest import richardson


def test_lift_coordinate_definition():
    j = jets.lift_coordinate(0, (2.0, 5.0), 2)
    assert j.value == 2.0
    np.testing.assert_array_equal(j.gradient, [1.0, 0.0])
    np.testing.assert_array_equal(j.hessian, np.zeros((2, 2)))


def test_lift_order_zero_has_no_derivatives():
    j = jets.lift_coordinate(1, (0.0, 0.0), 0)
    assert j.order == 0
    assert j.value == 0.0


def test_lift_out_of_range():
    with pytest.raises((JetError, IndexError, ValueError)):
        jets.lift_coordinate(3, (0.0, 0.0), 1)


def test_product_rule_forced():
    x = jets.variables((2.0, 5.0), 2)
    f = x[0] * x[1]
    assert f.value == 10.0
    np.testing.assert_allclose(f.gradient, [5.0, 2.0])
    np.testing.assert_allclose(f.hessian, [[0.0, 1.0], [1.0, 0.0]])


def test_exp_taylor_at_zero():
    x = jets.variables((0.0,), 3)[0]
    e = jets.exp(x)
    assert e.value == 1.0
    assert e.gradient[0] == 1.0 and e.hessian[0, 0] == 1.0 and e.third[0, 0, 0] == 1.0


def test_cube_by_multiplication():
    x = jets.variables((3.0,), 2)[0]
    c = (x * x) * x
    assert c.value == 27.0 and c.gradient[0] == 27.0 and c.hessian[0, 0] == 18.0


def test_errors():
    x = jets.variables((0.0, 1.0), 2)
    with pytest.raises(ZeroDivisionError):
        _ = 1.0 / x[0]
    with pytest.raises(JetError):
        jets.sqrt(x[0] - 1.0)
    other = jets.variables((0.0,), 2)[0]
    with pytest.raises(JetError):
        _ = x[0] + other


def _field(x):
    """A field built from the full arithmetic set."""
    a = x[0] * x[1] - x[2] / (2.0 + x[0] * x[0])
    b = jets.exp(0.3 * x[1] - x[2]) * jets.sqrt(1.5 + x[0] * x[0] + x[2] * x[2])
    return a + jets.power(b, 1.5) - (-x[1]) ** 3


def test_finite_difference_oracle(rng):
    pts = rng.uniform(-0.8, 0.8, size=(100, 3))
    plain = lambda p: float(_field(p))  # noqa: E731  plain floats go through numpy
    for p in pts:
        j = _field(jets.variables(p, 2))
        g_fd, H_fd = richardson(plain, p, 1e-3)
        assert np.max(np.abs(j.gradient - g_fd)) <= 1e-6 * max(1.0, np.max(np.abs(g_fd)))
        assert np.max(np.abs(j.hessian - H_fd)) <= 1e-6 * max(1.0, np.max(np.abs(H_fd)))


def test_third_order_against_hessian_differences(rng):
    for p in rng.uniform(-0.5, 0.5, size=(10, 3)):
        j = _field(jets.variables(p, 3))
        h = 1e-4
        fd = np.zeros((3, 3, 3))
        for k in range(3):
            e = np.zeros(3)
            e[k] = h
            fd[:, :, k] = (_field(jets.variables(p + e, 2)).hessian - _field(jets.variables(p - e, 2)).hessian) / (2 * h)
        assert np.max(np.abs(j.third - fd)) <= 1e-6 * max(1.0, np.max(np.abs(fd)))
        # full symmetry of the third block
        assert np.max(np.abs(j.third - j.third.transpose(1, 0, 2))) <= 1e-12
        assert np.max(np.abs(j.third - j.third.transpose(0, 2, 1))) <= 1e-12


def test_order_zero_is_plain_arithmetic():
    x = jets.variables((0.7, -0.2), 0)
    f = jets.exp(x[0]) * x[1] + x[0] / 3.0
    assert f.order == 0
    assert np.isclose(float(f.value), np.exp(0.7) * -0.2 + 0.7 / 3.0, rtol=0, atol=1e-15)


def test_compose_chain_rule(rng):
    p = rng.uniform(-0.5, 0.5, size=2)
    u = jets.variables(p, 3)
    inner = jets.stack([u[0] * u[1], u[0] + jets.exp(u[1])])
    y = jets.variables(inner.value, 3)
    outer = jets.stack([y[0] * y[0] * y[1]])
    direct = jets.stack([(u[0] * u[1]) * (u[0] * u[1]) * (u[0] + jets.exp(u[1]))])
    comp = jets.compose(outer, inner)
    for k in range(4):
        np.testing.assert_allclose(comp.c[k], direct.c[k], rtol=1e-12, atol=1e-12)


def test_inverse_matrix_jet(rng):
    p = rng.uniform(-0.5, 0.5, size=2)
    u = jets.variables(p, 2)
    m = jets.stack([jets.stack([2.0 + u[0] * u[0], u[1]]), jets.stack([u[1], 3.0 + u[0]])])
    mi = jets.inv(m)
    prod = jets.contract("ij,jk->ik", m, mi)
    np.testing.assert_allclose(prod.value, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(prod.gradient, 0.0, atol=1e-13)
    np.testing.assert_allclose(prod.hessian, 0.0, atol=1e-12)


coef = st.floats(-3.0, 3.0, allow_nan=False)


def _jet_from(vals, p):
    x = jets.variables(p, 3)
    a, b, c = vals
    return a + b * x[0] + c * x[0] * x[1]


@settings(max_examples=60, deadline=None)
@given(st.tuples(coef, coef, coef), st.tuples(coef, coef, coef), st.tuples(coef, coef, coef))
def test_add_mul_commute_and_associate(u, v, w):
    p = (0.3, -0.4)
    a, b, c = _jet_from(u, p), _jet_from(v, p), _jet_from(w, p)
    for x, y in (((a + b) + c, a + (b + c)), (a * b, b * a), ((a * b) * c, a * (b * c)), (a + b, b + a)):
        for k in range(4):
            np.testing.assert_allclose(x.c[k], y.c[k], rtol=1e-12, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(-1.0, 1.0))
def test_sqrt_squares_back(a, s):
    x = jets.variables((s,), 3)[0]
    v = a + x * x
    r = jets.sqrt(v)
    back = r * r
    for k in range(4):
        np.testing.assert_allclose(back.c[k], v.c[k], rtol=1e-12, atol=1e-12)
