import numpy as np
import pytest

from confsasaki import jets
from confsasaki.conformal import conformal_space
from confsasaki.identities import ricci_balances
from confsasaki.manifold import AnalyticField, GeometryError, MetricChart, point_geometry, sectional_curvature
from confsasaki.spaces import immersion_catalog, immersion_model_n
from confsasaki.submanifold import (FrameError, ImmersedSubmanifold, Immersion, classify, induced_chart,
                                    leaf_immersion)
from confsasaki.terms import relative

FLAT3 = MetricChart(3, AnalyticField(lambda x: np.eye(3), "flat"), np.array([[-2.0, 2.0]] * 3))


def sphere_cap(r):
    def fn(u):
        return [u[0], u[1], jets.sqrt(r * r - u[0] * u[0] - u[1] * u[1])]
    return Immersion(f"cap:r={r}", 2, 3, AnalyticField(fn), np.array([[-0.4, 0.4]] * 2))


def plane(tilt):
    return Immersion("plane", 2, 3, AnalyticField(lambda u: [u[0], u[1], tilt * u[0] - 0.5 * u[1]]),
                     np.array([[-0.5, 0.5]] * 2))


def test_totally_geodesic_plane_has_zero_h(rng):
    sub = ImmersedSubmanifold(FLAT3, plane(0.7))
    for u in sub.imm.sample_points(rng, 5):
        sp = sub.at(u)
        assert np.max(np.abs(sp.h)) <= 1e-14
        assert np.max(np.abs(sp.riemann_induced)) <= 1e-13


@pytest.mark.parametrize("r", [1.0, 1.5])
def test_sphere_cap_curvatures(r, rng):
    sub = ImmersedSubmanifold(FLAT3, sphere_cap(r))
    for u in sub.imm.sample_points(rng, 5):
        sp = sub.at(u)
        assert np.linalg.norm(sp.mean_curvature()) == pytest.approx(1 / r, abs=1e-12)
        X, Y = rng.normal(size=(2, 2))
        num = np.einsum("abce,a,b,c,e->", sp.riemann_induced, X, Y, Y, sp.G @ X)
        den = (X @ sp.G @ X) * (Y @ sp.G @ Y) - (X @ sp.G @ Y) ** 2
        assert num / den == pytest.approx(1 / r ** 2, abs=1e-10)


def test_induced_chart_matches_submanifold(rng):
    sub = ImmersedSubmanifold(FLAT3, sphere_cap(1.2))
    ch = induced_chart(sub)
    u = np.array([0.1, -0.2])
    geo = point_geometry(ch, u)
    X, Y = rng.normal(size=(2, 2))
    assert sectional_curvature(geo, X, Y) == pytest.approx(1 / 1.44, abs=1e-10)


def test_gauss_formula_decomposition(rng):
    """Ambient nabla_X Y = nabla'_X Y + h(X, Y) for coordinate fields on the source."""
    sp_ = conformal_space(2, "quad", c=0.2)
    sub = ImmersedSubmanifold(sp_, immersion_catalog("anti_surface_r5", warp=0.3))
    for u in sub.imm.sample_points(rng, 4):
        sp = sub.at(u)
        X, Y = rng.normal(size=(2, sub.m))
        amb = np.einsum("kij,i,j->k", sp.K.value, X, Y)
        tangential = sp.E.value @ np.einsum("kij,i,j->k", sp.gamma_induced.value, X, Y)
        assert np.max(np.abs(amb - tangential - sp.second_fundamental_form(X, Y))) <= 1e-12
        # h is normal
        assert np.max(np.abs(sp.E.value.T @ sp.g.value @ sp.second_fundamental_form(X, Y))) <= 1e-12


def test_normal_frame_is_orthonormal(rng):
    sub = ImmersedSubmanifold(conformal_space(3, "linear_z", a=0.3), immersion_catalog("cr_r7"))
    sp = sub.at(sub.imm.sample_points(rng, 1)[0])
    N = sp.N.value
    np.testing.assert_allclose(N.T @ sp.g.value @ N, np.eye(sub.p), atol=1e-13)
    np.testing.assert_allclose(sp.E.value.T @ sp.g.value @ N, 0.0, atol=1e-13)


def test_frame_covariance(rng):
    space = conformal_space(2, "linear_z", a=0.3)
    imm = immersion_catalog("anti_surface_r5", warp=0.3)
    Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    a, b = ImmersedSubmanifold(space, imm), ImmersedSubmanifold(space, imm, rotation=Q)
    for u in imm.sample_points(rng, 3):
        sa, sb = a.at(u), b.at(u)
        X, Y = rng.normal(size=(2, 2))
        # h and |H| transform by the rotation, the mean-curvature vector does not
        np.testing.assert_allclose(np.einsum("aij,ab->bij", sa.h, Q), sb.h, atol=1e-12)
        np.testing.assert_allclose(sa.mean_curvature_vector(), sb.mean_curvature_vector(), atol=1e-12)
        ra, rb = ricci_balances(sa, X, Y)[1], ricci_balances(sb, X, Y)[1]
        assert abs(relative(ra.residual, ra.scale) - relative(rb.residual, rb.scale)) <= 1e-8


def test_bad_rotation_rejected():
    imm = immersion_catalog("anti_surface_r5")
    with pytest.raises(FrameError):
        ImmersedSubmanifold(conformal_space(2), imm, rotation=np.ones((3, 3)))


def test_rank_deficient_immersion_rejected():
    imm = Immersion("fold", 2, 3, AnalyticField(lambda u: [u[0], u[0], 0.0 * u[1]]), np.array([[-0.5, 0.5]] * 2))
    with pytest.raises(GeometryError):
        ImmersedSubmanifold(FLAT3, imm)


@pytest.mark.parametrize("imm_id,expect", [
    ("invariant_1_in_2", {"invariant", "xi_tangent"}),
    ("invariant_1_in_3:warp", {"invariant", "xi_tangent"}),
    ("anti_xaxis_r3", {"anti_invariant", "xi_normal"}),
    ("anti_y0_plane_r3", {"anti_invariant", "xi_tangent"}),
    ("anti_surface_r5", {"anti_invariant", "xi_tangent"}),
    ("cr_r5", {"cr", "xi_tangent"}),
    ("cr_r7", {"cr", "xi_tangent"}),
])
def test_catalog_classification(imm_id, expect):
    params = {}
    if imm_id.endswith(":warp"):
        imm_id, params = imm_id[:-5], {"warp": 0.2}
    n = immersion_model_n(imm_id, **params)
    sub = ImmersedSubmanifold(conformal_space(n, "linear_z", a=0.3), immersion_catalog(imm_id, **params))
    cls = classify(sub, 6, seed=1)
    for k in expect:
        assert cls.holds(k), (k, cls.residuals[k])
    # the opposite predicates fail
    if "invariant" in expect:
        assert not cls.holds("anti_invariant")
    if "anti_invariant" in expect:
        assert not cls.holds("invariant")
    assert cls.holds("xi_normal") != cls.holds("xi_tangent")


def test_lee_direction_classification():
    # f = a x^1 has grad f along d/dx, tangent to the y = 0 plane
    sub = ImmersedSubmanifold(conformal_space(1, "linear", a=0.3, axis=0), immersion_catalog("anti_y0_plane_r3"))
    assert classify(sub, 4).holds("lee_tangent")
    sub = ImmersedSubmanifold(conformal_space(1, "linear", a=0.3, axis=1), immersion_catalog("anti_y0_plane_r3"))
    assert classify(sub, 4).holds("lee_normal")


def test_leaf_immersion_is_affine_slice():
    imm = immersion_catalog("cr_r7")
    leaf = leaf_immersion(imm, imm.center(), [[0, 0, 1, 0, 0], [0, 0, 0, 1, 0]])
    assert leaf.source_dim == 2 and leaf.ambient_dim == 5
    np.testing.assert_allclose(leaf(np.array([0.01, 0.02])), imm.center() + [0, 0, 0.01, 0.02, 0])
