import numpy as np
import pytest

from confsasaki.contact import (almost_contact_residuals, fundamental_two_form, nijenhuis_by_brackets,
                                nijenhuis_normality_defect, sasakian_defect, verify_almost_contact)
from confsasaki.manifold import exterior_derivative_1form, sectional_curvature
from confsasaki.spaces import CatalogError, sasakian_model


@pytest.mark.parametrize("n", [1, 2, 3])
def test_model_is_almost_contact_metric(n, rng):
    m = sasakian_model(n)
    for p in m.chart.sample_points(rng, 8):
        assert verify_almost_contact(m, p).max() <= 1e-13


@pytest.mark.parametrize("n", [1, 2])
def test_model_is_sasakian(n, rng):
    m = sasakian_model(n)
    for p in m.chart.sample_points(rng, 6):
        X, Y = rng.normal(size=(2, m.dim))
        assert np.max(np.abs(sasakian_defect(m, p, X, Y))) <= 1e-12
        assert np.max(np.abs(nijenhuis_normality_defect(m, p, X, Y))) <= 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_phi_sectional_curvature_is_minus_three(n, rng):
    m = sasakian_model(n)
    for p in m.chart.sample_points(rng, 16):
        sp = m.at(p)
        X = rng.normal(size=m.dim)
        X -= (sp.eta @ X) * sp.xi
        assert sectional_curvature(sp.geo, X, sp.phi @ X) == pytest.approx(-3.0, abs=1e-6)


def test_contact_condition(rng):
    """Phi(X, Y) = g(X, phi Y) equals d eta(X, Y) for the model (Palais convention with factor 1/2)."""
    m = sasakian_model(1)
    p = np.array([0.2, -0.1, 0.3])
    X, Y = rng.normal(size=(2, 3))
    assert fundamental_two_form(m, p, X, Y) == pytest.approx(exterior_derivative_1form(m.eta, p, X, Y) / 2,
                                                            abs=1e-13)


def test_nijenhuis_two_routes_agree(rng):
    m = sasakian_model(2, phi_scale=1.3)
    p = m.chart.sample_points(rng, 1)[0]
    X, Y = rng.normal(size=(2, m.dim))
    from confsasaki.contact import nijenhuis_at
    np.testing.assert_allclose(nijenhuis_by_brackets(m, p, X, Y), nijenhuis_at(m.at(p, 1), X, Y), atol=1e-12)


def test_corrupted_structures_are_detected(rng):
    p = np.array([0.1, 0.2, -0.3])
    X, Y = rng.normal(size=(2, 3))
    assert almost_contact_residuals(sasakian_model(1, phi_scale=1.01).at(p, 1)).max() >= 1e-3
    assert np.max(np.abs(sasakian_defect(sasakian_model(1, metric_eps=0.05), p, X, Y))) >= 1e-3


def test_unsupported_dimension():
    with pytest.raises(CatalogError):
        sasakian_model(4)
