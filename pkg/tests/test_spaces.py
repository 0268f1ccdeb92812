import numpy as np
import pytest

from confsasaki.spaces import (FACTOR_FAMILIES, IMMERSION_IDS, CatalogError, immersion_catalog,
                               immersion_model_n, make_factor, sasakian_model)


def test_model_shapes():
    for n in (1, 2, 3):
        m = sasakian_model(n)
        sp = m.at(np.zeros(2 * n + 1), 1)
        assert sp.phi.shape == (2 * n + 1, 2 * n + 1)
        np.testing.assert_allclose(sp.xi, [0] * (2 * n) + [2.0])


def test_factor_values():
    x = np.array([0.1, 0.2, 0.3])
    assert make_factor("const", 3, c=0.4).field()(x) == pytest.approx(0.4)
    assert make_factor("linear_z", 3, a=0.5).field()(x) == pytest.approx(0.15)
    assert make_factor("linear", 3, a=2.0, axis=1).field()(x) == pytest.approx(0.4)
    assert make_factor("quad", 3, c=1.0, center=[0.1, 0.0, 0.0]).field()(x) == pytest.approx(0.13)
    assert set(FACTOR_FAMILIES) == {"const", "linear_z", "linear", "quad"}


@pytest.mark.parametrize("family,params", [("nope", {}), ("linear", {"axis": 7}), ("quad", {"center": [0.0]})])
def test_factor_errors(family, params):
    with pytest.raises(CatalogError):
        make_factor(family, 3, **params)


def test_factor_labels():
    assert make_factor("linear_z", 5, a=0.3).label == "linear_z:a=0.3"
    assert make_factor("quad", 3, c=0.2, center=[0.1, 0, 0]).label == "quad:c=0.2,center=[0.1;0;0]"


@pytest.mark.parametrize("imm_id", [i for i in IMMERSION_IDS if i != "invariant_k_in_n"] + ["invariant_1_in_2"])
def test_catalog_entries_build(imm_id):
    imm = immersion_catalog(imm_id)
    n = immersion_model_n(imm_id)
    assert imm.ambient_dim == 2 * n + 1
    assert 0 <= imm.codim < imm.ambient_dim


def test_catalog_dimensions():
    assert immersion_catalog("cr_r7").cr.Dperp.shape == (2, 5)
    assert immersion_catalog("invariant_2_in_3").source_dim == 5
    assert immersion_catalog("anti_surface_r5").codim == 3


@pytest.mark.parametrize("imm_id,params", [("nothing", {}), ("invariant_3_in_3", {}), ("cr_r5", {"warp": 0.1}),
                                            ("invariant_1_in", {})])
def test_catalog_errors(imm_id, params):
    with pytest.raises(CatalogError):
        immersion_catalog(imm_id, **params)
