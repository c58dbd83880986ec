import numpy as np
import pytest

from qdilog import geometry as geo
from qdilog.dilog import ModularParam
from qdilog.errors import DegenerateTriangle, DomainError


def test_symmetric_triangle():
    tri = geo.triangle_from_thetas(np.pi / 2, np.pi / 2, np.pi / 2)
    assert np.allclose(tri.sides, np.pi / 2)
    assert np.allclose(tri.betas, np.pi / 4)


def test_lobachevsky_catalan_and_symmetry():
    assert abs(geo.lobachevsky(np.pi / 4) - geo.CATALAN / 2) < 1e-14
    b = np.linspace(0.1, 3.0, 7)
    # odd and pi-periodic
    assert np.allclose(geo.lobachevsky(-b), -geo.lobachevsky(b), atol=1e-15)
    assert np.allclose(geo.lobachevsky(b + np.pi), geo.lobachevsky(b), atol=1e-14)
    assert abs(geo.lobachevsky(np.pi / 2)) < 1e-15


def test_series_matches_quadrature():
    for b in (0.05, 0.7, 1.9, 3.1):
        assert abs(geo.lobachevsky(b) - geo.lobachevsky_quad(b)) < 1e-12


def test_lambda_forms_agree():
    tri = geo.triangle_from_thetas(1.1, 1.7, 2.0)
    eta = ModularParam(0.8).eta
    assert np.allclose(geo.lambdas_from_triangle(tri, eta), geo.lambdas_from_betas(tri, eta), atol=1e-12)


def test_degenerate_rejected():
    with pytest.raises(DegenerateTriangle):
        geo.triangle_from_thetas(0.0, 1.0, 1.0)
    with pytest.raises(DegenerateTriangle):
        geo.triangle_from_thetas(0.3, 0.3, 0.3)


def test_field_sides_must_be_real():
    with pytest.raises(DomainError):
        geo.field_sides([0.1, 0.1, 0.1], 0.8)


def test_kappa_trivial_and_validation():
    tri = geo.triangle_from_thetas(1.1, 1.7, 2.0)
    k = geo.kappa_zbb(1, tri)
    assert k.z == 1 and k.b is None
    with pytest.raises(DomainError):
        geo.kappa_zbb(0, tri)
