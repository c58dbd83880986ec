import numpy as np
import pytest

from qdilog import CircleByZ, GroupPoint, QuadConfig, RealByZN, RealLine
from qdilog.errors import ConfigError, NoConvergence
from qdilog.quad import integrate


def gauss(x):
    return np.exp(-np.pi * x.cont**2)


def test_gaussian_integral():
    r = integrate(gauss, RealLine())
    assert abs(r.value - 1) < 1e-12


def test_fourier_of_gaussian_is_gaussian():
    k = np.array([0.0, 0.4, 1.3])[:, None]
    r = integrate(lambda x: gauss(x) * np.exp(2j * np.pi * x.cont * k), RealLine())
    assert np.allclose(r.value, np.exp(-np.pi * k[:, 0] ** 2), atol=1e-12)


def test_shifted_contour_is_equivalent():
    a = integrate(gauss, RealLine(), shift=0.3).value
    assert abs(a - 1) < 1e-12


def test_zn_measure():
    k = RealByZN(4)
    r = integrate(lambda x: gauss(x) * (np.asarray(x.disc) == 0), k)
    assert abs(r.value - 0.5) < 1e-12


def test_circle_measure():
    k = CircleByZ()
    r = integrate(lambda x: np.where(np.asarray(x.disc) == 0, 1.0 + np.cos(x.cont), 0.0), k)
    assert abs(r.value - 1) < 1e-12


def test_non_decaying_raises():
    with pytest.raises(NoConvergence):
        integrate(lambda x: np.ones_like(x.cont), RealLine(), QuadConfig(max_radius=20.0))


def test_non_strict_returns_estimate():
    r = integrate(lambda x: np.ones_like(x.cont), RealLine(), QuadConfig(max_radius=20.0), strict=False)
    assert np.isfinite(r.value)


def test_mass_reported():
    r = integrate(lambda x: np.cos(4 * x.cont) * gauss(x), RealLine())
    assert r.extra["mass"] > abs(r.value)


def test_bad_config():
    with pytest.raises(ConfigError):
        QuadConfig(rel_tol=0)
    with pytest.raises(ConfigError):
        QuadConfig.from_dict({"nodes": 3})
