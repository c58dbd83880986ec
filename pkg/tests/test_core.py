import numpy as np
import pytest

from qdilog import (
    AndersenKashaev,
    Faddeev,
    GroupPoint,
    ModularParam,
    RealByZN,
    RealLine,
    Woronowicz,
    fourier_kernel,
    gaussian,
)
from qdilog.dilog import faddeev_phi, pochhammer_inf
from qdilog.errors import DivergentProduct, DomainError, GroupMismatch, PoleProximity


def test_zn_arithmetic_wraps():
    k = RealByZN(3)
    x = GroupPoint(k, 0.5, 2) + GroupPoint(k, 0.25, 2)
    assert x.disc == 1
    assert np.isclose(x.cont, 0.75)


def test_mixed_groups_rejected():
    with pytest.raises(GroupMismatch):
        GroupPoint(RealLine(), 1.0) + GroupPoint(RealByZN(2), 1.0, 1)


def test_trivial_zn_needs_opt_in():
    with pytest.raises(DomainError):
        RealByZN(1)
    assert RealByZN(1, allow_trivial=True).N == 1


def test_kernel_and_gaussian_on_real_line():
    k = RealLine()
    x, y = GroupPoint(k, 0.3), GroupPoint(k, -1.1)
    assert np.isclose(fourier_kernel(x, y), np.exp(2j * np.pi * 0.3 * -1.1))
    assert np.isclose(gaussian(x), np.exp(1j * np.pi * 0.09))


def test_pochhammer_small_q():
    # (x; q) with q -> 0 is 1 - x
    assert np.isclose(pochhammer_inf(0.3, 1e-12), 0.7)


def test_modular_eta():
    m = ModularParam(0.8)
    assert np.isclose(m.eta, 1j * (0.8 + 1 / 0.8) / 2)


def test_faddeev_unimodular_and_asymptotics():
    s = Faddeev(0.8)
    x = np.linspace(-4, 4, 33)
    v = s.phi(GroupPoint(s.kind, x, 0))
    assert np.max(np.abs(np.abs(v) - 1)) < 1e-12
    # phi -> 1 far to the left
    far = s.phi(GroupPoint(s.kind, np.array([-30.0]), 0))
    assert abs(far[0] - 1) < 1e-10


def test_faddeev_representations_agree():
    m = ModularParam(np.exp(1j * np.pi / 5))
    x = np.array([0.3 + 0.1j, -1.2 - 0.2j, 2.0 + 0.0j])
    p = faddeev_phi(x, m, method="product")
    q = faddeev_phi(x, m, method="integral")
    assert np.max(np.abs(p / q - 1)) < 1e-9


def test_product_refused_for_real_b():
    with pytest.raises(DomainError):
        faddeev_phi(0.1, ModularParam(0.8), method="product")


def test_pole_guard():
    m = ModularParam(0.8)
    # first pole of phi sits at x = eta
    with pytest.raises(PoleProximity):
        faddeev_phi(m.eta, m)


def test_woronowicz_modulus_checked():
    with pytest.raises(DivergentProduct):
        Woronowicz(1.0)


def test_ak_n1_matches_faddeev():
    ak = AndersenKashaev(0.8, 1, allow_trivial=True)
    fd = Faddeev(0.8)
    x = np.array([0.2, -0.7 + 0.1j])
    assert np.allclose(ak.phi(GroupPoint(ak.kind, x, 0)), fd.phi(GroupPoint(fd.kind, x, 0)), rtol=1e-12)


@pytest.mark.parametrize("spec", [Faddeev(0.8), AndersenKashaev(0.8, 3), Woronowicz.from_polar(0.4)])
def test_describe_is_plain(spec):
    d = spec.describe()
    assert d["dilog"] == spec.name
