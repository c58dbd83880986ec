import numpy as np
import pytest

from qdilog import Faddeev, GroupPoint, RealByZN
from qdilog import weights as w
from qdilog.errors import ConstraintViolated, DomainError

SPEC = Faddeev(0.8)


def pt(c):
    return GroupPoint(SPEC.kind, c)


def test_crosscheck_consistent():
    e, t = w.sample_crosscheck(SPEC, 1)
    r = w.vertex_weight_crosscheck(e, t, SPEC, tol=1e-6)
    assert r.passed and r.verdict == "consistent"


def test_crosscheck_reports_falsified(monkeypatch):
    # a wrong bracket must not pass
    monkeypatch.setattr(w, "bracket", lambda u: 1.0)
    e, t = w.sample_crosscheck(SPEC, 1)
    r = w.vertex_weight_crosscheck(e, t, SPEC, tol=1e-6)
    assert not r.passed and r.verdict == "falsified"


def test_off_support_rejected():
    e = w.EdgeConfig(pt(0.1), pt(0.2), pt(0.3), pt(0.4), pt(0.5), pt(0.6))
    t = w.SpectralTriple(pt(0.1), pt(0.2), pt(0.3))
    with pytest.raises(ConstraintViolated):
        w.vertex_weight_selfdual(e, t, SPEC)


def test_reduced_config_on_support():
    e = w.EdgeConfig.reduced(pt(0.1), pt(0.2), pt(0.3), pt(0.4), pt(0.5))
    assert e.constraint_satisfied


def test_kernel_power_divisibility():
    k = RealByZN(4)
    with pytest.raises(DomainError):
        w.kernel_power(GroupPoint(k, 0.1, 1), GroupPoint(k, 0.2, 2), 0.5)
    v = w.kernel_power(GroupPoint(k, 0.1, 2), GroupPoint(k, 0.2, 2), 0.5)
    assert np.isclose(abs(v), 1)


def test_kernel_power_real():
    v = w.kernel_power(pt(0.3), pt(0.7), 0.25)
    assert np.isclose(v, np.exp(2j * np.pi * 0.25 * 0.21))


def test_hyper2f2_contour_independent():
    h = SPEC.crossing_height
    args = [pt(0.3), pt(-0.2), pt(0.4), pt(0.1), pt(-0.5 - 0.2j)]
    auto = w.hyper2F2(*args, SPEC)
    for frac in (0.3, 0.7):
        other = w.hyper2F2(*args, SPEC, shift=frac * h)
        assert abs(other - auto) < 1e-9 * abs(auto)


def test_hyper2f2_batched_matches_scalar():
    c = GroupPoint(SPEC.kind, np.array([-3.0, -0.5, 0.5, 3.0]))
    args = [pt(0.3), pt(-0.2), pt(0.4), pt(0.1)]
    batch = w.hyper2F2(*args, c, SPEC)
    single = [w.hyper2F2(*args, pt(float(v)), SPEC) for v in c.cont]
    assert np.allclose(batch, single, rtol=1e-9, atol=0)


def test_sigma_map_satisfies_constraints():
    rng = np.random.default_rng(0)
    k = w.CornerConfig(*(pt(v) for v in rng.uniform(-1, 1, 8)))
    t = w.SpectralTriple(*(pt(v) for v in rng.uniform(-1, 1, 3)))
    c1, c2 = w.qr1_constraints(w.sigma_map(k, t))
    assert abs(c1.cont) < 1e-12 and abs(c2.cont) < 1e-12
