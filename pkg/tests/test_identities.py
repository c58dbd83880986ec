import numpy as np
import pytest

from qdilog import AndersenKashaev, Faddeev, GroupPoint, Woronowicz
from qdilog import identities as idn
from qdilog.errors import NoConvergence

SPECS = [Faddeev(0.8), AndersenKashaev(0.8, 2), Woronowicz.from_polar(0.5)]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.name)
def test_constant_constraint(spec):
    assert idn.check_constant_constraint(spec).passed


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.name)
def test_inversion(spec):
    for (x,) in idn.sample_inputs(spec, idn.INVERSION, 5, seed=3):
        assert idn.check_inversion(spec, x).residual < 1e-9


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.name)
@pytest.mark.parametrize("ident", [idn.SELF_DUALITY, idn.SELF_DUALITY_BAR])
def test_self_duality(spec, ident):
    args = idn.sample_inputs(spec, ident, 2, seed=4)
    for a in args:
        assert idn.run_check(spec, ident, a).residual < 1e-6


@pytest.mark.parametrize("ident", [idn.FTERM3A, idn.FTERM3B, idn.FIVE1])
def test_five_term_faddeev(ident):
    spec = Faddeev(0.8)
    for a in idn.sample_inputs(spec, ident, 2, seed=5):
        assert idn.run_check(spec, ident, a).residual < 1e-6


def test_sampling_reproducible():
    spec = AndersenKashaev(0.8, 3)
    a = idn.sample_inputs(spec, idn.FTERM3A, 3, seed=9)
    b = idn.sample_inputs(spec, idn.FTERM3A, 3, seed=9)
    assert all(repr(p) == repr(q) for ta, tb in zip(a, b) for p, q in zip(ta, tb))


def test_five1_first_sample_has_zero_z():
    spec = Faddeev(0.8)
    (x, y, z), *_ = idn.sample_inputs(spec, idn.FIVE1, 2, seed=1)
    assert np.real(z.cont) == 0


def test_degenerate_fterm3a_probe():
    # x = y leaves a non-decaying integrand
    spec = Faddeev(0.8)
    h = spec.crossing_height
    x = GroupPoint(spec.kind, 0.2 + 0.3j * h)
    z = GroupPoint(spec.kind, 0.1 - 0.3j * h)
    with pytest.raises(NoConvergence):
        idn.fterm3_integral(spec, x, x, z)


def test_residual_is_relative():
    assert idn.relative_residual(2.0, 2.0) == 0
    assert np.isclose(idn.relative_residual(1.0, 1.1), 0.1 / 1.1)
