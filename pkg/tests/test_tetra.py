import numpy as np
import pytest

from qdilog import Faddeev, GroupPoint
from qdilog import tetra
from qdilog.errors import DomainError
from qdilog.weights import FieldTriple

SPEC = Faddeev(0.8)


def test_field_dressing_balances():
    assert tetra.dressing_balance() == {}


def test_externals_leave_one_selfdual_constraint():
    ext = tetra.solve_externals("selfdual")
    assert len(ext.solution) == 1


def test_vertex_sample_on_support():
    inst = tetra.sample_vertex_instance(SPEC, 4)
    env = tetra._external_env(inst)
    for factors, prefix in ((tetra.FACTORS, "m"), (tetra.FACTORS[::-1], "n")):
        side = tetra.build_side("selfdual", factors, prefix)
        tetra.check_residuals(side.elim, env)


def test_elimination_orders_share_free_count():
    a = tetra.build_side("selfdual", tetra.FACTORS, "m")
    b = tetra.build_side("selfdual", tetra.FACTORS, "m", order=tetra.ALT_ORDER)
    assert len(a.elim.free) == len(b.elim.free) == 3


def test_trivial_fields_are_eta_over_four():
    inst = tetra.sample_field_instance(SPEC, 1)
    q = SPEC.eta.scaled(1, 4)
    inst.fields = (FieldTriple.trivial(SPEC), FieldTriple.trivial(SPEC), (q, q))
    for ft in tetra.factor_fields(inst, SPEC):
        for p in ft:
            assert abs(p.cont - q.cont) < 1e-15


def test_unknown_vertex_kernel():
    inst = tetra.sample_vertex_instance(SPEC, 1)
    with pytest.raises(DomainError):
        tetra.verify_vertex_zte(inst, SPEC, kernel="nope")


def test_irc_integrand_tail_decays():
    # the outer integrand once showed roundoff spikes as large as its peak here
    inst = tetra.sample_irc_instance(SPEC, 1)
    z = GroupPoint(SPEC.kind, np.array([1.0, 6.0, 8.0, 10.0]))
    for side in (tetra.IRC_LHS, tetra.IRC_RHS):
        v = np.abs(tetra.irc_side(side, inst, SPEC)(z))
        assert np.all(v[1:] < 1e-20 * v[0])


def test_samples_reproducible():
    a = tetra.sample_irc_instance(SPEC, 7)
    b = tetra.sample_irc_instance(SPEC, 7)
    assert all(repr(a.corners[k]) == repr(b.corners[k]) for k in tetra.IRC_CORNERS)
