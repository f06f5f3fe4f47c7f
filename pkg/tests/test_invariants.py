import pytest

from orbitforge import invariants as inv
from orbitforge.exactmath import MPoly, Rat


def test_rational_tau_closed_forms():
    rep = inv.verify_tau_tables("rat")
    assert rep.ok, rep.lines()


def test_trig_tau_closed_forms():
    rep = inv.verify_tau_tables("trig")
    assert rep.ok, rep.lines()


def test_rational_tau_at_sample_point():
    taus = inv.rational_tau()
    point = {v: Rat(c) for v, c in zip(inv.X_VARS, (1, 2, 3, 5))}
    assert taus["tau2"].evaluate(point) == 39


def test_trig_tau_orbit_sizes_at_identity():
    taus = inv.trig_tau()
    one = {v: Rat(1) for v in inv.V_VARS}
    assert [taus[n].evaluate(one) for n in inv.TRIG_TAU_VARS] == \
        [24, 24, 96, 96]


def test_ground_state_squares_rational():
    rep = inv.verify_ground_state_squares("rat")
    assert rep.ok, rep.lines()


def test_ground_state_squares_trig():
    rep = inv.verify_ground_state_squares("trig")
    assert rep.ok, rep.lines()


def test_antisymmetry_of_ground_state_factors():
    # dpm and dd0 flip sign under the permutation x1 <-> x2
    dpm = inv.rat_dpm()
    gens = dict(zip(inv.X_VARS, MPoly.gens(inv.X_VARS)))
    swap = {"x1": gens["x2"], "x2": gens["x1"],
            "x3": gens["x3"], "x4": gens["x4"]}
    assert (dpm.substitute(swap) + dpm).is_zero()


def test_express_in_invariants_roundtrip_rational():
    taus = inv.rational_tau()
    p = taus["tau6"] * taus["tau2"] + 3 * taus["tau8"]
    q = inv.express_in_invariants(p, "rat")
    diff = inv.substitute_tau(q, "rat") - p
    assert diff.is_zero()


def test_express_in_invariants_rejects_noninvariant():
    x1 = MPoly.var(inv.X_VARS, "x1")
    with pytest.raises(inv.NotInvariant):
        inv.express_in_invariants(x1 ** 2 + x1, "rat")


def test_partial_products_match_quotients():
    lpoly = MPoly.const(inv.X_VARS, 1)
    from orbitforge.f4root import build_root_system
    rs = build_root_system()
    factors = [inv.lin_form(a) for a in rs.positive_long]
    for f in factors:
        lpoly = lpoly * f
    partials = inv.rat_long_partials()
    assert len(partials) == 12
    for f, p in zip(factors, partials):
        assert (p * f - lpoly).is_zero()
