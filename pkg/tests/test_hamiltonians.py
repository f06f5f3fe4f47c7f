import pytest

from orbitforge import hamiltonians as ham
from orbitforge.exactmath import MPoly, Rat

PARAMS = {"mu": Rat(1, 3), "nu": Rat(1, 5), "omega": Rat(1)}


def test_gauge_rotation_rational():
    rep = ham.verify_gauge_rotation("rat")
    assert rep.ok, rep.lines()


def test_gauge_rotation_trig():
    rep = ham.verify_gauge_rotation("trig")
    assert rep.ok, rep.lines()


def test_gauge_rotation_negative_control():
    for model in ("rat", "trig"):
        rep = ham.verify_gauge_rotation(model, e0_shift=Rat(1))
        bad = [c.name for c in rep.checks if not c.ok]
        assert bad == ["E0_scalar"]


def test_metric_decomposition_both_models():
    for model in ("rat", "trig"):
        dec, rep = ham.metric_decomposition(model)
        assert rep.ok, rep.lines()
        assert not dec.det.is_zero()
        for i in range(4):
            for j in range(4):
                assert dec.gab[i][j] == dec.gab[j][i]


def test_operator_reconstruction_roundtrip():
    for model in ("rat", "trig"):
        assert ham.rebuild_operator(model) == ham.operator(model)


def test_riemann_flatness_at_default_points():
    assert ham.riemann_spot_check("rat") == 0
    assert ham.riemann_spot_check("trig") == 0


def test_riemann_singular_point_raises():
    with pytest.raises(ham.SingularMetric):
        ham.riemann_spot_check("rat", (Rat(0),) * 4)


def test_potential_identities():
    for model in ("rat", "trig"):
        rep = ham.potential_check(model)
        assert rep.ok, rep.lines()


def test_particular_integral_zero_modes():
    for model in ("rat", "trig"):
        for k in range(3):
            rep = ham.verify_particular_integral(model, k)
            assert rep.ok, (model, k, rep.lines())


def test_particular_integral_rejects_negative_k():
    with pytest.raises(ValueError):
        ham.particular_integral(-1)


def test_particular_integral_grading_eigenvalues():
    # J0 (J0 - 1) on tau6 (grading 2) is 2 * 1 * tau6
    ipar = ham.particular_integral(1, model="rat")
    t6 = MPoly.var(ham.RAT_TAU_VARS, "tau6")
    assert ipar.apply(t6) == 2 * t6
    assert ham.particular_integral(0, model="rat").apply(
        MPoly.const(ham.RAT_TAU_VARS, 1)).is_zero()


def test_qes_reduces_to_rational_operator():
    p = ham.ModelParams(**PARAMS)
    res = ham.qes_operator(p, ham.QesParams(a=Rat(0), gamma=Rat(0), k=2))
    assert res.report.ok, res.report.lines()
    hrat = ham.specialize(ham.operator("rat"), PARAMS)
    assert res.op == hrat
    e0 = 2 * PARAMS["omega"] * (1 + 6 * PARAMS["mu"] + 6 * PARAMS["nu"])
    assert res.energy == e0


def test_qes_sample_closure_and_matrix():
    p = ham.ModelParams(**PARAMS)
    res = ham.qes_operator(p, ham.QesParams(a=Rat(1), gamma=Rat(1), k=2))
    assert res.report.ok, res.report.lines()
    mat = res.matrix
    assert len(mat) == 3 and all(len(r) == 3 for r in mat)
    # characteristic polynomial of the 3x3 restriction is exact
    tr = sum(mat[i][i] for i in range(3))
    assert isinstance(tr + Rat(0), type(Rat(0)))
    # gamma term makes the non-tau2 first-order coefficients Laurent
    assert res.polynomial_coeffs == {"tau2": True, "tau6": False,
                                     "tau8": False, "tau12": False}


def test_qes_gamma_zero_is_fully_polynomial():
    p = ham.ModelParams(**PARAMS)
    res = ham.qes_operator(p, ham.QesParams(a=Rat(2), gamma=Rat(0), k=1))
    assert res.report.ok, res.report.lines()
    assert all(res.polynomial_coeffs.values())


def test_qes_restriction_eigenvalues_shift_with_k():
    # the forced linear coefficient depends on k, so restriction
    # matrices of nested k differ beyond truncation
    p = ham.ModelParams(**PARAMS)
    r1 = ham.qes_operator(p, ham.QesParams(a=Rat(1), gamma=Rat(0), k=1))
    r2 = ham.qes_operator(p, ham.QesParams(a=Rat(1), gamma=Rat(0), k=2))
    assert r1.delta_v["linear"] != r2.delta_v["linear"]


def test_qes_full_flag_leaks_generically():
    p = ham.ModelParams(**PARAMS)
    closed, leak = ham.qes_flag_closure(
        p, ham.QesParams(a=Rat(1), gamma=Rat(1), k=2))
    assert not closed and leak is not None
    closed, leak = ham.qes_flag_closure(
        p, ham.QesParams(a=Rat(0), gamma=Rat(0), k=2))
    assert closed and leak is None


def test_qes_params_validate():
    with pytest.raises(ValueError):
        ham.QesParams(a=Rat(1), gamma=Rat(0), k=-1)


def test_model_params_couplings():
    p = ham.ModelParams(mu=Rat(1, 3), nu=Rat(1, 5), omega=Rat(1))
    assert p.g_s == Rat(1, 3) * (Rat(1, 3) - 1)
    assert p.g_l == Rat(1, 5) * (Rat(1, 5) - 1)
