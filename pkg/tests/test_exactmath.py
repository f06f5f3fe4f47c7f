import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitforge.exactmath import DiffOp, MPoly, Rat, det4, solve_linear

VARS = ("x1", "x2", "x3", "x4")


def rationals():
    return st.builds(Rat, st.integers(-30, 30),
                     st.integers(1, 12))


def polys(max_terms=5, max_exp=4, laurent=False):
    lo = -max_exp if laurent else 0
    exps = st.tuples(*[st.integers(lo, max_exp)] * 4)
    return st.dictionaries(exps, rationals(), max_size=max_terms).map(
        lambda d: MPoly(VARS, d, laurent=laurent))


def test_power_sum_cube_monomial_count():
    p = sum((MPoly.var(VARS, v) ** 2 for v in VARS), MPoly.zero(VARS))
    cube = p ** 3
    # multisets of size 3 out of 4 squared variables
    assert len(cube.terms) == 20
    assert cube.coeff((6, 0, 0, 0)) == 1
    assert cube.coeff((2, 2, 2, 0)) == 6


def test_basic_arithmetic():
    x1 = MPoly.var(VARS, "x1")
    x2 = MPoly.var(VARS, "x2")
    p = (x1 + x2) * (x1 - x2)
    assert p == x1 ** 2 - x2 ** 2
    assert (p - p).is_zero()
    assert (3 * x1).coeff((1, 0, 0, 0)) == 3


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_product_rule(p, q):
    lhs = (p * q).derive("x2")
    rhs = p.derive("x2") * q + p * q.derive("x2")
    assert (lhs - rhs).is_zero()


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_exact_div_roundtrip(p, q):
    if q.is_zero():
        return
    prod = p * q
    got = prod.exact_div(q)
    assert got is not None
    assert (got - p).is_zero()


def test_exact_div_failure():
    x1 = MPoly.var(VARS, "x1")
    x2 = MPoly.var(VARS, "x2")
    assert (x1 ** 2 + x2).exact_div(x1 + x2) is None


@settings(max_examples=40, deadline=None)
@given(polys(laurent=True), polys(laurent=True))
def test_laurent_commutative_ring(p, q):
    assert (p * q - q * p).is_zero()
    assert ((p + q) - (q + p)).is_zero()


def test_euler_derive_matches_weighted_derivative():
    p = MPoly(VARS, {(2, -1, 0, 0): Rat(3)}, laurent=True)
    q = p.euler_derive("x1")
    assert q.terms == {(2, -1, 0, 0): Rat(6)}
    q = p.euler_derive("x2")
    assert q.terms == {(2, -1, 0, 0): Rat(-3)}


def test_evaluate_and_substitute():
    x1, x2, x3, x4 = MPoly.gens(VARS)
    p = x1 ** 2 * x2 - 4 * x3
    point = {"x1": Rat(2), "x2": Rat(3), "x3": Rat(1, 2), "x4": Rat(0)}
    assert p.evaluate(point) == 10
    sub = p.substitute({"x1": x2, "x2": x2, "x3": x3, "x4": x4})
    assert sub == x2 ** 3 - 4 * x3


def test_split_by_groups_parameters():
    vs = ("a", "b", "mu")
    a, b, mu = MPoly.gens(vs)
    p = a * mu + b + 2 * mu
    groups = p.split_by(("mu",))
    assert set(groups) == {(0,), (1,)}
    ab = ("a", "b")
    assert groups[(1,)] == MPoly.var(ab, "a") + MPoly.const(ab, 2)
    assert groups[(0,)] == MPoly.var(ab, "b")


def test_json_roundtrip():
    p = MPoly(VARS, {(1, 0, -2, 0): Rat(7, 3)}, laurent=True)
    blob = json.dumps(p.to_json_dict())
    q = MPoly.from_json_dict(json.loads(blob))
    assert (p - q).is_zero()


def test_solve_linear_statuses():
    status, x = solve_linear([[Rat(2), Rat(0)], [Rat(1), Rat(1)]],
                             [Rat(4), Rat(5)])
    assert status == "unique" and x == [Rat(2), Rat(3)]
    status, _ = solve_linear([[Rat(1), Rat(1)], [Rat(2), Rat(2)]],
                             [Rat(1), Rat(2)])
    assert status == "underdetermined"
    status, _ = solve_linear([[Rat(1), Rat(1)], [Rat(2), Rat(2)]],
                             [Rat(1), Rat(3)])
    assert status == "inconsistent"


def test_det4_against_permutation_expansion():
    import itertools
    vals = [[Rat(i * 4 + j + 1, (i + j) % 3 + 1) for j in range(4)]
            for i in range(4)]
    vals[0][0] = Rat(7, 2)
    mat = [[MPoly.const(VARS, vals[i][j]) for j in range(4)]
           for i in range(4)]
    expect = Rat(0)
    for perm in itertools.permutations(range(4)):
        sign = 1
        seen = list(perm)
        for i in range(4):
            for j in range(i + 1, 4):
                if seen[i] > seen[j]:
                    sign = -sign
        term = Rat(1)
        for i in range(4):
            term *= vals[i][perm[i]]
        expect += sign * term
    got = det4(mat)
    assert got.is_constant() and got.constant_value() == expect


def test_diffop_apply_and_compose():
    x1, x2 = MPoly.var(VARS, "x1"), MPoly.var(VARS, "x2")
    d1 = DiffOp(VARS, {(1, 0, 0, 0): MPoly.const(VARS, 1)})
    mult = DiffOp(VARS, {(0, 0, 0, 0): x1})
    # [d/dx1, x1] = 1
    comm = d1.compose(mult) - mult.compose(d1)
    probe = x1 ** 2 * x2
    assert comm.apply(probe) == probe


@settings(max_examples=25, deadline=None)
@given(polys(max_terms=3, max_exp=3), polys(max_terms=3, max_exp=3))
def test_compose_is_associative_on_samples(p, q):
    a = DiffOp(VARS, {(1, 0, 0, 0): p})
    b = DiffOp(VARS, {(0, 1, 0, 0): q})
    probe = (MPoly.var(VARS, "x1") + 2 * MPoly.var(VARS, "x2")) ** 3
    assert a.compose(b).apply(probe) == a.apply(b.apply(probe))


def test_diffop_order():
    op = DiffOp(VARS, {(1, 1, 0, 0): MPoly.const(VARS, 1),
                       (0, 0, 0, 1): MPoly.const(VARS, 2)})
    assert op.order() == 2
