from orbitforge.exactmath import Rat
from orbitforge.f4root import (
    build_root_system,
    deformed_weyl,
    dot,
    flag_characteristic_constants,
    is_positive,
    pairing,
    reflect,
    weight_of_label,
    weyl_orbit,
)


def test_root_counts_and_lengths():
    rs = build_root_system()
    assert len(rs.positive_short) == 12
    assert len(rs.positive_long) == 12
    assert all(dot(a, a) == 1 for a in rs.positive_short)
    assert all(dot(a, a) == 2 for a in rs.positive_long)
    assert all(is_positive(a) for a in rs.positive)
    # closure under negation gives the full system of 48
    assert len(set(rs.all_roots)) == 48


def test_reflections_preserve_root_system():
    rs = build_root_system()
    roots = set(rs.all_roots)
    for a in rs.simple_roots:
        assert {reflect(v, a) for v in roots} == roots


def test_weyl_group_order():
    seed = (Rat(1), Rat(2), Rat(3), Rat(5))
    assert len(weyl_orbit(seed)) == 1152


def test_fundamental_weight_orbit_sizes():
    rs = build_root_system()
    sizes = [len(weyl_orbit(f)) for f in rs.fundamental_weights]
    assert sizes == [24, 24, 96, 96]


def test_deformed_weyl_closed_form():
    mu, nu = Rat(1, 3), Rat(1, 5)
    rho = deformed_weyl(mu, nu)
    assert rho == (mu / 2, mu / 2 + nu, mu / 2 + 2 * nu,
                   5 * mu / 2 + 3 * nu)


def test_pairing_of_lowest_labels():
    # |w1|^2 = 1, |w2|^2 = 2, |w3|^2 = 3, |w4|^2 = 6
    assert pairing((1, 0, 0, 0), (1, 0, 0, 0)) == 1
    assert pairing((0, 1, 0, 0), (0, 1, 0, 0)) == 2
    assert pairing((0, 0, 1, 0), (0, 0, 1, 0)) == 3
    assert pairing((0, 0, 0, 1), (0, 0, 0, 1)) == 6
    assert weight_of_label((0, 0, 0, 0)) == (Rat(0),) * 4


def test_characteristic_constants_table():
    consts = flag_characteristic_constants()
    assert consts["minimal"] == (1, 2, 2, 3)
    assert consts["counterexample"] == (1, 1, 1, 1)
    assert len(consts["trig_extra"]) == 5
