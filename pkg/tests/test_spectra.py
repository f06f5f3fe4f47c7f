import pytest

from orbitforge import spectra
from orbitforge.exactmath import Rat
from orbitforge.hamiltonians import MINIMAL_GRADING, operator, specialize

POINTS = [
    {"mu": Rat(1, 3), "nu": Rat(1, 5), "omega": Rat(1)},
    {"mu": Rat(2, 7), "nu": Rat(3, 4), "omega": Rat(5, 2)},
    {"mu": Rat(5, 9), "nu": Rat(1, 8), "omega": Rat(7, 3)},
]


def _h(model, params):
    keep = ("mu", "nu") if model == "trig" else ("mu", "nu", "omega")
    return specialize(operator(model), {p: params[p] for p in keep})


def test_flag_basis_dimensions_and_order():
    dims = [len(spectra.flag_basis(MINIMAL_GRADING, n, "rat").monomials)
            for n in range(3)]
    assert dims == [1, 2, 5]
    b = spectra.flag_basis(MINIMAL_GRADING, 2, "trig")
    assert b.monomials == [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0),
                           (0, 0, 1, 0), (2, 0, 0, 0)]


def test_flag_invariance_minimal_both_models():
    for model in ("rat", "trig"):
        h = _h(model, POINTS[0])
        ok, wit = spectra.check_invariance(h, MINIMAL_GRADING, 4, model)
        assert ok, wit


def test_flag_invariance_trig_extra_charvecs():
    h = _h("trig", POINTS[0])
    for cv in [(2, 2, 3, 4), (2, 3, 4, 6), (2, 4, 4, 6),
               (8, 11, 15, 21), (11, 16, 21, 30)]:
        ok, wit = spectra.check_invariance(h, cv, 3, "trig")
        assert ok, (cv, wit)


def test_flag_counterexample_detected():
    h = _h("trig", POINTS[0])
    ok, wit = spectra.check_invariance(h, (1, 1, 1, 1), 2, "trig")
    assert not ok and wit is not None


def test_matrices_triangular_and_diagonal_formulas():
    for params in POINTS:
        for model in ("rat", "trig"):
            h = _h(model, params)
            basis = spectra.flag_basis(MINIMAL_GRADING, 3, model)
            mat = spectra.operator_matrix(h, basis)
            assert spectra.is_triangular(mat)
            for i, label in enumerate(basis.monomials):
                if model == "rat":
                    expect = spectra.rational_spectrum(label,
                                                       params["omega"])
                else:
                    expect = spectra.trig_spectrum(label, params["mu"],
                                                   params["nu"])
                assert mat[i][i] == expect, (model, label)


def test_rational_diagonal_degeneracy_consistency():
    params = POINTS[0]
    h = _h("rat", params)
    basis = spectra.flag_basis(MINIMAL_GRADING, 4, "rat")
    mat = spectra.operator_matrix(h, basis)
    seen = {}
    for i, label in enumerate(basis.monomials):
        seen.setdefault(mat[i][i], []).append(label)
    # levels fully contained in the truncation match the level count
    for level in (0, 2, 4):
        lam = spectra.rational_spectrum((level // 2, 0, 0, 0),
                                        params["omega"])
        assert len(seen[lam]) == spectra.degeneracy(level)


def test_degeneracy_against_enumeration():
    for n_level in range(0, 41, 2):
        brute = 0
        for n1 in range(n_level // 2 + 1):
            for n2 in range((n_level - 2 * n1) // 6 + 1):
                for n3 in range((n_level - 2 * n1 - 6 * n2) // 8 + 1):
                    if (n_level - 2 * n1 - 6 * n2 - 8 * n3) % 12 == 0:
                        brute += 1
        assert spectra.degeneracy(n_level) == brute
    assert spectra.degeneracy(6) == 2
    assert spectra.degeneracy(8) == 3


def test_spectrum_formulas():
    assert spectra.rational_spectrum((0, 0, 0, 0), Rat(1)) == 0
    assert spectra.rational_spectrum((1, 0, 0, 0), Rat(1)) == -4
    assert spectra.rational_spectrum((0, 0, 1, 0), Rat(1)) == -16
    mu, nu = Rat(1, 3), Rat(1, 5)
    assert spectra.trig_spectrum((1, 0, 0, 0), mu, nu) == \
        -(1 + 5 * mu + 6 * nu)
    assert spectra.trig_spectrum((0, 1, 0, 0), mu, nu) == \
        -2 * (1 + 3 * mu + 5 * nu)
    assert spectra.trig_spectrum((2, 0, 0, 0), mu, nu) == \
        -2 * (2 + 5 * mu + 6 * nu)


def test_eigen_residuals():
    for model in ("rat", "trig"):
        h = _h(model, POINTS[1])
        basis = spectra.flag_basis(MINIMAL_GRADING, 2, model)
        mat = spectra.operator_matrix(h, basis)
        for label, lam, coeffs in spectra.eigen_decompose(mat, basis):
            phi = spectra.eigenfunction_poly(basis, coeffs)
            assert (h.apply(phi) - phi * lam).is_zero(), label


def test_resonant_degeneracy_raises():
    basis = spectra.flag_basis(MINIMAL_GRADING, 1, "rat")
    mat = [[Rat(0), Rat(1)], [Rat(0), Rat(0)]]
    with pytest.raises(spectra.ResonantDegeneracy):
        spectra.eigen_decompose(mat, basis)


def test_reproduce_appendix_tables():
    for model in ("rat", "trig"):
        rep = spectra.reproduce_appendix(model)
        assert rep.ok, [l for l in rep.lines() if l.startswith("FAIL")]


def test_spectral_report_shape():
    payload = spectra.spectral_report("rat", 2, POINTS[0])
    assert len(payload["entries"]) == 5
    assert all(e["appendix_match"] == "pass" for e in payload["entries"])
    payload = spectra.spectral_report("trig", 2,
                                      {"mu": Rat(1, 3), "nu": Rat(1, 5)})
    labels = [tuple(e["label"]) for e in payload["entries"]]
    assert (1, 0, 0, 0) in labels and (2, 0, 0, 0) in labels
    assert all(e["appendix_match"] == "pass" for e in payload["entries"])


def test_particular_integral_annihilates_eigenfunctions():
    rep = spectra.verify_particular_integral_on_eigenfunctions(
        "rat", 2, POINTS[0])
    assert rep.ok, rep.lines()
