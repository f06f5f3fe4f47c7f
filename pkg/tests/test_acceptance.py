"""Ten acceptance criteria, each printed as a single PASS/FAIL line.

Every check is an exact identity; tolerance is zero everywhere.
"""

import time

import pytest

from orbitforge import cli
from orbitforge import hamiltonians as ham
from orbitforge import invariants as inv
from orbitforge import spectra
from orbitforge.exactmath import MPoly, Rat


def _announce(num, title, ok):
    print("\n%s criterion %d: %s" % ("PASS" if ok else "FAIL", num, title))
    assert ok, "criterion %d failed: %s" % (num, title)


def test_criterion_01_invariant_construction():
    start = time.time()
    ok = inv.verify_tau_tables("rat").ok and inv.verify_tau_tables("trig").ok
    elapsed = time.time() - start
    ok = ok and elapsed < 30
    _announce(1, "invariants match the closed-form tables "
                 "(%.1fs)" % elapsed, ok)


def test_criterion_02_ground_state_squares():
    start = time.time()
    ok = inv.verify_ground_state_squares("rat").ok \
        and inv.verify_ground_state_squares("trig").ok
    elapsed = time.time() - start
    ok = ok and elapsed < 300
    _announce(2, "ground-state squares equal P1/P2 with stated "
                 "prefactors (%.1fs)" % elapsed, ok)


def test_criterion_03_gauge_rotation():
    ok = ham.verify_gauge_rotation("rat").ok
    ok = ok and ham.verify_gauge_rotation("trig").ok
    # negative control: shifted ground-state energy must be caught
    ok = ok and not ham.verify_gauge_rotation("rat", e0_shift=Rat(1)).ok
    ok = ok and not ham.verify_gauge_rotation("trig", e0_shift=Rat(1)).ok
    _announce(3, "all 28 operator coefficients re-derived symbolically; "
                 "E0 certified; tampered E0 caught", ok)


def test_criterion_04_flat_metric():
    ok = True
    for model in ("rat", "trig"):
        _, rep = ham.metric_decomposition(model)
        ok = ok and rep.ok
        ok = ok and cli._riemann_suite(model).ok
    _announce(4, "metric divergence and interaction vectors verified; "
                 "Riemann tensor vanishes at 3 points per model", ok)


def test_criterion_05_potentials():
    ok = ham.potential_check("rat").ok and ham.potential_check("trig").ok
    _announce(5, "closed-form potentials match direct root sums with "
                 "symbolic couplings", ok)


def test_criterion_06_flags():
    ok = cli._flags_suite("rat").ok and cli._flags_suite("trig").ok
    _announce(6, "flag invariance for all tabulated characteristic "
                 "vectors; (1,1,1,1) counterexample detected", ok)


def test_criterion_07_spectra_eigenfunctions():
    ok = True
    for model in ("rat", "trig"):
        rep = spectra.reproduce_appendix(model)
        ok = ok and rep.ok
    pts = [Rat(1), Rat(5, 2), Rat(7, 3)]
    for om in pts:
        diag = [spectra.rational_spectrum(lbl, om)
                for lbl in [(1, 0, 0, 0), (2, 0, 0, 0), (0, 1, 0, 0),
                            (0, 0, 1, 0)]]
        ok = ok and diag == [-4 * om, -8 * om, -12 * om, -16 * om]
    _announce(7, "triangular matrices; low eigenpairs reproduce the "
                 "closed-form tables at 3 parameter points each", ok)


def test_criterion_08_degeneracies():
    ok = True
    for n_level in range(0, 41, 2):
        brute = sum(1
                    for n1 in range(n_level // 2 + 1)
                    for n2 in range((n_level - 2 * n1) // 6 + 1)
                    for n3 in range((n_level - 2 * n1 - 6 * n2) // 8 + 1)
                    if (n_level - 2 * n1 - 6 * n2 - 8 * n3) % 12 == 0)
        ok = ok and spectra.degeneracy(n_level) == brute
    _announce(8, "level degeneracies match exhaustive enumeration for "
                 "even N <= 40", ok)


def test_criterion_09_particular_integral():
    ok = True
    for model in ("rat", "trig"):
        for k in range(4):
            ok = ok and ham.verify_particular_integral(model, k).ok
    _announce(9, "particular integrals annihilate exactly the expected "
                 "flag, commutators vanish on it, k <= 3", ok)


def test_criterion_10_qes():
    ok = True
    p = ham.ModelParams(mu=Rat(1, 3), nu=Rat(1, 5), omega=Rat(1))
    q = ham.ModelParams(mu=Rat(2, 7), nu=Rat(3, 4), omega=Rat(5, 2))
    for params, a, gam in [(p, Rat(1), Rat(1)), (q, Rat(2), Rat(0)),
                           (p, Rat(1, 2), Rat(3))]:
        for k in range(3):
            res = ham.qes_operator(params,
                                   ham.QesParams(a=a, gamma=gam, k=k))
            ok = ok and res.report.ok
            ok = ok and len(res.matrix) == k + 1
            ok = ok and all(isinstance(c, type(Rat(1)))
                            for row in res.matrix for c in row)
            # gamma = 0 keeps every coefficient polynomial; otherwise
            # only the tau2 direction stays polynomial
            if gam == 0:
                ok = ok and all(res.polynomial_coeffs.values())
            else:
                ok = ok and res.polynomial_coeffs["tau2"]
    _announce(10, "QES tau2-sector closes for k <= 2 at 3 samples with "
                  "exact restriction matrices", ok)
