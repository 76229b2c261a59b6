"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Every tolerance here is pinned; run with ``pytest -s tests/test_acceptance.py``
to see the per-criterion lines.
"""

import math

import numpy as np
import pytest

from sinecomb import (
    LOWER,
    UPPER,
    FactorConfig,
    Rect,
    expand_sine_product,
    factor,
    find_zeros,
    fourier_measure,
    gaussian,
    growth_profile,
    logderiv_coeff_numeric,
    logderiv_coeffs_symbolic,
    poisson_report,
    contour_residue_check,
)
from sinecomb.factorize import profile_radii
from sinecomb.zeros import AtomicMeasure

from conftest import Y0, random_sine_product
from test_factorize import assert_products_close

PI = math.pi


def report(criterion, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def test_criterion_1_zero_localization(sin_poly, sin2_poly):
    rect = Rect(-50.3, 50.3, -1.0, 1.0)
    m1 = find_zeros(sin_poly, rect, 1e-12)
    ok = len(m1) == 101
    worst = max(abs(loc - round(loc.real)) for loc, _ in m1.atoms)
    ok = ok and worst <= 1e-9 and all(mass == 1 for _, mass in m1.atoms)

    m2 = find_zeros(sin2_poly, rect, 1e-12)
    worst2 = max(abs(loc - round(loc.real)) for loc, _ in m2.atoms)
    ok = ok and len(m2) == 101 and worst2 <= 1e-9 \
        and all(mass == 2 for _, mass in m2.atoms)
    report(1, ok, f"101+101 zeros, max offsets {worst:.2e} / {worst2:.2e}")


def test_criterion_2_complex_zeros(fourcos_poly):
    rect = Rect(-20.6, 20.6, -0.5, 0.5)
    m = find_zeros(fourcos_poly, rect, 1e-12)
    found = {}
    for loc, mass in m.atoms:
        found.setdefault(round(loc.real - 0.5), []).append(loc)
    worst = 0.0
    ok = True
    for n in range(-20, 21):
        pair = found.get(n, [])
        ok = ok and len(pair) == 2
        for loc in pair:
            target = complex(n + 0.5, math.copysign(Y0, loc.imag))
            worst = max(worst, abs(loc - target))
    ok = ok and worst <= 1e-9
    report(2, ok, f"pairs at n+1/2 +- i*{Y0:.7f}, max offset {worst:.2e}")


def test_criterion_3_logderiv_coefficients(sin_poly):
    up = logderiv_coeffs_symbolic(sin_poly, UPPER, 10.0)
    worst_sym = abs(up.get(0.0) + 1j * PI)
    for k in range(1, 11):
        worst_sym = max(worst_sym, abs(up.get(float(k)) + 2j * PI))
    ok = worst_sym <= 1e-12

    worst_num = 0.0
    for g, h in up.coeffs:
        v = logderiv_coeff_numeric(sin_poly, UPPER, g, 0.5, 500.0)
        worst_num = max(worst_num, abs(v - h))
    ok = ok and worst_num <= 5e-3
    report(3, ok, f"symbolic err {worst_sym:.2e}, Bohr-mean err {worst_num:.2e}")


def test_criterion_4_fourier_measure(sin_poly, fourcos_poly):
    fm = fourier_measure(logderiv_coeffs_symbolic(sin_poly, UPPER, 10.0),
                         logderiv_coeffs_symbolic(sin_poly, LOWER, 10.0))
    comb = {round(loc.real): mass for loc, mass in fm.atoms}
    ok = set(comb) == set(range(-10, 11))
    worst = max(abs(comb[g] - 1.0) for g in comb)
    ok = ok and worst <= 1e-10

    fq = fourier_measure(logderiv_coeffs_symbolic(fourcos_poly, UPPER, 2.0),
                         logderiv_coeffs_symbolic(fourcos_poly, LOWER, 2.0))
    expected = {0: 2.0, 1: -4.0, -1: -4.0, 2: 14.0, -2: 14.0}
    table = {round(loc.real): mass for loc, mass in fq.atoms}
    worst_q = max(abs(table[g] - expected[g]) for g in expected)
    ok = ok and set(table) == set(expected) and worst_q <= 1e-9
    report(4, ok, f"comb err {worst:.2e}, mass err {worst_q:.2e}")


def test_criterion_5_generalized_poisson(sin_poly, fourcos_poly):
    mu = find_zeros(sin_poly, Rect(-20.3, 20.3, -0.6, 0.6))
    mu_hat = fourier_measure(logderiv_coeffs_symbolic(sin_poly, UPPER, 20.0),
                             logderiv_coeffs_symbolic(sin_poly, LOWER, 20.0))
    ok = True
    detail = []
    for s in (1.0, 2.0, 4.0):
        rep = poisson_report(mu, mu_hat, gaussian(s), 0.0)
        ok = ok and rep.residual <= 1e-10 * (1 + abs(rep.lhs))
        detail.append(f"s={s:g}: {rep.residual:.2e}")

    mu_c = AtomicMeasure.from_atoms(
        [(complex(n + 0.5, sign * Y0), 1)
         for n in range(-26, 26) for sign in (1, -1)])
    mu_hat_c = fourier_measure(
        logderiv_coeffs_symbolic(fourcos_poly, UPPER, 12.0),
        logderiv_coeffs_symbolic(fourcos_poly, LOWER, 12.0))
    rep_c = poisson_report(mu_c, mu_hat_c, gaussian(1.0), 0.0)
    ok = ok and rep_c.residual <= 1e-8 * (1 + abs(rep_c.lhs))
    detail.append(f"complex: {rep_c.residual:.2e}")
    report(5, ok, ", ".join(detail))


def test_criterion_6_contour_identity(sin_poly, fourcos_poly):
    cases = [
        (sin_poly, Rect(0.2, 0.8, -1, 1)),
        (sin_poly, Rect(-0.4, 0.4, -1, 1)),
        (fourcos_poly, Rect(0.0, 1.0, -0.5, 0.5)),
    ]
    residuals = [contour_residue_check(p, gaussian(1.0), rect)
                 for p, rect in cases]
    ok = all(r <= 1e-8 for r in residuals)
    report(6, ok, "residuals " + ", ".join(f"{r:.2e}" for r in residuals))


def test_criterion_7_criterion_separation(fourcos_poly):
    rng = np.random.default_rng(424242)
    ok = True
    for _ in range(50):
        s = random_sine_product(rng, j_max=4, alpha_range=(0.5, 5.0),
                                mult_p=0.4)
        p = expand_sine_product(s)
        radii = profile_radii(p)
        rep = growth_profile(logderiv_coeffs_symbolic(p, UPPER, max(radii)),
                             logderiv_coeffs_symbolic(p, LOWER, max(radii)),
                             radii)
        ok = ok and rep.classification == "linear"

    radii = (2.0, 4.0, 8.0, 16.0)
    rep_q = growth_profile(
        logderiv_coeffs_symbolic(fourcos_poly, UPPER, 16.0),
        logderiv_coeffs_symbolic(fourcos_poly, LOWER, 16.0), radii)
    ratio_high = rep_q.values[3] / 16.0
    ratio_low = rep_q.values[0] / 2.0
    ok = ok and rep_q.classification == "superlinear" \
        and ratio_high > 1e6 * ratio_low
    report(7, ok, f"50/50 products linear; R(16)/16 = {ratio_high:.3e} "
                  f"> 1e6 * R(2)/2 = {1e6 * ratio_low:.3e}")


def test_criterion_8_factorization_round_trip(round_trip_results, fourcos_poly):
    ok = True
    worst = 0.0
    for s, out in round_trip_results:
        ok = ok and out.verdict == "sine_product" \
            and out.result.reconstruction_error <= 1e-6
        if ok:
            assert_products_close(out.result.product, s, tol=1e-6)
            worst = max(worst, out.result.reconstruction_error)

    rejected = factor(fourcos_poly)
    ok = ok and rejected.verdict == "not_sine_product" \
        and rejected.stage == "criterion"
    report(8, ok, f"50/50 round trips, worst re-expansion {worst:.2e}; "
                  f"non-product rejected at stage 'criterion'")


def test_criterion_9_invariant_suites():
    # the per-module invariant lists live in the module test files; this
    # gate asserts they are all present so a full pytest run exercises them
    import test_core
    import test_factorize
    import test_growth
    import test_logderiv
    import test_measures
    import test_zeros

    required = {
        test_core.TestInvariants: (
            "test_expansion_matches_pointwise_product",
            "test_derivative_commutes_with_expansion",
            "test_conjugate_symmetric_evaluation",
            "test_strip_contains_found_zeros"),
        test_zeros.TestInvariants: (
            "test_mass_equals_count",
            "test_window_density_bound",
            "test_conjugate_symmetric_zero_set",
            "test_zeros_inside_strip_estimate"),
        test_logderiv.TestInvariants: (
            "test_height_independence",
            "test_symbolic_numeric_agreement",
            "test_real_coefficient_symmetry",
            "test_partial_sums_within_tail_bound"),
        test_measures.TestFourierMeasure: ("test_conjugate_symmetric_masses",),
        test_measures.TestPoisson: ("test_residual_decreases_under_doubling",),
        test_measures.TestTransform: (
            "test_gaussian_matches_quadrature_on_real_axis",),
        test_measures.TestVariationGrowth: (
            "test_matches_growth_profile_times_two_pi",
            "test_mass_at_zero_equals_zero_density"),
        test_growth.TestInvariants: (
            "test_necessity_on_random_products",
            "test_profile_monotone",
            "test_scaling_leaves_profile_unchanged"),
        test_factorize.TestDetectProgressions: (
            "test_translation_covariance",
            "test_multiplicity_conservation"),
        test_factorize.TestFactor: (
            "test_round_trip_suite",
            "test_reconstruction_error_always_bounded"),
    }
    missing = [name for holder, names in required.items()
               for name in names if not callable(getattr(holder, name, None))]
    report(9, not missing,
           "module invariant suites present (run by the full pytest suite)"
           if not missing else f"missing: {missing}")
