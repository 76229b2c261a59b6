"""Zero localization: counting, refinement, multiplicities, diagnostics."""

import math

import numpy as np
import pytest

from sinecomb import (
    ExpPolynomial,
    Rect,
    SineProduct,
    count_zeros,
    expand_sine_product,
    find_zeros,
    find_zeros_report,
    zero_strip_estimate,
    zeros_to_csv,
)
from sinecomb.errors import BoundaryProximityError, EmptyPolynomialError

from conftest import Y0

PI = math.pi


class TestCountZeros:
    def test_eleven_integers(self, sin_poly):
        assert count_zeros(sin_poly, Rect(-5.3, 5.7, -1, 1)) == 11

    def test_empty_window(self, sin_poly):
        assert count_zeros(sin_poly, Rect(0.2, 0.8, -1, 1)) == 0

    def test_double_zero(self, sin2_poly):
        assert count_zeros(sin2_poly, Rect(-0.4, 0.4, -1, 1)) == 2

    def test_boundary_proximity_error(self, sin_poly):
        # right edge passes through the zero at 1
        with pytest.raises(BoundaryProximityError):
            count_zeros(sin_poly, Rect(0.5, 1.0, -1, 1))

    def test_empty_polynomial(self):
        with pytest.raises(EmptyPolynomialError):
            count_zeros(ExpPolynomial(()), Rect(0, 1, -1, 1))

    def test_single_term_zero_free(self):
        p = ExpPolynomial.from_terms([(2.0, 1.0 + 1j)])
        assert count_zeros(p, Rect(-10, 10, -1, 1)) == 0


class TestFindZeros:
    def test_sine_integers(self, sin_poly):
        m = find_zeros(sin_poly, Rect(-3.4, 3.4, -1, 1), 1e-12)
        assert [round(loc.real) for loc, _ in m.atoms] == list(range(-3, 4))
        for loc, mass in m.atoms:
            assert abs(loc - round(loc.real)) <= 1e-10
            assert mass == 1

    def test_complex_pair(self, fourcos_poly):
        m = find_zeros(fourcos_poly, Rect(0, 1, -0.5, 0.5))
        assert len(m) == 2
        locs = sorted(m.locations, key=lambda z: z.imag)
        assert abs(locs[0] - complex(0.5, -Y0)) < 1e-10
        assert abs(locs[1] - complex(0.5, Y0)) < 1e-10
        assert all(mass == 1 for mass in m.masses)

    def test_empty_window(self, sin_poly):
        assert find_zeros(sin_poly, Rect(0.1, 0.9, -1, 1)).atoms == ()

    def test_double_zero_mass(self, sin2_poly):
        m = find_zeros(sin2_poly, Rect(-0.4, 0.4, -1, 1))
        assert len(m) == 1
        loc, mass = m.atoms[0]
        assert mass == 2
        assert abs(loc) < 1e-10

    def test_jitter_rescues_boundary_zero(self, sin_poly):
        # zero at 1 sits on the requested boundary; top-level jitter inflates
        m = find_zeros(sin_poly, Rect(0.5, 1.0, -1, 1))
        assert m.total_mass() >= 1

    def test_residual_diagnostics(self, sin_poly):
        m, diag = find_zeros_report(sin_poly, Rect(-2.5, 2.5, -1, 1))
        assert diag["count"] == 5 == m.total_mass()
        assert diag["max_residual"] <= diag["residual_bound"]
        assert diag["exit_status"] == 0
        assert diag["coarse"] == []


class TestInvariants:
    def test_mass_equals_count(self, two_lattice_product):
        p = expand_sine_product(two_lattice_product)
        rect = Rect(-7.3, 7.3, -0.6, 0.6)
        assert find_zeros(p, rect).total_mass() == count_zeros(p, rect)

    def test_window_density_bound(self, two_lattice_product):
        # unit windows hold at most ceil(total lattice density) + 1 zeros
        p = expand_sine_product(two_lattice_product)
        strip = zero_strip_estimate(p)
        rng = np.random.default_rng(404)
        counts = []
        for t in rng.uniform(-30, 30, 100):
            m = find_zeros(p, Rect(t, t + 1.0, strip.alpha - 0.2, strip.beta + 0.2))
            counts.append(m.total_mass())
        density = (1 + math.sqrt(2))  # alpha1/pi + alpha2/pi zeros per unit
        assert max(counts) <= math.ceil(density) + 1

    def test_conjugate_symmetric_zero_set(self, fourcos_poly):
        m = find_zeros(fourcos_poly, Rect(-3.2, 3.2, -0.5, 0.5))
        locs = sorted(m.locations, key=lambda z: (round(z.real, 6), z.imag))
        for loc in locs:
            mirror = min(abs(loc.conjugate() - other) for other in locs)
            assert mirror <= 1e-9

    def test_zeros_inside_strip_estimate(self, fourcos_poly):
        strip = zero_strip_estimate(fourcos_poly)
        m = find_zeros(fourcos_poly, Rect(-4.6, 4.6, -1.0, 1.0))
        for loc, _ in m.atoms:
            assert strip.alpha - 1e-12 <= loc.imag <= strip.beta + 1e-12


class TestCsvExport:
    def test_format(self, fourcos_poly):
        m = find_zeros(fourcos_poly, Rect(0, 1, -0.5, 0.5))
        text = zeros_to_csv(m)
        lines = text.strip().split("\n")
        assert lines[0] == "x,y,multiplicity"
        assert len(lines) == 3
        x, y, mult = lines[1].split(",")
        assert abs(float(x) - 0.5) < 1e-10
        assert abs(abs(float(y)) - Y0) < 1e-10
        assert mult == "1"

    def test_seventeen_digits(self, sin_poly):
        m = find_zeros(sin_poly, Rect(2.9, 3.4, -1, 1))
        row = zeros_to_csv(m).strip().split("\n")[1]
        assert row.split(",")[0] == f"{m.atoms[0][0].real:.17g}"
