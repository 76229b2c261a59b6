"""Shared fixtures: the worked example polynomials and random sine products."""

import cmath
import math

import numpy as np
import pytest

from sinecomb import ExpPolynomial, SineProduct, expand_sine_product

PI = math.pi


@pytest.fixture(scope="session")
def sin_poly():
    """Expansion of sin(pi z): {(-1/2, i/2), (1/2, -i/2)}."""
    return expand_sine_product(SineProduct.from_factors(1.0, 0.0, [(PI, 0.0, 1)]))


@pytest.fixture(scope="session")
def sin2_poly():
    """Expansion of sin^2(pi z)."""
    return expand_sine_product(SineProduct.from_factors(1.0, 0.0, [(PI, 0.0, 2)]))


@pytest.fixture(scope="session")
def fourcos_poly():
    """4 + 2cos(2 pi z): complex zeros at n + 1/2 +- i log(2+sqrt3)/(2 pi)."""
    return ExpPolynomial.from_terms([(-1.0, 1.0), (0.0, 4.0), (1.0, 1.0)])


@pytest.fixture(scope="session")
def two_lattice_product():
    """sin(pi z) * sin(sqrt2 pi z + 0.3): two incommensurate zero lattices."""
    return SineProduct.from_factors(
        1.0, 0.0, [(PI, 0.0, 1), (math.sqrt(2.0) * PI, 0.3, 1)])


Y0 = math.log(2.0 + math.sqrt(3.0)) / (2.0 * PI)  # zero height of 4+2cos(2 pi z)


def random_sine_product(rng, j_max=3, alpha_range=(0.9, 3.0), mult_p=0.3):
    """Random canonical sine product with well-separated factor frequencies."""
    while True:
        j = int(rng.integers(1, j_max + 1))
        alphas = rng.uniform(alpha_range[0], alpha_range[1], j)
        if j == 1 or np.diff(np.sort(alphas)).min() > 0.05:
            break
    betas = rng.uniform(0.05, PI - 0.05, j)
    mults = 1 + (rng.random(j) < mult_p).astype(int)
    c = (0.5 + 1.5 * rng.random()) * cmath.exp(2j * PI * rng.random())
    a = float(rng.uniform(-3.0, 3.0))
    return SineProduct.from_factors(
        c, a, list(zip(alphas.tolist(), betas.tolist(), mults.tolist())))


@pytest.fixture(scope="session")
def round_trip_results():
    """50 random canonical sine products factored back from their expansions;
    shared by the factorizer suite and the acceptance gate."""
    from sinecomb import FactorConfig, factor

    rng = np.random.default_rng(60601)
    results = []
    for _ in range(50):
        s = random_sine_product(rng, j_max=3, alpha_range=(0.9, 3.0))
        alpha_min = min(alpha for alpha, _, _ in s.factors)
        half = max(7.0, 3.6 * PI / alpha_min)
        out = factor(expand_sine_product(s), FactorConfig(window=(-half, half)))
        results.append((s, out))
    return results


def cot_series_upper(s: SineProduct, gamma_max: float) -> dict:
    """Independent oracle for the upper-half coefficients of f'/f of a sine
    product, from the cotangent expansion
    alpha*cot(alpha*z+beta) = -i*alpha*(1 + 2*sum_k e^{2ik beta} e^{2pi i(k alpha/pi) z}).
    Keys are frequencies rounded to 1e-6."""
    entries: dict[int, complex] = {}
    h0 = 1j * s.a
    for alpha, beta, mult in s.factors:
        h0 += -1j * alpha * mult
        k = 1
        while k * alpha / PI <= gamma_max + 1e-12:
            g = k * alpha / PI
            key = round(g * 1e6)
            entries[key] = entries.get(key, 0j) \
                + (-2j) * alpha * mult * cmath.exp(2j * k * beta)
            k += 1
    entries[0] = entries.get(0, 0j) + h0
    return {k: v for k, v in entries.items() if abs(v) > 1e-12}
