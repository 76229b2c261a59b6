"""Zero combs of exponential polynomials.

Walks through the zero-localization machinery: expanding sine products into
exponential polynomials, counting zeros by the argument principle, refining
them with Newton's method, and exporting the resulting comb.
"""

import math


from sinecomb import (
    ExpPolynomial,
    Rect,
    SineProduct,
    count_zeros,
    expand_sine_product,
    find_zeros,
    zero_strip_estimate,
    zeros_to_csv,
)


def main():
    print("=== zero comb of sin(pi z) ===")
    sine = expand_sine_product(SineProduct.from_factors(1.0, 0.0, [(math.pi, 0.0, 1)]))
    print("expansion terms:", sine.terms)
    strip = zero_strip_estimate(sine)
    print(f"all zeros confined to {strip.alpha:.4f} <= Im z <= {strip.beta:.4f}")

    rect = Rect(-5.3, 5.7, -1.0, 1.0)
    print(f"winding-number count on [-5.3, 5.7]: {count_zeros(sine, rect)}")
    comb = find_zeros(sine, Rect(-3.4, 3.4, -1, 1), 1e-12)
    print("refined zeros:", [round(loc.real, 12) for loc, _ in comb.atoms])

    print()
    print("=== a double-zero comb: sin^2(pi z) ===")
    sine2 = expand_sine_product(SineProduct.from_factors(1.0, 0.0, [(math.pi, 0.0, 2)]))
    comb2 = find_zeros(sine2, Rect(-2.4, 2.4, -1, 1))
    for loc, mass in comb2.atoms:
        print(f"  zero at {loc.real:+.12f}  multiplicity {mass}")

    print()
    print("=== complex pairs: 4 + 2 cos(2 pi z) ===")
    p = ExpPolynomial.from_terms([(-1.0, 1.0), (0.0, 4.0), (1.0, 1.0)])
    y0 = math.log(2 + math.sqrt(3)) / (2 * math.pi)
    print(f"analytic zero height: log(2+sqrt(3))/(2 pi) = {y0:.10f}")
    pairs = find_zeros(p, Rect(-2.6, 2.6, -0.5, 0.5))
    print(zeros_to_csv(pairs))


if __name__ == "__main__":
    main()
