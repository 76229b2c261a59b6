"""Exponential polynomials and sine products.

An exponential polynomial is a finite sum ``sum_j q_j * exp(2*pi*i*omega_j*z)``
with strictly increasing real frequencies ``omega_j`` and nonzero complex
amplitudes ``q_j``.  A sine product is ``C * exp(i*a*z) *
prod_j sin(alpha_j*z + beta_j)**mult_j`` in canonical form (``alpha_j > 0``,
``beta_j in [0, pi)``, signs absorbed into ``C``).  Expanding a sine product
with ``sin u = (exp(iu) - exp(-iu)) / 2i`` gives an exponential polynomial
exactly, which is the bridge used by the factorization round trip.

All values are immutable and all operations are pure.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, EmptyPolynomialError, ZeroFreeError

TWO_PI = 2.0 * math.pi

#: Frequencies closer than this (absolute) are summed into one term.
FREQ_MERGE_TOL = 1e-9
#: Coefficients below this times max|coeff| are dropped after expansion.
COEFF_PRUNE_REL = 1e-14
#: Default cap on the number of terms an expansion may produce.
EXPANSION_TERM_CAP = 4096


def _canonical_terms(pairs) -> tuple[tuple[float, complex], ...]:
    """Sort by frequency, merge near-coincident frequencies, prune dust."""
    pairs = [(float(w), complex(q)) for w, q in pairs]
    pairs.sort(key=lambda t: t[0])
    merged: list[list] = []
    for w, q in pairs:
        if merged and w - merged[-1][0] < FREQ_MERGE_TOL:
            merged[-1][1] += q
        else:
            merged.append([w, q])
    if not merged:
        return ()
    scale = max(abs(q) for _, q in merged)
    if scale == 0.0:
        return ()
    floor = COEFF_PRUNE_REL * scale
    return tuple((w, q) for w, q in merged if abs(q) > floor)


@dataclass(frozen=True)
class ExpPolynomial:
    """Finite frequency -> coefficient table for sum q * exp(2*pi*i*omega*z).

    ``terms`` is sorted by strictly increasing frequency and holds no zero
    coefficients; the empty tuple represents the zero function.  Build
    instances through :meth:`from_terms`, which canonicalizes arbitrary
    (frequency, coefficient) pairs.
    """

    terms: tuple[tuple[float, complex], ...]

    @classmethod
    def from_terms(cls, pairs) -> "ExpPolynomial":
        return cls(_canonical_terms(pairs))

    def __post_init__(self):
        for (w0, q0), (w1, _) in zip(self.terms, self.terms[1:]):
            if w1 - w0 < FREQ_MERGE_TOL:
                raise ValueError("frequencies not strictly increasing or too close")
        if any(q == 0 for _, q in self.terms):
            raise ValueError("zero coefficient stored")

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    @property
    def freq_min(self) -> float:
        return self.terms[0][0]

    @property
    def freq_max(self) -> float:
        return self.terms[-1][0]

    def evaluate(self, z):
        """Value at ``z`` (scalar or ndarray).

        Terms are accumulated in ascending frequency order so results are
        bit-reproducible.
        """
        if isinstance(z, np.ndarray):
            acc = np.zeros(z.shape, dtype=complex)
            for w, q in self.terms:
                acc += q * np.exp((1j * TWO_PI * w) * z)
            return acc
        acc = 0j
        for w, q in self.terms:
            acc += q * cmath.exp((1j * TWO_PI * w) * z)
        return acc

    def derivative(self) -> "ExpPolynomial":
        """Termwise derivative; the omega = 0 term drops out."""
        return ExpPolynomial.from_terms(
            (w, (1j * TWO_PI * w) * q) for w, q in self.terms if w != 0.0
        )

    def scaled(self, factor: complex) -> "ExpPolynomial":
        if factor == 0:
            return ExpPolynomial(())
        return ExpPolynomial(tuple((w, q * factor) for w, q in self.terms))


def multiply(p1: ExpPolynomial, p2: ExpPolynomial,
             term_cap: int = EXPANSION_TERM_CAP) -> ExpPolynomial:
    """Product of two exponential polynomials with canonical merging."""
    if not p1.terms or not p2.terms:
        return ExpPolynomial(())
    w1 = np.array([w for w, _ in p1.terms])
    q1 = np.array([q for _, q in p1.terms])
    w2 = np.array([w for w, _ in p2.terms])
    q2 = np.array([q for _, q in p2.terms])
    freqs = (w1[:, None] + w2[None, :]).ravel()
    coeffs = (q1[:, None] * q2[None, :]).ravel()
    out = ExpPolynomial.from_terms(zip(freqs.tolist(), coeffs.tolist()))
    if out.n_terms > term_cap:
        raise CapacityError(
            f"expansion produced {out.n_terms} terms, cap is {term_cap}")
    return out


@dataclass(frozen=True)
class SineProduct:
    """C * exp(i*a*z) * prod sin(alpha_j*z + beta_j)**mult_j, canonical form.

    Canonical means alpha > 0, beta in [0, pi), factors sorted by
    (alpha, beta), equal factors merged by summing multiplicities, and all
    sign flips absorbed into C.  Use :meth:`from_factors` to canonicalize.
    """

    C: complex
    a: float
    factors: tuple[tuple[float, float, int], ...]

    @classmethod
    def from_factors(cls, C, a, factors) -> "SineProduct":
        C = complex(C)
        if C == 0:
            raise ValueError("prefactor C must be nonzero")
        canon = []
        for alpha, beta, mult in factors:
            alpha = float(alpha)
            beta = float(beta)
            mult = int(mult)
            if mult < 1:
                raise ValueError("factor multiplicity must be >= 1")
            if alpha == 0.0:
                raise ValueError("factor frequency alpha must be nonzero")
            if alpha < 0.0:
                # sin(alpha z + beta) = -sin(-alpha z - beta)
                alpha, beta = -alpha, -beta
                C *= (-1.0) ** mult
            k = math.floor(beta / math.pi)
            beta -= k * math.pi
            if beta >= math.pi:  # guard rounding at the seam
                beta -= math.pi
                k += 1
            C *= (-1.0) ** (k * mult)
            canon.append([alpha, beta, mult])
        canon.sort(key=lambda f: (f[0], f[1]))
        merged: list[list] = []
        for alpha, beta, mult in canon:
            if merged and abs(alpha - merged[-1][0]) <= 1e-12 \
                    and abs(beta - merged[-1][1]) <= 1e-12:
                merged[-1][2] += mult
            else:
                merged.append([alpha, beta, mult])
        return cls(C, float(a), tuple((a_, b_, m_) for a_, b_, m_ in merged))

    @property
    def degree(self) -> int:
        """Total number of sine factors counted with multiplicity."""
        return sum(m for _, _, m in self.factors)

    def evaluate(self, z):
        """Pointwise product evaluation (reference path, not the expansion)."""
        if isinstance(z, np.ndarray):
            acc = self.C * np.exp(1j * self.a * z)
            for alpha, beta, mult in self.factors:
                acc *= np.sin(alpha * z + beta) ** mult
            return acc
        acc = self.C * cmath.exp(1j * self.a * z)
        for alpha, beta, mult in self.factors:
            acc *= cmath.sin(alpha * z + beta) ** mult
        return acc


def expand_sine_product(s: SineProduct,
                        term_cap: int = EXPANSION_TERM_CAP) -> ExpPolynomial:
    """Exact exponential-polynomial expansion of a sine product.

    Each factor contributes frequencies +-alpha/(2*pi); the prefactor
    contributes a/(2*pi).  Multiplying out and merging equal frequencies is
    exact up to floating point, with near-coincident frequencies summed and
    rounding dust pruned.

    Raises
    ------
    CapacityError
        If the expansion would exceed ``term_cap`` terms.
    """
    out = ExpPolynomial.from_terms([(s.a / TWO_PI, s.C)])
    for alpha, beta, mult in s.factors:
        factor = ExpPolynomial.from_terms([
            (-alpha / TWO_PI, 0.5j * cmath.exp(-1j * beta)),
            (alpha / TWO_PI, -0.5j * cmath.exp(1j * beta)),
        ])
        for _ in range(mult):
            out = multiply(out, factor, term_cap)
    return out


@dataclass(frozen=True)
class Strip:
    """Horizontal strip alpha <= Im z <= beta known to contain all zeros,
    with a working margin eta used when building search rectangles."""

    alpha: float
    beta: float
    eta: float

    def __post_init__(self):
        if not (self.alpha <= 0.0 <= self.beta):
            raise ValueError("strip must satisfy alpha <= 0 <= beta")
        if not self.eta > 0.0:
            raise ValueError("strip margin eta must be positive")


def zero_strip_estimate(p: ExpPolynomial, eta: float | None = None) -> Strip:
    """Dominant-term bound on the imaginary parts of all zeros of ``p``.

    For Im z above ``beta`` the lowest-frequency term dominates the rest of
    the sum, so ``p`` cannot vanish there; symmetrically below ``alpha`` with
    the highest frequency.  The returned bounds are

        beta  =  log(sum|q| / |q_min|) / (2*pi*(omega_1 - omega_0))
        alpha = -log(sum|q| / |q_max|) / (2*pi*(omega_N - omega_{N-1}))

    Raises
    ------
    EmptyPolynomialError
        If ``p`` is the zero function.
    ZeroFreeError
        If ``p`` has a single term and therefore no zeros at all.
    """
    if p.n_terms == 0:
        raise EmptyPolynomialError("zero function has no zero strip")
    if p.n_terms == 1:
        raise ZeroFreeError("single exponential is zero-free")
    total = sum(abs(q) for _, q in p.terms)
    gap_lo = p.terms[1][0] - p.terms[0][0]
    gap_hi = p.terms[-1][0] - p.terms[-2][0]
    y_plus = math.log(total / abs(p.terms[0][1])) / (TWO_PI * gap_lo)
    y_minus = math.log(total / abs(p.terms[-1][1])) / (TWO_PI * gap_hi)
    if eta is None:
        eta = 0.15 * (y_plus + y_minus) + 0.05
    return Strip(alpha=-y_minus, beta=y_plus, eta=eta)
