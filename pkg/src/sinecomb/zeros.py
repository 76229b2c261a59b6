"""Zero localization for exponential polynomials inside a strip rectangle.

Counting uses the argument principle: the winding number
(1/2*pi*i) * contour integral of p'/p over the rectangle boundary equals the
number of zeros inside, with multiplicity.  Localization subdivides the
rectangle until each cell either holds a single zero (then refined by
Newton's method on the logarithmic derivative) or has shrunk to the
clustering tolerance (then reported as one atom whose mass is the cell's
winding number).

Subdivision is organized in two phases.  Full-height vertical slabs are
split first; their winding numbers need only vertical line integrals plus
cumulative horizontal pieces, which telescope, so each new split line costs
one short integral instead of a full contour.  Slabs that cannot be split
further (conjugate pairs share a real part, clusters, multiple zeros) fall
back to plain two-dimensional bisection.  Sub-rectangle counts always
telescope exactly (child2 = parent - child1), so the total mass returned
equals the top-level count by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import TWO_PI, ExpPolynomial, zero_strip_estimate
from .errors import (
    BoundaryProximityError,
    EmptyPolynomialError,
    QuadratureFailureError,
    ZeroFreeError,
)
from .quadrature import integrate_segment

#: Zeros closer than this are reported as one atom with summed multiplicity.
CLUSTER_TOL = 1e-7
#: min sampled |p| on a contour must exceed this times the max term magnitude.
BOUNDARY_SAFETY_REL = 1e-8
#: Winding numbers are accepted once within this distance of an integer.
WINDING_ACCEPT = 1e-3
#: Beyond this distance from an integer the quadrature is declared failed.
WINDING_FAIL = 0.1
#: Absolute tolerance of one cached edge integral of p'/p.
EDGE_TOL = 2e-6
#: Rectangle jitter is below this fraction of the rectangle size.
JITTER_FRACTION = 0.01
MAX_BOUNDARY_TRIES = 5
_DEFAULT_SEED = 271828


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle x_min < x_max, y_min < y_max in the z plane."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("degenerate rectangle")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.x_min + self.x_max),
                       0.5 * (self.y_min + self.y_max))

    def contains(self, z: complex) -> bool:
        return (self.x_min < z.real < self.x_max
                and self.y_min < z.imag < self.y_max)


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite atomic measure: tuple of (location, mass) pairs.

    Zero measures carry positive integer masses (multiplicities); Fourier
    measures reuse the same container with complex masses.  Atoms are kept
    sorted by (Re, Im) of the location.
    """

    atoms: tuple[tuple[complex, complex], ...]

    @classmethod
    def from_atoms(cls, pairs) -> "AtomicMeasure":
        atoms = sorted(((complex(loc), mass) for loc, mass in pairs),
                       key=lambda a: (a[0].real, a[0].imag))
        return cls(tuple(atoms))

    @property
    def locations(self) -> list[complex]:
        return [loc for loc, _ in self.atoms]

    @property
    def masses(self) -> list:
        return [m for _, m in self.atoms]

    def total_mass(self):
        return sum(self.masses)

    def __len__(self) -> int:
        return len(self.atoms)


def _log_ratio_values(p: ExpPolynomial, dp: ExpPolynomial, z: np.ndarray) -> np.ndarray:
    """p'(z)/p(z) on an array of points, scaled to avoid overflow.

    The common dominant exponential is factored out per point, which leaves
    the ratio unchanged and keeps every term magnitude <= 1.
    """
    w = np.array([wi for wi, _ in p.terms])
    q = np.array([qi for _, qi in p.terms])
    dq = (1j * TWO_PI) * w * q
    expo = (1j * TWO_PI) * np.outer(w, z)
    expo -= expo.real.max(axis=0)[None, :]
    ex = np.exp(expo)
    den = (q[:, None] * ex).sum(axis=0)
    num = (dq[:, None] * ex).sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / den
    # a node can land exactly on a zero (den cancels to 0.0); any such node
    # is deep inside the rounding-noise zone, so a finite placeholder keeps
    # the quadrature error estimates meaningful
    bad = ~np.isfinite(out)
    if bad.any():
        out[bad] = 0.0
    return out


def _term_scale(p: ExpPolynomial, z: np.ndarray) -> np.ndarray:
    """Pointwise max term magnitude max_j |q_j e^{2*pi*i*omega_j*z}|.

    This is the natural size of |p| at each boundary point; comparing the
    sampled |p| against it keeps the safety test meaningful on rectangles
    spanning several e-foldings of the exponentials.
    """
    y = np.asarray(z).imag
    out = np.zeros(y.shape)
    for w, q in p.terms:
        np.maximum(out, abs(q) * np.exp(np.minimum(-TWO_PI * w * y, 700.0)),
                   out=out)
    return out


def _segment_dips(p: ExpPolynomial, dp: ExpPolynomial, a: complex,
                  b: complex) -> list[tuple[float, complex, float]]:
    """All suspicious |p| dips along the segment: [(value, location, gap)].

    Gap is the distance-to-zero estimate |p/p'| at the dip.  Every local
    minimum of the coarse samples whose clearance is comparable to the
    sample spacing gets its bracket zoomed, so multiple zeros on (or near)
    one segment are all detected, not just the deepest one.
    """
    dz = b - a
    n = max(129, int(16 * abs(dz)) + 1)
    t = np.linspace(0.0, 1.0, n)
    vals = np.abs(p.evaluate(a + dz * t))
    spacing = abs(dz) / (n - 1)
    interior = (vals[1:-1] <= vals[:-2]) & (vals[1:-1] <= vals[2:])
    candidates = [0, n - 1] + (np.nonzero(interior)[0] + 1).tolist()
    candidates.sort(key=lambda i: vals[i])
    out = []
    for k in candidates[:8]:
        z_k = a + dz * t[k]
        gap = _clearance(p, dp, z_k)
        if gap > 4.0 * spacing:
            out.append((float(vals[k]), z_k, gap))
            continue
        best, z_best = float(vals[k]), z_k
        lo, hi = t[max(k - 1, 0)], t[min(k + 1, n - 1)]
        for _ in range(6):
            tt = np.linspace(lo, hi, 33)
            vv = np.abs(p.evaluate(a + dz * tt))
            j = int(vv.argmin())
            if vv[j] < best:
                best = float(vv[j])
                z_best = a + dz * tt[j]
            lo, hi = tt[max(j - 1, 0)], tt[min(j + 1, 32)]
        out.append((best, z_best, _clearance(p, dp, z_best)))
    return out


def _segment_scan(p: ExpPolynomial, dp: ExpPolynomial, a: complex,
                  b: complex) -> tuple[float, complex, float]:
    """Worst dip of the segment: (min |p|, location of min clearance, min
    clearance); see _segment_dips."""
    dips = _segment_dips(p, dp, a, b)
    val = min(v for v, _, _ in dips)
    _, z_dip, gap = min(dips, key=lambda d: d[2])
    return val, z_dip, gap


def _segment_min_ratio(p: ExpPolynomial, dp: ExpPolynomial, a: complex,
                       b: complex) -> float:
    """Minimum of |p| / (pointwise max term magnitude) over the segment's
    suspicious dips (see _segment_dips)."""
    return min(v / float(_term_scale(p, np.array([z]))[0])
               for v, z, _ in _segment_dips(p, dp, a, b))


def _boundary_ok(p: ExpPolynomial, rect: Rect) -> bool:
    dp = p.derivative()
    bl = complex(rect.x_min, rect.y_min)
    br = complex(rect.x_max, rect.y_min)
    tr = complex(rect.x_max, rect.y_max)
    tl = complex(rect.x_min, rect.y_max)
    worst = min(_segment_min_ratio(p, dp, bl, br),
                _segment_min_ratio(p, dp, br, tr),
                _segment_min_ratio(p, dp, tr, tl),
                _segment_min_ratio(p, dp, tl, bl))
    return worst > BOUNDARY_SAFETY_REL


def _clearance(p: ExpPolynomial, dp: ExpPolynomial, z: complex) -> float:
    """Distance-to-zero proxy |p/p'| at a sampled |p| dip.

    Near a zero of multiplicity m this is dist/m, which is exactly what
    bounds the cost of integrating p'/p along a nearby contour; unlike raw
    |p| it stays meaningful at multiple zeros.
    """
    pv = p.evaluate(z)
    dv = dp.evaluate(z)
    if pv == 0:
        return 0.0
    if dv == 0 or not (math.isfinite(abs(pv)) and math.isfinite(abs(dv))):
        return math.inf
    return abs(pv / dv)


def _noise_radius(mult: int) -> float:
    """Distance below which |p| near an m-fold zero is double-precision
    rounding noise of the term sum: (pi*r)^m ~ 1e-13."""
    return 1e-13 ** (1.0 / mult) / math.pi


def _newton_refine(p: ExpPolynomial, dp: ExpPolynomial, z0: complex, mult: int,
                   tol: float, escape: float, max_iter: int = 60):
    """Multiplicity-corrected Newton iteration z -> z - mult*p/p'.

    Returns (z, converged).  Near a zero of multiplicity ``mult`` the
    corrected step restores quadratic convergence.  Coefficient rounding
    splits an exact multiple zero into a microscopic cluster, below which
    the steps stop contracting; stagnation at that scale counts as
    converged (the final polish runs on a derivative where the zero is
    simple).
    """
    z = z0
    prev_step = math.inf
    stall = 0
    for _ in range(max_iter):
        pv = p.evaluate(z)
        if pv == 0:
            return z, True
        dv = dp.evaluate(z)
        if dv == 0 or not (math.isfinite(dv.real) and math.isfinite(dv.imag)):
            return z, False
        step = mult * pv / dv
        z = z - step
        if abs(z - z0) > escape:
            return z, False
        s = abs(step)
        if s < tol:
            return z, True
        if mult > 1 and s < 1e-6 * (1.0 + abs(z)) and s > 0.25 * prev_step:
            stall += 1
            if stall >= 3:
                return z, True
        else:
            stall = 0
        prev_step = s
    return z, False


class _Search:
    """One find_zeros invocation: caches, tolerances, deterministic jitter."""

    def __init__(self, p: ExpPolynomial, rect: Rect, tol: float,
                 y_zero_band: tuple[float, float]):
        self.p = p
        self.dp = p.derivative()
        self.rect = rect
        self.tol = tol
        self.y_newton = 0.5 * (y_zero_band[0] + y_zero_band[1])
        self.v_cache: dict[float, complex] = {}
        self.h_cache: dict[tuple[float, float, float], complex] = {}

    # -- cached contour pieces (slab phase) --------------------------------

    def _f(self, z):
        return _log_ratio_values(self.p, self.dp, z)

    def _vertical(self, x: float, tol: float = EDGE_TOL) -> complex:
        if x not in self.v_cache:
            val, _ = integrate_segment(self._f, complex(x, self.rect.y_min),
                                       complex(x, self.rect.y_max), tol)
            self.v_cache[x] = val
        return self.v_cache[x]

    def _horizontal(self, y: float, a: float, b: float,
                    tol: float = EDGE_TOL) -> complex:
        key = (y, a, b)
        if key not in self.h_cache:
            val, _ = integrate_segment(self._f, complex(a, y), complex(b, y), tol)
            self.h_cache[key] = val
        return self.h_cache[key]

    def _split_horizontals(self, a: float, b: float, c: float):
        """Populate the (a,c) and (c,b) pieces from the cached (a,b) ones."""
        for y in (self.rect.y_min, self.rect.y_max):
            whole = self._horizontal(y, a, b)
            left = self._horizontal(y, a, c)
            self.h_cache[(y, c, b)] = whole - left

    def _refine_slab_pieces(self, a: float, b: float, tol: float):
        for y in (self.rect.y_min, self.rect.y_max):
            val, _ = integrate_segment(self._f, complex(a, y), complex(b, y), tol)
            self.h_cache[(y, a, b)] = val
        for x in (a, b):
            val, _ = integrate_segment(self._f, complex(x, self.rect.y_min),
                                       complex(x, self.rect.y_max), tol)
            self.v_cache[x] = val

    def _slab_raw_winding(self, a: float, b: float) -> complex:
        total = (self._horizontal(self.rect.y_min, a, b)
                 + self._vertical(b)
                 - self._horizontal(self.rect.y_max, a, b)
                 - self._vertical(a))
        return total / (2j * math.pi)

    def slab_count(self, a: float, b: float) -> int:
        for escalation in range(3):
            w = self._slab_raw_winding(a, b)
            n = round(w.real)
            if abs(w - n) < WINDING_ACCEPT and n >= 0:
                return n
            self._refine_slab_pieces(a, b, EDGE_TOL / 256.0 ** (escalation + 1))
        w = self._slab_raw_winding(a, b)
        n = round(w.real)
        if abs(w - n) <= WINDING_FAIL and n >= 0:
            raise QuadratureFailureError(
                f"slab winding {w:.6g} did not settle below {WINDING_ACCEPT}")
        raise QuadratureFailureError(f"non-integer slab winding {w:.6g}")

    # -- plain four-edge winding (fallback phase) --------------------------

    _LADDER = ((EDGE_TOL, WINDING_ACCEPT), (EDGE_TOL / 256.0, WINDING_ACCEPT),
               (0.02, 0.2), (0.15, 0.4))

    def winding4(self, rect: Rect, ladder=_LADDER) -> int:
        """Four-edge winding number with a tolerance ladder.

        Very close to a multiple zero, |p| cancels down to the rounding
        noise of the term sum and p'/p carries an irreducible relative
        error, so after the strict attempts a noise-tolerant pass with a
        loose edge tolerance is tried: the winding is an exact integer, so
        settling within 0.2 of one still counts zeros correctly.
        """
        corners = (complex(rect.x_min, rect.y_min), complex(rect.x_max, rect.y_min),
                   complex(rect.x_max, rect.y_max), complex(rect.x_min, rect.y_max))
        w = None
        for tol, accept in ladder:
            try:
                total = 0j
                for k in range(4):
                    val, _ = integrate_segment(self._f, corners[k],
                                               corners[(k + 1) % 4], tol,
                                               max_panels=2000)
                    total += val
            except QuadratureFailureError:
                continue
            w = total / (2j * math.pi)
            n = round(w.real)
            if abs(w - n) < accept and n >= 0:
                return n
        raise QuadratureFailureError(f"winding did not settle (last {w})")

    # -- split-line selection ----------------------------------------------

    _SPLIT_FRACTIONS = (0.5, 0.46, 0.54, 0.41, 0.59, 0.34, 0.66)

    def _pick_line(self, lo: float, hi: float, seg_of) -> float | None:
        """Choose a split coordinate in (lo, hi) whose line stays clear of
        zeros: candidates fan out from the midpoint, the first comfortably
        clear one wins, otherwise the candidate with the largest
        distance-to-zero clearance at its |p| dip.

        Besides the clearance floor, the dip's |p| must stay well above the
        rounding noise of the term sum (ratio floor): a boundary inside the
        noise zone of a multiple zero cannot be integrated along at all.
        """
        best = None
        seg_len = hi - lo
        for frac in self._SPLIT_FRACTIONS:
            c = lo + frac * (hi - lo)
            a, b = seg_of(c)
            seg_len = abs(b - a)
            val, z_dip, gap = _segment_scan(self.p, self.dp, a, b)
            if gap > 1e-3 * seg_len:
                return c
            ratio = val / float(_term_scale(self.p, np.array([z_dip]))[0])
            if best is None or gap > best[1]:
                best = (c, gap, ratio)
        # the accepted line must keep all zeros at a distance the adaptive
        # quadrature can resolve (relative floor) and its |p| dip above the
        # term-sum rounding noise (absolute ratio floor)
        if best is not None and best[1] > 1e-4 * seg_len and best[2] > 1e-11:
            return best[0]
        return None

    def _safe_vertical_line(self, a: float, b: float, y0: float, y1: float):
        return self._pick_line(a, b, lambda c: (complex(c, y0), complex(c, y1)))

    def _safe_horizontal_line(self, a: float, b: float, lo: float, hi: float):
        return self._pick_line(lo, hi, lambda c: (complex(a, c), complex(b, c)))

    # -- cell resolution ----------------------------------------------------

    def _box_clear(self, box: Rect) -> bool:
        """Edges must keep zeros at an integrable relative distance and stay
        above the term-sum rounding noise."""
        corners = (complex(box.x_min, box.y_min), complex(box.x_max, box.y_min),
                   complex(box.x_max, box.y_max), complex(box.x_min, box.y_max))
        for k in range(4):
            a, b = corners[k], corners[(k + 1) % 4]
            val, z_dip, gap = _segment_scan(self.p, self.dp, a, b)
            if gap <= 1e-3 * abs(b - a):
                return False
            if val <= 1e-11 * float(_term_scale(self.p, np.array([z_dip]))[0]):
                return False
        return True

    def _tight_mass(self, z: complex, mult: int, owner: Rect):
        """Winding of a tight box around ``z``, clipped to the owning cell so
        neighbours' zeros are never counted twice.

        Within distance ~(noise/|local coefficient|)^(1/m) of an m-fold zero
        the evaluated |p| is rounding noise, and the local coefficient can
        be small (for instance when another zero sits nearby), so the box
        grows until its edges clear the measured noise floor.
        """
        half = max(0.5 * CLUSTER_TOL, _noise_radius(mult))
        for _ in range(10):
            box_x0 = max(z.real - half, owner.x_min)
            box_x1 = min(z.real + half, owner.x_max)
            box_y0 = max(z.imag - half, owner.y_min)
            box_y1 = min(z.imag + half, owner.y_max)
            if box_x1 - box_x0 <= 0 or box_y1 - box_y0 <= 0:
                return None
            box = Rect(box_x0, box_x1, box_y0, box_y1)
            at_owner = (box_x0 == owner.x_min and box_x1 == owner.x_max
                        and box_y0 == owner.y_min and box_y1 == owner.y_max)
            if self._box_clear(box):
                try:
                    # boxes live near the cancellation-noise scale, so only
                    # the noise-tolerant rungs are meaningful; a 0.15 edge
                    # tolerance still bounds the winding within 0.11
                    return self.winding4(box, ladder=((0.02, 0.2),
                                                      (0.15, 0.4)))
                except QuadratureFailureError:
                    return None
            if at_owner:
                return None  # cannot grow past the owning cell
            half *= 2.2
        return None

    def _polish_multiple(self, z: complex, mult: int) -> tuple[complex, bool]:
        """Refine the location of an m-fold zero on the (m-1)-th derivative,
        where it is a simple zero free of the |p| cancellation noise."""
        q = self.p
        for _ in range(mult - 1):
            q = q.derivative()
        z2, ok = _newton_refine(q, q.derivative(), z, 1, self.tol,
                                escape=max(100.0 * _noise_radius(mult), 1e-4))
        return (z2, True) if ok else (z, False)

    def resolve_cell(self, rect: Rect, n: int, atoms: list):
        """Resolve a cell known to hold ``n`` zeros into atoms."""
        if n == 0:
            return
        diam = math.hypot(rect.width, rect.height)
        start = rect.center
        if rect.y_min < self.y_newton < rect.y_max and rect.height > 1e-6:
            start = complex(start.real, self.y_newton)
        z, ok = _newton_refine(self.p, self.dp, start, n, self.tol,
                               escape=4.0 * diam + 1e-3)
        if ok and rect.contains(z):
            if n == 1:
                atoms.append((z, 1, False))
                return
            tight = self._tight_mass(z, n, rect)
            if tight == n:
                z, _ = self._polish_multiple(z, n)
                atoms.append((z, n, False))
                return
        def cluster_atom():
            if n >= 2:
                zc, polished = self._polish_multiple(z if ok else rect.center, n)
                atoms.append((zc, n, not (ok or polished)))
            else:
                atoms.append((z if ok else rect.center, n, not ok))

        if diam < max(CLUSTER_TOL, 2.0 * _noise_radius(n)):
            cluster_atom()
            return
        if rect.width >= rect.height:
            c = self._safe_vertical_line(rect.x_min, rect.x_max,
                                         rect.y_min, rect.y_max)
            if c is None:
                # every candidate line runs through the noise zone of a
                # multiple zero; double precision cannot separate further
                cluster_atom()
                return
            child = Rect(rect.x_min, c, rect.y_min, rect.y_max)
            other = Rect(c, rect.x_max, rect.y_min, rect.y_max)
        else:
            c = self._safe_horizontal_line(rect.x_min, rect.x_max,
                                           rect.y_min, rect.y_max)
            if c is None:
                cluster_atom()
                return
            child = Rect(rect.x_min, rect.x_max, rect.y_min, c)
            other = Rect(rect.x_min, rect.x_max, c, rect.y_max)
        n1 = self.winding4(child)
        if not 0 <= n1 <= n:
            raise QuadratureFailureError(
                f"child count {n1} inconsistent with parent {n}")
        self.resolve_cell(child, n1, atoms)
        self.resolve_cell(other, n - n1, atoms)

    # -- driver --------------------------------------------------------------

    def run(self, slab_floor: float):
        n_total = self.slab_count(self.rect.x_min, self.rect.x_max)
        atoms: list[tuple[complex, int, bool]] = []
        stack = [(self.rect.x_min, self.rect.x_max, n_total)]
        while stack:
            a, b, n = stack.pop()
            if n == 0:
                continue
            if n == 1 or (b - a) <= slab_floor:
                self.resolve_cell(Rect(a, b, self.rect.y_min, self.rect.y_max),
                                  n, atoms)
                continue
            c = self._safe_vertical_line(a, b, self.rect.y_min, self.rect.y_max)
            if c is None:
                self.resolve_cell(Rect(a, b, self.rect.y_min, self.rect.y_max),
                                  n, atoms)
                continue
            self._split_horizontals(a, b, c)
            n_left = self.slab_count(a, c)
            if not 0 <= n_left <= n:
                raise QuadratureFailureError(
                    f"slab count {n_left} inconsistent with parent {n}")
            stack.append((a, c, n_left))
            stack.append((c, b, n - n_left))
        return n_total, atoms


def count_zeros(p: ExpPolynomial, rect: Rect) -> int:
    """Number of zeros of ``p`` in ``rect``, counted with multiplicity.

    Raises
    ------
    BoundaryProximityError
        If sampled |p| on the boundary falls below the safety threshold;
        the caller should perturb the rectangle.
    QuadratureFailureError
        If the winding number refuses to settle near an integer.
    """
    if p.n_terms == 0:
        raise EmptyPolynomialError("zero function")
    if p.n_terms == 1:
        return 0
    if not _boundary_ok(p, rect):
        raise BoundaryProximityError(
            "|p| too small on the rectangle boundary; perturb the rectangle")
    search = _Search(p, rect, tol=1e-12,
                     y_zero_band=(rect.y_min, rect.y_max))
    return search.winding4(rect)


def _zero_band(p: ExpPolynomial, rect: Rect) -> tuple[float, float]:
    try:
        strip = zero_strip_estimate(p)
    except ZeroFreeError:
        return rect.y_min, rect.y_max
    lo = max(rect.y_min, strip.alpha)
    hi = min(rect.y_max, strip.beta)
    if lo >= hi:
        return rect.y_min, rect.y_max
    return lo, hi


def find_zeros_report(p: ExpPolynomial, rect: Rect, tol: float = 1e-12, *,
                      allow_jitter: bool = True, seed: int = _DEFAULT_SEED):
    """Locate all zeros of ``p`` in ``rect``; returns (measure, diagnostics).

    Each atom's mass is the zero's multiplicity (always a winding number).
    Diagnostics report |p| residuals at the refined locations, any coarse
    atoms (Newton fallback to a cell center) and the exit status.
    """
    if p.n_terms == 0:
        raise EmptyPolynomialError("zero function")
    rng = np.random.default_rng(seed)
    if p.n_terms == 1:
        return AtomicMeasure(()), {"count": 0, "max_residual": 0.0,
                                   "residual_bound": 0.0, "coarse": [],
                                   "exit_status": 0, "rect_used": rect}
    work = rect
    for attempt in range(MAX_BOUNDARY_TRIES + 1):
        if _boundary_ok(p, work):
            break
        if not allow_jitter:
            raise BoundaryProximityError(
                "|p| too small on the rectangle boundary")
        dx = rng.uniform(0.2, 1.0) * JITTER_FRACTION * work.width
        dy = rng.uniform(0.2, 1.0) * JITTER_FRACTION * work.height
        work = Rect(work.x_min - dx, work.x_max + dx,
                    work.y_min - dy, work.y_max + dy)
    else:
        raise BoundaryProximityError(
            "no safe rectangle boundary found after jitter retries")

    band = _zero_band(p, work)
    slab_floor = max(0.75 * (band[1] - band[0]), 8.0 * CLUSTER_TOL)
    search = _Search(p, work, tol, band)
    n_total, raw = search.run(slab_floor)

    raw.sort(key=lambda t: (t[0].real, t[0].imag))
    merged: list[list] = []
    for z, m, coarse in raw:
        if merged and abs(z - merged[-1][0]) < CLUSTER_TOL:
            merged[-1][1] += m
            merged[-1][2] = merged[-1][2] or coarse
        else:
            merged.append([z, m, coarse])

    mass = sum(m for _, m, _ in merged)
    if mass != n_total:
        raise QuadratureFailureError(
            f"mass accounting mismatch: atoms {mass} vs count {n_total}")

    residuals = [abs(p.evaluate(z)) for z, _, _ in merged]
    scales = [float(_term_scale(p, np.array([z]))[0]) for z, _, _ in merged]
    coarse_atoms = [z for z, _, c in merged if c]
    diagnostics = {
        "count": n_total,
        "max_residual": max(residuals, default=0.0),
        "residual_bound": 1e-8 * max(scales, default=1.0),
        "coarse": coarse_atoms,
        "exit_status": 1 if coarse_atoms else 0,
        "rect_used": work,
    }
    measure = AtomicMeasure.from_atoms((z, m) for z, m, _ in merged)
    return measure, diagnostics


def find_zeros(p: ExpPolynomial, rect: Rect, tol: float = 1e-12, *,
               allow_jitter: bool = True, seed: int = _DEFAULT_SEED) -> AtomicMeasure:
    """Zero measure of ``p`` on ``rect``: atoms at zeros, masses = multiplicities."""
    measure, _ = find_zeros_report(p, rect, tol, allow_jitter=allow_jitter,
                                   seed=seed)
    return measure


def zeros_to_csv(measure: AtomicMeasure) -> str:
    """CSV export: header x,y,multiplicity, 17 significant digits."""
    lines = ["x,y,multiplicity"]
    for loc, m in measure.atoms:
        lines.append(f"{loc.real:.17g},{loc.imag:.17g},{int(round(m.real if isinstance(m, complex) else m))}")
    return "\n".join(lines) + "\n"
