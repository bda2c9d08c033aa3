"""Root location for quasipolynomials via the argument principle.

Counting integrates the phase of D(s) around rectangle boundaries with
adaptive sampling (every step rotates by less than pi/2, refining locally
otherwise), so the winding number is read off without aliasing.  Location
uses recursive quadrisection down to a coarse cell, then modified Newton
iteration s <- s - m D/D' for multiple roots, with per-root multiplicity
re-certified by a small-square count.

Dominance of a placed root is checked on a finite rectangle to the right of
it; that is a numerical witness ("verified within region"), not a proof.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BoundaryRoot,
    InvalidParameters,
    NewtonDivergence,
    NoPhaseConvergence,
)
from .quasipoly import RetardedQuasipolynomial, StripCountBound, _horner
from .synthesis import certify_multiplicity, dominant_root_from_coeff, multiplicity_scale

__all__ = [
    "Rectangle",
    "RootRecord",
    "SpectrumReport",
    "DominanceReport",
    "count_roots",
    "find_roots",
    "verify_dominance",
    "spectral_abscissa",
    "count_roots_in_strip",
    "apriori_root_radius",
]

_HALF_PI = math.pi / 2.0
_COARSE_CELL = 0.1
_DILATION = 1e-6
_MAX_DILATION_RETRIES = 3


@dataclass(frozen=True)
class Rectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise InvalidParameters(f"degenerate rectangle {self}")

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    @property
    def diameter(self) -> float:
        return math.hypot(self.width, self.height)

    @property
    def center(self) -> complex:
        return complex(
            0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max)
        )

    def corners(self) -> list[complex]:
        return [
            complex(self.re_min, self.im_min),
            complex(self.re_max, self.im_min),
            complex(self.re_max, self.im_max),
            complex(self.re_min, self.im_max),
        ]

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (
            self.re_min - pad <= z.real <= self.re_max + pad
            and self.im_min - pad <= z.imag <= self.im_max + pad
        )

    def dilated(self, eps: float) -> "Rectangle":
        return Rectangle(
            self.re_min - eps, self.re_max + eps, self.im_min - eps, self.im_max + eps
        )

    def to_json_dict(self) -> dict:
        return {
            "re_min": self.re_min,
            "re_max": self.re_max,
            "im_min": self.im_min,
            "im_max": self.im_max,
        }


@dataclass(frozen=True)
class RootRecord:
    location: complex
    multiplicity: int
    residual: float
    newton_iters: int
    # attainable location accuracy: multiple roots are noise-limited to far
    # worse than tol in double precision, and dedup must know that
    reach: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "re": self.location.real,
            "im": self.location.imag,
            "multiplicity": self.multiplicity,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class SpectrumReport:
    rectangle: Rectangle
    roots: list[RootRecord]
    total_count: int
    strip_bound: StripCountBound

    def to_json_dict(self) -> dict:
        return {
            "rectangle": self.rectangle.to_json_dict(),
            "total_count": self.total_count,
            "roots": [r.to_json_dict() for r in self.roots],
            "strip_bound": {
                "lower": self.strip_bound.lower,
                "upper": self.strip_bound.upper,
            },
        }

    def to_csv(self) -> str:
        lines = ["re,im,multiplicity,residual"]
        for r in self.roots:
            lines.append(
                f"{r.location.real!r},{r.location.imag!r},{r.multiplicity},{r.residual!r}"
            )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DominanceReport:
    """Truthy iff no root was counted to the right of the placed root."""

    dominant: bool
    rectangle: Rectangle
    count_right: int
    expected_density_per_unit_im: float
    note: str = "verified within region"

    def __bool__(self) -> bool:
        return self.dominant


# ----------------------------------------------------------------------------
# Winding-number machinery


def _phase_eval(qp):
    """Evaluator equal to D(s) up to a positive real factor, usable on
    contours however far left, where the exponential term overflows floats.

    Writing D = P + e^{w} e^{-i tau Im s} Q with w = -tau Re s, the value
    returned is e^{c-w} P + e^{c} e^{-i tau Im s} Q for the continuously
    varying exponent c(s) = min(w, 700 - log(1+|Q|)).  The scale e^{c-w} is
    a positive real, so the phase is that of D exactly; c is continuous in
    s, so the scaled magnitude is continuous along any contour; and when w
    is below the cap the formula reduces to D itself, bit for bit."""

    def ev(s: complex) -> complex:
        s = complex(s)
        w = -qp.tau * s.real
        p = s**qp.n + _horner(qp.a, s)
        q = _horner(qp.alpha, s)
        c = min(w, 700.0 - math.log1p(abs(q)))
        return math.exp(c - w) * p + cmath.exp(complex(c, -qp.tau * s.imag)) * q

    return ev


def _edge_phase(qp, z0: complex, z1: complex, min_samples: int, ev=None) -> float:
    """Total phase increment of D along the segment z0 -> z1.

    Consecutive samples must differ in argument by < pi/2; intervals failing
    that are bisected.  An exact zero or an interval that cannot be resolved
    signals a root on (or hugging) the contour.
    """
    ev = ev or _phase_eval(qp)
    ts = np.linspace(0.0, 1.0, max(2, min_samples))
    pts = [(t, ev(z0 + t * (z1 - z0))) for t in ts]
    for _, v in pts:
        if v == 0:
            raise BoundaryRoot("zero of D sampled on the contour")

    total = 0.0
    min_dt = 2.0 ** -46
    stack = [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)][::-1]
    while stack:
        (t0, v0), (t1, v1) = stack.pop()
        dphi = cmath.phase(v1 / v0)
        # refine on fast rotation or a strong magnitude swing (near-root sign)
        ratio = abs(v1) / abs(v0)
        if abs(dphi) < _HALF_PI and 0.2 < ratio < 5.0:
            total += dphi
            continue
        if t1 - t0 < min_dt:
            raise BoundaryRoot("phase refinement exhausted on the contour")
        tm = 0.5 * (t0 + t1)
        vm = ev(z0 + tm * (z1 - z0))
        if vm == 0:
            raise BoundaryRoot("zero of D sampled on the contour")
        stack.append(((tm, vm), (t1, v1)))
        stack.append(((t0, v0), (tm, vm)))
    return total


def _min_edge_samples(qp, z0: complex, z1: complex) -> int:
    # phase of exp(-tau s) advances tau * |dIm| along the edge; sample so the
    # exponential alone rotates < 1 rad per initial interval
    rot = qp.tau * abs(z1.imag - z0.imag)
    return max(17, 4 * qp.n, int(rot / 1.0) + 2)


def _winding(qp, rect: Rectangle, ev=None) -> int:
    corners = rect.corners()
    total = 0.0
    for i in range(4):
        z0, z1 = corners[i], corners[(i + 1) % 4]
        total += _edge_phase(qp, z0, z1, _min_edge_samples(qp, z0, z1), ev)
    w = total / (2.0 * math.pi)
    nearest = round(w)
    if abs(w - nearest) > 0.25:
        raise NoPhaseConvergence(
            f"winding number {w} not within 0.25 of an integer on {rect}"
        )
    return int(nearest)


def count_roots(
    qp: RetardedQuasipolynomial, rect: Rectangle, _eval=None, deflate=None
) -> int:
    """Multiplicity-weighted root count inside rect via the argument
    principle.  A root detected on the boundary dilates the rectangle by
    1e-6 (scaled) and retries, up to 3 times.

    deflate=(s0, m) counts with the known multiplicity-m root at s0 divided
    out, then adds m back if s0 lies in rect.  Use it whenever the contour
    may pass close to that root: its phase spike is un-sampleable.
    """
    if deflate is not None:
        s0, m = deflate
        ev = _near_root_evaluator(qp, s0, m, deflated=True)
        inside = m if rect.contains(complex(s0)) else 0
        return count_roots(qp, rect, _eval=ev) + inside
    eps = _DILATION * (1.0 + rect.diameter)
    attempt = rect
    for retry in range(_MAX_DILATION_RETRIES + 1):
        try:
            return _winding(qp, attempt, _eval)
        except BoundaryRoot:
            if retry == _MAX_DILATION_RETRIES:
                raise
            attempt = attempt.dilated(eps)
    raise AssertionError("unreachable")


# ----------------------------------------------------------------------------
# Root location

_SPLIT_FRACTIONS = (0.5, 0.65, 0.35, 0.575, 0.425)


def _eval_noise_floor(qp, s: complex) -> float:
    """Absolute rounding-noise level of qp.eval near s: eps times the
    largest term magnitude entering the evaluation."""
    r = abs(s)
    powers = r ** np.arange(qp.n)
    mag = r**qp.n + float(np.abs(qp.a) @ powers)
    mag += math.exp(min(700.0, -qp.tau * s.real)) * float(np.abs(qp.alpha) @ powers)
    return 64.0 * np.finfo(float).eps * max(1.0, mag)


def _newton(qp, seed: complex, m: int, tol: float, max_iter: int = 80):
    """Modified Newton s <- s - m D/D' with a step-size stopping rule
    (the residual is flat at multiple roots).

    Near a multiple root the iteration hits the rounding-noise floor of the
    evaluation and then wanders, so the best iterate seen is kept and
    returned once the steps stop contracting.  Returns (root, iterations,
    resolution) where resolution estimates the attainable location error.
    """
    s = complex(seed)
    best: complex | None = None
    best_step = math.inf
    worse_streak = 0
    for it in range(1, max_iter + 1):
        try:
            d = qp.eval(s)
            dp = qp.eval_derivative(s, 1)
        except OverflowError:
            return best, it, best_step
        if dp == 0:
            s += tol
            continue
        step = m * d / dp
        a = abs(step)
        if not math.isfinite(a):
            return best, it, best_step
        s = s - step
        if a <= tol:
            return s, it, a
        if a < best_step:
            best, best_step, worse_streak = s, a, 0
        else:
            worse_streak += 1
            # steps bouncing at the noise floor: the best iterate is as
            # good as double precision allows for this multiplicity
            if worse_streak >= 3:
                return best, it, best_step
        if abs(s - seed) > 10.0 * (1.0 + abs(seed)):
            return best, it, best_step
    return best, max_iter, best_step


def _certified_multiplicity(qp, root: complex, tol: float, resolution: float) -> int:
    """Winding count on a small square around a candidate root.

    The square must be large enough that |D| on its boundary clears the
    evaluation noise floor, otherwise the phase there is rounding garbage;
    probe and grow until it does (or a size cap is hit)."""
    noise = _eval_noise_floor(qp, root)
    half = max(3.0 * tol, 10.0 * resolution, 1e-13 * (1.0 + abs(root)))
    while half < 0.05:
        probes = [
            root + half * cmath.exp(1j * (2.0 * math.pi * j / 16.0 + 0.1))
            for j in range(16)
        ]
        if min(abs(qp.eval(p)) for p in probes) > 100.0 * noise:
            break
        half *= 2.0
    square = Rectangle(
        root.real - half, root.real + half, root.imag - half, root.imag + half
    )
    return count_roots(qp, square), half


def _resolve(qp, rect: Rectangle, cnt: int, tol: float, records: list, counter=None) -> None:
    if counter is None:
        counter = lambda c: _winding(qp, c)
    if cnt == 0:
        return
    size = max(rect.width, rect.height)
    if size < _COARSE_CELL:
        seeds = [rect.center] + [
            rect.center + 0.25 * (c - rect.center) for c in rect.corners()
        ]
        for seed in seeds:
            root, iters, res = _newton(qp, seed, cnt, tol)
            if root is None or not rect.contains(root, pad=max(10.0 * tol, 10.0 * res)):
                continue
            try:
                k, half = _certified_multiplicity(qp, root, tol, res)
            except (BoundaryRoot, NoPhaseConvergence):
                continue
            if k >= cnt:
                # k > cnt means the root sits on a shared leaf edge; the
                # neighbors converge to the same point and dedup unifies them
                records.append(
                    RootRecord(
                        location=root,
                        multiplicity=k,
                        residual=abs(qp.eval(root)),
                        newton_iters=iters,
                        reach=max(tol, half),
                    )
                )
                return
        if size < 100.0 * tol:
            raise NewtonDivergence(
                f"could not resolve leaf {rect} carrying count {cnt}"
            )
    # subdivide, shifting the split lines if one lands on a root
    last_err: Exception | None = None
    for frac in _SPLIT_FRACTIONS:
        rm = rect.re_min + frac * rect.width
        im = rect.im_min + frac * rect.height
        children = [
            Rectangle(rect.re_min, rm, rect.im_min, im),
            Rectangle(rm, rect.re_max, rect.im_min, im),
            Rectangle(rect.re_min, rm, im, rect.im_max),
            Rectangle(rm, rect.re_max, im, rect.im_max),
        ]
        try:
            counts = [counter(c) for c in children]
        except (BoundaryRoot, NoPhaseConvergence) as err:
            last_err = err
            continue
        if sum(counts) != cnt:
            last_err = NoPhaseConvergence(
                f"child counts {counts} do not sum to {cnt} on {rect}"
            )
            continue
        for child, ccount in zip(children, counts):
            _resolve(qp, child, ccount, tol, records, counter)
        return
    raise last_err if last_err is not None else NewtonDivergence(str(rect))


def _dedupe(records: list[RootRecord], tol: float) -> list[RootRecord]:
    merged: list[RootRecord] = []
    for rec in sorted(records, key=lambda r: (r.location.real, r.location.imag)):
        for i, kept in enumerate(merged):
            radius = max(10.0 * tol, kept.reach + rec.reach)
            if abs(kept.location - rec.location) <= radius:
                if rec.residual < kept.residual:
                    merged[i] = rec
                break
        else:
            merged.append(rec)
    return merged


def find_roots(
    qp: RetardedQuasipolynomial, rect: Rectangle, tol: float = 1e-9, deflate=None
) -> SpectrumReport:
    """Locate all roots in rect with multiplicities.

    deflate=(s0, m) divides a known multiplicity-m root at s0 out of every
    contour integral, exactly as in count_roots: subdivision lines passing
    near a multiple root otherwise see phase spikes of up to 2 pi m per
    sample interval, which no finite sampling can distinguish from calm
    phase.  Location and certification still run on the raw function.
    When no deflation is given, the one multiple root this coefficient
    family can carry sits at -a_{n-1}/n - n/tau; if the function indeed
    vanishes there to order >= 2 it is deflated automatically.

    Recursive quadrisection discards zero-count cells; cells below the coarse
    size seed modified Newton iterations.  The final bookkeeping must
    balance: the deduplicated multiplicities sum to the rectangle count.
    """
    if deflate is None:
        s0_c = dominant_root_from_coeff(qp.n, qp.tau, float(qp.a[qp.n - 1]))
        m_c = certify_multiplicity(qp, s0_c)
        if m_c >= 2:
            deflate = (s0_c, m_c)
    total = count_roots(qp, rect, deflate=deflate)
    counter = None
    if deflate is not None:
        s0_d, m_d = deflate
        ev_d = _near_root_evaluator(qp, complex(s0_d), m_d, deflated=True)

        def counter(c):
            return _winding(qp, c, ev_d) + (m_d if c.contains(complex(s0_d)) else 0)

    records: list[RootRecord] = []
    _resolve(qp, rect, total, tol, records, counter)
    roots = _dedupe(records, tol)
    if sum(r.multiplicity for r in roots) != total:
        raise NewtonDivergence(
            f"located multiplicities {[r.multiplicity for r in roots]} "
            f"do not sum to the contour count {total}"
        )
    bound = qp.polya_szego_bound(rect.im_min, rect.im_max)
    return SpectrumReport(
        rectangle=rect, roots=roots, total_count=total, strip_bound=bound
    )


# ----------------------------------------------------------------------------
# Dominance and spectral abscissa


def _near_root_evaluator(qp, s0: complex, m: int, radius: float = 0.1, deflated: bool = False):
    """Evaluator for D that switches to the Taylor tail of certified order m
    around s0 when closer than radius.

    Direct evaluation of D within the noise radius of a multiplicity-m root
    returns pure rounding noise (|D| there is far below eps times the term
    magnitudes); the tail sum_{k>=m} D^(k)(s0)/k! h^k is cancellation-free.

    With deflated=True the evaluator returns D(s)/(s-s0)^m instead, which
    is smooth and nonzero at s0.  A contour passing within microns of a
    multiplicity-m root sees an m*2pi phase spike that adaptive sampling
    can alias away; the deflated function has no spike at all.
    """
    s0 = complex(s0)
    kmax = 4 * qp.n
    coeffs = [
        qp.eval_derivative(s0, k) / math.factorial(k) for k in range(m, kmax + 1)
    ]
    far_eval = _phase_eval(qp)

    def ev(s: complex) -> complex:
        h = s - s0
        if abs(h) >= radius:
            v = far_eval(s)
            return v / h**m if deflated else v
        tail = 0j
        for c in coeffs[::-1]:
            tail = tail * h + c
        return tail if deflated else tail * h**m

    return ev


def verify_dominance(
    qp: RetardedQuasipolynomial, s0: float, im_extent: float
) -> DominanceReport:
    """Numerical witness of strict dominance: zero roots counted in the
    rectangle just right of s0, width 100/tau, height 2*im_extent."""
    m = certify_multiplicity(qp, s0, rel_tol=1e-6)
    if m < 1:
        raise InvalidParameters(f"s0={s0} is not a certified root")
    margin = 1e-6 * (1.0 + abs(s0))
    rect = Rectangle(
        s0 + margin, s0 + 100.0 / qp.tau, -abs(im_extent), abs(im_extent)
    )
    # the left edge passes within margin of the placed multiple root; count
    # with that root divided out so its phase spike cannot contaminate
    cnt = count_roots(qp, rect, deflate=(s0, m))
    return DominanceReport(
        dominant=cnt == 0,
        rectangle=rect,
        count_right=cnt,
        expected_density_per_unit_im=qp.tau / (2.0 * math.pi),
    )


def spectral_abscissa(qp: RetardedQuasipolynomial, search) -> float:
    """Max real part over roots found in the given rectangles."""
    best = None
    for rect in search:
        report = find_roots(qp, rect)
        for rec in report.roots:
            if best is None or rec.location.real > best:
                best = rec.location.real
    if best is None:
        raise InvalidParameters("no roots found in the search rectangles")
    return best


def apriori_root_radius(qp: RetardedQuasipolynomial, re_floor: float) -> float:
    """Radius R such that any root with Re s >= re_floor has |s| <= R.

    There |e^{-s tau}| <= e^{-tau re_floor}, so the root is also a root of a
    polynomial with coefficient magnitudes c_k = |a_k| + e^{-tau re_floor}
    |alpha_k|; apply the Fujiwara bound 2 max_k (c_k / (2 if k=0))^(1/(n-k)).
    """
    decay = math.exp(min(700.0, -qp.tau * re_floor))
    n = qp.n
    best = 0.0
    for k in range(n):
        c = abs(float(qp.a[k])) + decay * abs(float(qp.alpha[k]))
        if k == 0:
            c /= 2.0
        if c > 0:
            best = max(best, c ** (1.0 / (n - k)))
    return max(1.0, 2.0 * best)


def count_roots_in_strip(
    qp: RetardedQuasipolynomial, alpha_im: float, beta_im: float, deflate=None
) -> int:
    """Total multiplicity-weighted root count in the horizontal strip
    alpha_im <= Im s <= beta_im (strips of zero height are widened by a hair
    so the placed root is interior).

    The right boundary comes from the a-priori inclusion radius; the left
    boundary is pushed out by doubling until two consecutive bands are empty.
    """
    if alpha_im == beta_im:
        alpha_im -= 1e-9
        beta_im += 1e-9
    r_right = apriori_root_radius(qp, 0.0) + 1.0
    left = -max(r_right, 8.0)
    total = count_roots(qp, Rectangle(left, r_right, alpha_im, beta_im), deflate=deflate)
    empty_streak = 0
    while empty_streak < 2:
        new_left = 2.0 * left
        band = count_roots(qp, Rectangle(new_left, left, alpha_im, beta_im), deflate=deflate)
        total += band
        empty_streak = empty_streak + 1 if band == 0 else 0
        left = new_left
        if left < -1e6:
            break
    return total
