"""Kummer's confluent hypergeometric function M(a, b, z) and the
factorization of the maximal-multiplicity unit-delay quasipolynomial,

    Dt(z) = z^(2n) * (n!/(2n)!) * M(n, 2n+1, -z).

The series is the primary evaluator; the classical integral representation
(valid for b > a > 0) serves as an independent oracle.  Wynn's half-plane
theorem on the roots of M(a, 2a+1, .) / M(a+1, 2a+1, .) is exposed as a test
oracle for root-location output.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameters, NoConvergence, SideViolation
from .synthesis import normalized_coefficients
from .quasipoly import NormalizedQuasipolynomial

__all__ = [
    "KummerParams",
    "kummer_m",
    "kummer_integral",
    "factored_delta",
    "normalized_mid_quasipolynomial",
    "wynn_root_sides",
]


@dataclass(frozen=True)
class KummerParams:
    a: float
    b: float
    max_terms: int = 5000
    rel_tol: float = 1e-14

    def __post_init__(self):
        if self.b <= 0 and float(self.b).is_integer():
            raise InvalidParameters("b must not be zero or a negative integer")
        if not (0 < self.rel_tol <= 1e-6):
            raise InvalidParameters("rel_tol must lie in (0, 1e-6]")
        if self.max_terms < 1:
            raise InvalidParameters("max_terms must be positive")


def _kummer_series(a: float, b: float, z: complex, max_terms: int, rel_tol: float):
    """Partial sum of the defining series; also returns the largest term
    magnitude so the caller can judge how many digits cancelled."""
    term = 1.0 + 0j
    total = term
    peak = 1.0
    small_streak = 0
    for k in range(max_terms):
        term = term * (a + k) / ((b + k) * (k + 1)) * z
        total += term
        peak = max(peak, abs(term))
        if abs(term) <= rel_tol * abs(total):
            small_streak += 1
            # three consecutive small terms, so alternating-term false
            # convergence at negative real z cannot slip through
            if small_streak >= 3:
                return total, peak
        else:
            small_streak = 0
    raise NoConvergence(
        f"Kummer series did not converge within {max_terms} terms at z={z}"
    )


def kummer_m(params: KummerParams, z: complex) -> complex:
    """M(a, b, z) by the defining power series.

    For Re z < 0 the series alternates and cancels catastrophically, so the
    Kummer reflection M(a,b,z) = e^z M(b-a, b, -z) is applied first; the
    reflected series has positive terms and full relative accuracy.

    For large |Im z| near the imaginary axis the terms still peak at about
    e^|z| while the sum stays O(1); when more than ~6 digits cancel and the
    parameters admit it, the integral representation takes over.
    """
    z = complex(z)
    if z.real < 0:
        a, b, zs, prefactor = params.b - params.a, params.b, -z, cmath.exp(z)
    else:
        a, b, zs, prefactor = params.a, params.b, z, 1.0 + 0j
    total, peak = _kummer_series(a, b, zs, params.max_terms, params.rel_tol)
    if peak > 1e6 * abs(total) and b > a > 0:
        return prefactor * kummer_integral(a, b, zs)
    return prefactor * total


# 20-point Gauss-Legendre nodes/weights on [0, 1]
_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def _gl_panel(f, lo: float, hi: float) -> complex:
    width = hi - lo
    return width * sum(w * f(lo + x * width) for x, w in zip(_GL_X, _GL_W))


def _adaptive_gl(f, lo: float, hi: float, tol: float, depth: int = 0) -> complex:
    whole = _gl_panel(f, lo, hi)
    mid = 0.5 * (lo + hi)
    split = _gl_panel(f, lo, mid) + _gl_panel(f, mid, hi)
    if abs(split - whole) <= tol * max(1.0, abs(split)) or depth >= 40:
        return split
    half_tol = tol / 1.4
    return _adaptive_gl(f, lo, mid, half_tol, depth + 1) + _adaptive_gl(
        f, mid, hi, half_tol, depth + 1
    )


def kummer_integral(a: float, b: float, z: complex) -> complex:
    """M(a, b, z) via the Beta-weighted integral representation,

        Gamma(b)/(Gamma(a) Gamma(b-a)) * int_0^1 e^{zt} t^(a-1) (1-t)^(b-a-1) dt,

    valid for b > a > 0.  Adaptive Gauss-Legendre quadrature; this is the
    oracle for kummer_m on real parameters.
    """
    if not (b > a > 0):
        raise InvalidParameters(f"requires b > a > 0, got a={a}, b={b}")
    z = complex(z)
    log_prefactor = math.lgamma(b) - math.lgamma(a) - math.lgamma(b - a)

    def integrand(t: float) -> complex:
        # endpoint powers may be integrably singular; GL nodes avoid 0 and 1
        return cmath.exp(z * t + (a - 1) * math.log(t) + (b - a - 1) * math.log1p(-t))

    integral = _adaptive_gl(integrand, 0.0, 1.0, 1e-12)
    return math.exp(log_prefactor) * integral


def factored_delta(n: int, z: complex) -> complex:
    """z^(2n) * (n!/(2n)!) * M(n, 2n+1, -z); equals the unit-delay
    maximal-multiplicity quasipolynomial pointwise."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    z = complex(z)
    ratio = math.factorial(n) / math.factorial(2 * n)
    m = kummer_m(KummerParams(a=float(n), b=float(2 * n + 1)), -z)
    return z ** (2 * n) * ratio * m


def normalized_mid_quasipolynomial(n: int) -> NormalizedQuasipolynomial:
    """The unit-delay quasipolynomial with a multiplicity-2n root at 0."""
    b, beta = normalized_coefficients(n)
    return NormalizedQuasipolynomial(n=n, b=b, beta=beta)


_TAYLOR_RADIUS = 2.0
_TAYLOR_EXTRA = 60


def _mid_taylor_coeffs(n: int) -> list[float]:
    """Taylor coefficients c_k (orders 2n .. 2n+extra) of the normalized
    maximal-multiplicity quasipolynomial at the origin, in exact integer
    arithmetic: for k > n only the delayed part contributes, so
    D^(k)(0) = sum_j C(k,j) (-1)^(k-j) j! beta_j with integer beta_j."""
    from fractions import Fraction

    sign = (-1) ** (n - 1)
    beta_int = [
        sign * math.factorial(2 * n - j - 1) // (math.factorial(j) * math.factorial(n - j - 1))
        for j in range(n)
    ]
    coeffs = []
    for k in range(2 * n, 2 * n + _TAYLOR_EXTRA + 1):
        dk = sum(
            math.comb(k, j) * (-1) ** (k - j) * math.factorial(j) * beta_int[j]
            for j in range(n)
        )
        coeffs.append(float(Fraction(dk, math.factorial(k))))
    return coeffs


def normalized_mid_eval(n: int, z: complex) -> complex:
    """The normalized maximal-multiplicity quasipolynomial at z, accurately.

    Direct evaluation near the 2n-fold root at the origin is dominated by
    rounding noise (the polynomial and delayed parts cancel to far below
    eps times their own size), so inside a fixed radius the exact Taylor
    tail starting at order 2n is used instead.  This path never touches the
    Kummer series, so it remains an independent check of factored_delta.
    """
    z = complex(z)
    if abs(z) >= _TAYLOR_RADIUS:
        return normalized_mid_quasipolynomial(n).eval(z)
    acc = 0j
    for c in _mid_taylor_coeffs(n)[::-1]:
        acc = acc * z + c
    return acc * z ** (2 * n)


def wynn_root_sides(a: float, candidate_roots, shifted: bool = False) -> dict:
    """Half-plane check for candidate roots of M(a, 2a+1, .) (Re z > 0
    required) or, with shifted=True, of M(a+1, 2a+1, .) (Re z < 0 required).

    Test oracle for root-finder output, not a root finder.  Raises
    SideViolation listing the offending root.
    """
    if not (a > -0.5):
        raise InvalidParameters(f"requires a > -1/2, got a={a}")
    checked = []
    for z in candidate_roots:
        z = complex(z)
        ok = z.real < 0 if shifted else z.real > 0
        if not ok:
            side = "Re < 0" if shifted else "Re > 0"
            raise SideViolation(f"root {z} violates required side {side}")
        checked.append(z)
    return {
        "a": a,
        "family": "M(a+1, 2a+1, .)" if shifted else "M(a, 2a+1, .)",
        "roots_checked": len(checked),
        "all_on_correct_side": True,
    }
