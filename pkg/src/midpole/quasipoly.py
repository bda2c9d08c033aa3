"""Single-delay retarded quasipolynomials.

A retarded quasipolynomial of order n with delay tau is the entire function

    D(s) = s^n + sum_k a_k s^k + exp(-s*tau) * sum_k alpha_k s^k,

with k running over 0..n-1.  This module provides evaluation, analytic
derivatives, the degree, root-count bounds on horizontal strips, and the
polynomial-times-exponential integral used by the hypergeometric
factorization.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidStrip, OrderTooLarge

__all__ = [
    "RetardedQuasipolynomial",
    "NormalizedQuasipolynomial",
    "StripCountBound",
    "poly_exp_integral",
]


def _as_float_vector(x, n: int, name: str) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (n,):
        raise ValueError(f"{name} must have length {n}, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must be finite")
    return v


def _horner(coeffs: np.ndarray, s: complex) -> complex:
    """Evaluate sum_k coeffs[k] s^k (coeffs ascending)."""
    acc = 0j
    for c in coeffs[::-1]:
        acc = acc * s + c
    return acc


@dataclass(frozen=True)
class RetardedQuasipolynomial:
    """Characteristic function of an order-n single-delay retarded equation.

    Parameters
    ----------
    n : int
        Equation order (leading coefficient of s^n is implicitly 1).
    tau : float
        Delay, > 0.
    a : array_like of length n
        Non-delayed coefficients a_0..a_{n-1}, ascending power.
    alpha : array_like of length n
        Delayed coefficients alpha_0..alpha_{n-1}, ascending power.
    """

    n: int
    tau: float
    a: np.ndarray
    alpha: np.ndarray
    degree: int = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if not (self.tau > 0):
            raise ValueError("tau must be > 0")
        object.__setattr__(self, "a", _as_float_vector(self.a, self.n, "a"))
        object.__setattr__(
            self, "alpha", _as_float_vector(self.alpha, self.n, "alpha")
        )
        self.a.setflags(write=False)
        self.alpha.setflags(write=False)
        nz = np.nonzero(self.alpha)[0]
        if nz.size == 0:
            deg = self.n
        else:
            deg = 1 + self.n + int(nz[-1])
        object.__setattr__(self, "degree", deg)

    def eval(self, s: complex) -> complex:
        """D(s), via Horner recurrences for both polynomial parts."""
        s = complex(s)
        p = s ** self.n + _horner(self.a, s)
        q = _horner(self.alpha, s)
        return p + cmath.exp(-s * self.tau) * q

    def __call__(self, s: complex) -> complex:
        return self.eval(s)

    def eval_derivative(self, s: complex, order: int = 0) -> complex:
        """Analytic k-th derivative D^(k)(s).

        Uses the Leibniz expansion of the delayed part,
        D^(k) = P^(k) + exp(-s tau) sum_j C(k,j) (-tau)^(k-j) Q^(j),
        never finite differences.  order must be <= 4n.
        """
        if order < 0:
            raise ValueError("order must be >= 0")
        if order > 4 * self.n:
            raise OrderTooLarge(
                f"derivative order {order} exceeds cap 4n = {4 * self.n}"
            )
        s = complex(s)
        pk = _poly_derivative_value(self._p_coeffs(), s, order)
        qsum = 0j
        for j in range(order + 1):
            qj = _poly_derivative_value(self.alpha, s, j)
            qsum += math.comb(order, j) * (-self.tau) ** (order - j) * qj
        return pk + cmath.exp(-s * self.tau) * qsum

    def _p_coeffs(self) -> np.ndarray:
        p = np.zeros(self.n + 1)
        p[: self.n] = self.a
        p[self.n] = 1.0
        return p

    def polya_szego_bound(self, alpha_im: float, beta_im: float) -> "StripCountBound":
        """Two-sided root-count bound on the strip alpha_im <= Im s <= beta_im.

        The exponent spread is tau (exponents 0 and -tau), so the
        multiplicity-weighted count m satisfies
        tau*(beta-alpha)/(2 pi) - degree <= m <= tau*(beta-alpha)/(2 pi) + degree.
        """
        if alpha_im > beta_im:
            raise InvalidStrip(f"alpha_im={alpha_im} > beta_im={beta_im}")
        lam = self.tau
        center = lam * (beta_im - alpha_im) / (2.0 * math.pi)
        d = self.degree
        return StripCountBound(
            alpha_im=alpha_im,
            beta_im=beta_im,
            lower=center - d,
            upper=center + d,
            lambda_delta=lam,
        )

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "tau": self.tau,
            "a": list(self.a),
            "alpha": list(self.alpha),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "RetardedQuasipolynomial":
        return cls(n=int(d["n"]), tau=float(d["tau"]), a=d["a"], alpha=d["alpha"])

    @classmethod
    def from_json(cls, text: str) -> "RetardedQuasipolynomial":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class NormalizedQuasipolynomial:
    """Unit-delay form Dt(z) = z^n + sum b_k z^k + exp(-z) sum beta_k z^k."""

    n: int
    b: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        object.__setattr__(self, "b", _as_float_vector(self.b, self.n, "b"))
        object.__setattr__(self, "beta", _as_float_vector(self.beta, self.n, "beta"))
        self.b.setflags(write=False)
        self.beta.setflags(write=False)

    def as_quasipolynomial(self) -> RetardedQuasipolynomial:
        return RetardedQuasipolynomial(n=self.n, tau=1.0, a=self.b, alpha=self.beta)

    def eval(self, z: complex) -> complex:
        return self.as_quasipolynomial().eval(z)

    # Lemma-style polynomial accessors: P^(k)(0) = k! b_k, Q^(k)(0) = k! beta_k.
    def p_derivative_at_zero(self, k: int) -> float:
        if k == self.n:
            return float(math.factorial(self.n))
        return math.factorial(k) * float(self.b[k]) if k < self.n else 0.0

    def q_derivative_at_zero(self, k: int) -> float:
        return math.factorial(k) * float(self.beta[k]) if k < self.n else 0.0


@dataclass(frozen=True)
class StripCountBound:
    """Root-count band for a horizontal strip of the complex plane."""

    alpha_im: float
    beta_im: float
    lower: float
    upper: float
    lambda_delta: float

    def __post_init__(self):
        if self.lambda_delta < 0:
            raise ValueError("lambda_delta must be >= 0")
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")

    def contains(self, count: int) -> bool:
        return self.lower <= count <= self.upper


def _poly_derivative_value(coeffs, s: complex, order: int) -> complex:
    """order-th derivative of sum_k coeffs[k] x^k at s, by Horner on the
    shifted coefficient vector."""
    coeffs = np.asarray(coeffs, dtype=float)
    d = len(coeffs) - 1
    if order > d:
        return 0j
    shifted = np.empty(d - order + 1)
    for k in range(order, d + 1):
        shifted[k - order] = coeffs[k] * math.perm(k, order)
    return _horner(shifted, complex(s))


# Switch to the termwise-integrated Taylor series below this |z|; the closed
# form loses roughly k*log10(1/|z|) digits per term there.
_SMALL_Z_SWITCH = 1e-2
_TAYLOR_TERMS = 30


def poly_exp_integral(p, z: complex) -> complex:
    """integral_0^1 p(t) exp(-z t) dt for a polynomial p (ascending coeffs).

    For |z| above a small threshold this uses the closed form
    sum_k (p^(k)(0) - p^(k)(1) e^{-z}) / z^{k+1}; below it, the Taylor series
    of exp(-z t) integrated termwise.
    """
    p = np.asarray(p, dtype=float)
    z = complex(z)
    d = len(p) - 1
    if abs(z) < _SMALL_Z_SWITCH:
        # integral t^k exp(-zt) = sum_m (-z)^m / (m! (k+m+1))
        total = 0j
        zm = 1.0 + 0j
        for m in range(_TAYLOR_TERMS):
            moment = sum(p[k] / (k + m + 1) for k in range(d + 1))
            total += zm * moment
            zm *= -z / (m + 1)
        return total
    ez = cmath.exp(-z)
    total = 0j
    zp = z
    for k in range(d + 1):
        pk0 = _poly_derivative_value(p, 0.0, k)
        pk1 = _poly_derivative_value(p, 1.0, k)
        total += (pk0 - pk1 * ez) / zp
        zp *= z
    return total
