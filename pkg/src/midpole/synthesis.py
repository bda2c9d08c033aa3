"""Maximal-multiplicity pole placement for single-delay retarded equations.

Given an order n, a delay tau and a target real root s0, there is exactly one
coefficient vector pair (a, alpha) for which s0 is a root of multiplicity 2n
of the characteristic quasipolynomial, and that root is then strictly
dominant.  This module computes those coefficients in closed form, provides
the normalization / denormalization maps linking (a, alpha) with the
unit-delay coefficients (b, beta), a brute-force linear-system oracle for the
normalized coefficients, a numerical multiplicity certifier, and exhaustive
integer checks of the binomial identities the closed forms rest on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    IdentityViolation,
    NonpositiveDelay,
    OrderTooLarge,
    SingularSystem,
)
from .quasipoly import NormalizedQuasipolynomial, RetardedQuasipolynomial

__all__ = [
    "SynthesisResult",
    "LinearSystemOracle",
    "normalized_coefficients",
    "oracle_normalized_coefficients",
    "build_linear_system",
    "synthesize",
    "normalize",
    "denormalize",
    "certify_multiplicity",
    "dominant_root_from_coeff",
    "binomial_suite",
]

# Factorials up to 170 fit in double; the closed forms use (2n-1)! so cap at 85.
_MAX_ORDER = 85
# The dense oracle stays exact (Fraction arithmetic) but is only meant for
# cross-checking small orders.
_MAX_ORACLE_ORDER = 12


@dataclass(frozen=True)
class SynthesisResult:
    """Coefficients placing a real root of multiplicity 2n, plus verdicts."""

    n: int
    tau: float
    s0: float
    a: np.ndarray
    alpha: np.ndarray
    b: np.ndarray
    beta: np.ndarray
    stable: bool

    def quasipolynomial(self) -> RetardedQuasipolynomial:
        return RetardedQuasipolynomial(n=self.n, tau=self.tau, a=self.a, alpha=self.alpha)

    def normalized(self) -> NormalizedQuasipolynomial:
        return NormalizedQuasipolynomial(n=self.n, b=self.b, beta=self.beta)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "tau": self.tau,
            "s0": self.s0,
            "a": list(self.a),
            "alpha": list(self.alpha),
            "b": list(self.b),
            "beta": list(self.beta),
            "stable": self.stable,
        }


@dataclass(frozen=True)
class LinearSystemOracle:
    """Explicit 2n x 2n linear system whose solution pins the normalized
    coefficients: p_k = P^(k)(0), q_k = Q^(k)(0)."""

    n: int
    A: np.ndarray  # lower triangular, A[j,k] = (-1)^(j-k) C(j,k)
    B: np.ndarray  # B = A C, det B = (-1)^n
    C: np.ndarray  # C[j,k] = (-1)^(n-k+j) C(n, k-j)
    f: np.ndarray  # right-hand side (-n!, 0, ..., 0)
    p: np.ndarray
    q: np.ndarray


def _check_order(n: int, cap: int = _MAX_ORDER) -> None:
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n > cap:
        raise OrderTooLarge(f"n={n} exceeds supported cap {cap}")


def normalized_coefficients(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form unit-delay coefficients making 0 a root of multiplicity 2n.

    b_k = (-1)^(n-k) (n!/k!) C(2n-k-1, n-1),
    beta_k = (-1)^(n-1) (2n-k-1)! / (k! (n-k-1)!),
    computed with exact integer binomials and converted at the last step.
    """
    _check_order(n)
    b = np.empty(n)
    beta = np.empty(n)
    nfact = math.factorial(n)
    for k in range(n):
        # n!/k! is exact integer division for k <= n
        bk = (-1) ** (n - k) * (nfact // math.factorial(k)) * math.comb(2 * n - k - 1, n - 1)
        b[k] = float(bk)
        beta_k = (
            (-1) ** (n - 1)
            * math.factorial(2 * n - k - 1)
            // (math.factorial(k) * math.factorial(n - k - 1))
        )
        beta[k] = float(beta_k)
    return b, beta


def build_linear_system(n: int) -> LinearSystemOracle:
    """Assemble and solve the explicit 2n x 2n multiplicity system.

    The unknowns are P^(k)(0) and Q^(k)(0); the equations state that all
    derivatives of the unit-delay quasipolynomial vanish at 0 through order
    2n-1.  Solved exactly by partial-pivoting elimination over rationals.
    """
    _check_order(n, _MAX_ORACLE_ORDER)
    A = np.zeros((n, n))
    C = np.zeros((n, n))
    for j in range(n):
        for k in range(n):
            if k <= j:
                A[j, k] = (-1) ** (j - k) * math.comb(j, k)
            C[j, k] = (-1) ** (n - k + j) * math.comb(n, k - j) if 0 <= k - j <= n else 0.0
    B = A @ C
    f = np.zeros(n)
    f[0] = -float(math.factorial(n))

    # Full 2n x 2n system: rows 0..n-1 are p_k + sum_j (-1)^(k-j) C(k,j) q_j = 0,
    # rows n..2n-1 are sum_j (-1)^(k-j) C(k,j) q_j = f_{k-n}.
    m = 2 * n
    M = [[Fraction(0) for _ in range(m)] for _ in range(m)]
    rhs = [Fraction(0) for _ in range(m)]
    for k in range(n):
        M[k][k] = Fraction(1)
        for j in range(k + 1):
            M[k][n + j] = Fraction((-1) ** (k - j) * math.comb(k, j))
    for k in range(n, 2 * n):
        for j in range(n):
            M[k][n + j] = Fraction((-1) ** (k - j) * math.comb(k, j))
        rhs[k] = Fraction(-math.factorial(n)) if k == n else Fraction(0)

    sol = _solve_exact(M, rhs)
    p = np.array([float(x) for x in sol[:n]])
    q = np.array([float(x) for x in sol[n:]])
    return LinearSystemOracle(n=n, A=A, B=B, C=C, f=f, p=p, q=q)


def _solve_exact(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination with partial pivoting in exact rational arithmetic."""
    m = len(M)
    M = [row[:] for row in M]
    rhs = rhs[:]
    for col in range(m):
        piv = max(range(col, m), key=lambda r: abs(M[r][col]))
        if M[piv][col] == 0:
            raise SingularSystem("multiplicity system is singular (must not happen)")
        M[col], M[piv] = M[piv], M[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / M[col][col]
        for r in range(col + 1, m):
            factor = M[r][col] * inv
            if factor == 0:
                continue
            for c in range(col, m):
                M[r][c] -= factor * M[col][c]
            rhs[r] -= factor * rhs[col]
    sol = [Fraction(0)] * m
    for r in range(m - 1, -1, -1):
        acc = rhs[r]
        for c in range(r + 1, m):
            acc -= M[r][c] * sol[c]
        sol[r] = acc / M[r][r]
    return sol


def oracle_normalized_coefficients(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Brute-force (b, beta) from the explicit linear system; the independent
    oracle for normalized_coefficients."""
    sys = build_linear_system(n)
    b = np.array([sys.p[k] / math.factorial(k) for k in range(n)])
    beta = np.array([sys.q[k] / math.factorial(k) for k in range(n)])
    return b, beta


def synthesize(n: int, tau: float, s0: float) -> SynthesisResult:
    """Unique coefficients making s0 a root of multiplicity 2n.

    a_k = C(n,k)(-s0)^(n-k)
          + (-1)^(n-k) n! sum_{j=k}^{n-1} C(j,k) C(2n-j-1,n-1) s0^(j-k)/(j! tau^(n-j)),
    alpha_k = (-1)^(n-1) e^{s0 tau}
          sum_{j=k}^{n-1} (-1)^(j-k) (2n-j-1)!/(k!(j-k)!(n-j-1)!) s0^(j-k)/tau^(n-j).
    """
    _check_order(n)
    if not (tau > 0):
        raise NonpositiveDelay(f"tau must be > 0, got {tau}")
    s0 = float(s0)
    tau = float(tau)
    a = np.empty(n)
    alpha = np.empty(n)
    es0t = math.exp(s0 * tau)
    for k in range(n):
        asum = 0.0
        s0p = 1.0  # s0^(j-k), accumulated from j = k upward
        for j in range(k, n):
            asum += (
                math.comb(j, k)
                * math.comb(2 * n - j - 1, n - 1)
                * s0p
                / (math.factorial(j) * tau ** (n - j))
            )
            s0p *= s0
        a[k] = math.comb(n, k) * (-s0) ** (n - k) + (-1) ** (n - k) * math.factorial(n) * asum

        alsum = 0.0
        s0p = 1.0
        for j in range(k, n):
            alsum += (
                (-1) ** (j - k)
                * math.factorial(2 * n - j - 1)
                / (math.factorial(k) * math.factorial(j - k) * math.factorial(n - j - 1))
                * s0p
                / tau ** (n - j)
            )
            s0p *= s0
        alpha[k] = (-1) ** (n - 1) * es0t * alsum

    # alpha_{n-1} has a single nonzero term, so the degree is always 2n
    assert alpha[n - 1] != 0.0

    b, beta = normalized_coefficients(n)
    stable = s0 < 0
    return SynthesisResult(n=n, tau=tau, s0=s0, a=a, alpha=alpha, b=b, beta=beta, stable=stable)


def normalize(qp: RetardedQuasipolynomial, s0: float) -> NormalizedQuasipolynomial:
    """Change of variables z = tau (s - s0): coefficients of
    Dt(z) = tau^n D(s0 + z/tau)."""
    n, tau = qp.n, qp.tau
    s0 = float(s0)
    b = np.empty(n)
    beta = np.empty(n)
    ems0t = math.exp(-s0 * tau)
    for k in range(n):
        bsum = sum(
            math.comb(j, k) * s0 ** (j - k) * qp.a[j] for j in range(k, n)
        )
        b[k] = math.comb(n, k) * tau ** (n - k) * s0 ** (n - k) + tau ** (n - k) * bsum
        beta[k] = tau ** (n - k) * ems0t * sum(
            math.comb(j, k) * s0 ** (j - k) * qp.alpha[j] for j in range(k, n)
        )
    return NormalizedQuasipolynomial(n=n, b=b, beta=beta)


def denormalize(
    nq: NormalizedQuasipolynomial, tau: float, s0: float
) -> RetardedQuasipolynomial:
    """Inverse of normalize, using the explicit inverse-matrix formula
    (not a numerical solve)."""
    if not (tau > 0):
        raise NonpositiveDelay(f"tau must be > 0, got {tau}")
    n = nq.n
    s0 = float(s0)
    a = np.empty(n)
    alpha = np.empty(n)
    es0t = math.exp(s0 * tau)
    for k in range(n):
        asum = sum(
            (-1) ** (j - k) * math.comb(j, k) * s0 ** (j - k) / tau ** (n - j) * nq.b[j]
            for j in range(k, n)
        )
        a[k] = math.comb(n, k) * (-s0) ** (n - k) + asum
        alpha[k] = es0t * sum(
            (-1) ** (j - k) * math.comb(j, k) * s0 ** (j - k) / tau ** (n - j) * nq.beta[j]
            for j in range(k, n)
        )
    return RetardedQuasipolynomial(n=n, tau=tau, a=a, alpha=alpha)


def multiplicity_scale(qp: RetardedQuasipolynomial, s0: float, k: int) -> float:
    """Affine-invariant magnitude yardstick for |D^(k)(s0)|."""
    coeff_scale = max(1.0, float(np.max(np.abs(qp.a))), float(np.max(np.abs(qp.alpha))))
    return math.factorial(k) * (1.0 + abs(s0)) ** (2 * qp.n - k) * coeff_scale


def certify_multiplicity(
    qp: RetardedQuasipolynomial, s0: float, rel_tol: float = 1e-8
) -> int:
    """Largest m <= 2n with |D^(k)(s0)| <= rel_tol * scale_k for all k < m."""
    if not (0 < rel_tol <= 1e-3):
        raise ValueError("rel_tol must lie in (0, 1e-3]")
    m = 0
    for k in range(2 * qp.n):
        val = abs(qp.eval_derivative(s0, k))
        if val <= rel_tol * multiplicity_scale(qp, s0, k):
            m = k + 1
        else:
            break
    return m


def dominant_root_from_coeff(n: int, tau: float, a_top: float) -> float:
    """Placed root from the top non-delayed coefficient: s0 = -a_top/n - n/tau."""
    if not (tau > 0):
        raise NonpositiveDelay(f"tau must be > 0, got {tau}")
    return -a_top / n - n / tau


# ----------------------------------------------------------------------------
# Binomial identity machinery


def binomial_suite(max_index: int = 30) -> dict:
    """Exhaustively verify the binomial identities behind the closed forms,
    in exact integer arithmetic, for all indices <= max_index.

    Returns a report mapping identity name -> number of index tuples checked.
    Raises IdentityViolation naming the identity and offending indices.
    """
    N = max_index
    report: dict[str, int] = {}

    def fail(name: str, idx: tuple) -> None:
        raise IdentityViolation(f"{name} violated at indices {idx}")

    # Shifting identity: C(k,j)C(l,k) = C(l,j)C(l-j,k-j) = C(l-k+j,j)C(l,l-k+j)
    checks = 0
    for l in range(N + 1):
        for k in range(l + 1):
            for j in range(k + 1):
                lhs = math.comb(k, j) * math.comb(l, k)
                if lhs != math.comb(l, j) * math.comb(l - j, k - j):
                    fail("shifting", (j, k, l))
                if lhs != math.comb(l - k + j, j) * math.comb(l, l - k + j):
                    fail("shifting", (j, k, l))
                checks += 1
    report["shifting"] = checks

    # Alternating Kronecker sum: sum_l (-1)^(l-j) C(l,j)C(k,l) = [j == k]
    checks = 0
    for k in range(N + 1):
        for j in range(k + 1):
            s = sum(
                (-1) ** (l - j) * math.comb(l, j) * math.comb(k, l)
                for l in range(j, k + 1)
            )
            if s != (1 if j == k else 0):
                fail("kronecker_sum", (j, k))
            checks += 1
    report["kronecker_sum"] = checks

    # Binomial matrix inverse: B_N with entries C(i,j) has inverse (-1)^(i-j) C(i,j)
    size = N + 1
    checks = 0
    for i in range(size):
        for j in range(size):
            s = sum(
                (-1) ** (l - j) * math.comb(i, l) * math.comb(l, j)
                for l in range(j, i + 1)
            )
            if s != (1 if i == j else 0):
                fail("binomial_inverse", (i, j))
            checks += 1
    report["binomial_inverse"] = checks

    # Partial alternating row sum: sum_{j<=l} (-1)^j C(k,j) = (-1)^l C(k-1,l)
    checks = 0
    for k in range(1, N + 1):
        for l in range(k + 1):
            s = sum((-1) ** j * math.comb(k, j) for j in range(l + 1))
            if s != (-1) ** l * math.comb(k - 1, l):
                fail("partial_row_sum", (k, l))
            checks += 1
    report["partial_row_sum"] = checks

    # S^n_{j,k} = sum_l (-1)^l C(n+k-j,l)C(n+k-l,n) equals C(j,k) for j <= n
    checks = 0
    for n in range(N + 1):
        for j in range(n + 1):
            for k in range(N + 1):
                s = sum(
                    (-1) ** l * math.comb(n + k - j, l) * math.comb(n + k - l, n)
                    for l in range(k + 1)
                )
                if s != math.comb(j, k):
                    fail("s_sum", (n, j, k))
                checks += 1
    report["s_sum"] = checks

    # Vandermonde-style convolution: C(k,j) = sum_m C(l,m)C(k-l,j-m), l <= k
    checks = 0
    for k in range(N + 1):
        for j in range(N + 1):
            for l in range(k + 1):
                s = sum(
                    math.comb(l, m) * math.comb(k - l, j - m)
                    for m in range(max(0, j - (k - l)), min(l, j) + 1)
                )
                if s != math.comb(k, j):
                    fail("convolution", (j, k, l))
                checks += 1
    report["convolution"] = checks

    return report
