import math

import numpy as np
import pytest

from midpole import (
    binomial_suite,
    build_linear_system,
    certify_multiplicity,
    denormalize,
    dominant_root_from_coeff,
    normalize,
    normalized_coefficients,
    oracle_normalized_coefficients,
    synthesize,
)
from midpole.errors import NonpositiveDelay, OrderTooLarge

# Frozen oracle outputs (exact rational linear solve, converted to float)
# for the smallest orders; regenerate with oracle_normalized_coefficients.
FROZEN_NORMALIZED = {
    1: ([-1.0], [1.0]),
    2: ([6.0, -4.0], [-6.0, -2.0]),
    3: ([-60.0, 36.0, -9.0], [60.0, 24.0, 3.0]),
    4: ([840.0, -480.0, 120.0, -16.0], [-840.0, -360.0, -60.0, -4.0]),
}


def test_normalized_coefficients_frozen_values():
    for n, (b_want, beta_want) in FROZEN_NORMALIZED.items():
        b, beta = normalized_coefficients(n)
        assert list(b) == b_want
        assert list(beta) == beta_want


def test_closed_form_equals_exact_oracle():
    for n in range(1, 13):
        b, beta = normalized_coefficients(n)
        b_o, beta_o = oracle_normalized_coefficients(n)
        assert np.array_equal(b, b_o), n
        assert np.array_equal(beta, beta_o), n


def test_linear_system_determinant_sign():
    # det B = (-1)^n for the product matrix of the explicit system
    for n in range(1, 9):
        sys = build_linear_system(n)
        det = np.linalg.det(sys.B)
        assert det == pytest.approx((-1.0) ** n, rel=1e-9)


def test_oracle_order_cap():
    with pytest.raises(OrderTooLarge):
        build_linear_system(13)
    with pytest.raises(OrderTooLarge):
        normalized_coefficients(86)


def test_synthesize_known_example():
    # second-order delayed-velocity design values, quoted to full precision
    res = synthesize(2, 0.5, -5.2)
    assert res.a[1] == pytest.approx(2.4, abs=1e-14)
    assert res.a[0] == pytest.approx(36.0 - 26.56, rel=1e-12)
    assert res.alpha[1] == pytest.approx(-0.29709431285733551, rel=1e-13)
    assert res.alpha[0] == pytest.approx(-3.3274563040021574, rel=1e-13)
    assert res.stable


def test_synthesized_root_location_identity():
    # s0 = -a_{n-1}/n - n/tau recovers the placed root from the coefficients
    rng = np.random.default_rng(1)
    for _ in range(20):
        n = int(rng.integers(1, 7))
        tau = float(rng.uniform(0.1, 3.0))
        s0 = float(rng.uniform(-5.0, 5.0))
        res = synthesize(n, tau, s0)
        assert dominant_root_from_coeff(n, tau, float(res.a[n - 1])) == pytest.approx(
            s0, rel=1e-10, abs=1e-10
        )


def test_stability_flag_boundary():
    # placed root in the open left half-plane iff s0 < 0
    assert synthesize(2, 1.0, -1e-12).stable
    assert not synthesize(2, 1.0, 0.0).stable
    assert not synthesize(2, 1.0, 0.5).stable


def test_synthesize_normalize_round_trip():
    rng = np.random.default_rng(2)
    for _ in range(30):
        n = int(rng.integers(1, 9))
        tau = float(rng.uniform(0.1, 3.0))
        s0 = float(rng.uniform(-5.0, 5.0))
        res = synthesize(n, tau, s0)
        nq = normalize(res.quasipolynomial(), s0)
        b, beta = normalized_coefficients(n)
        assert np.allclose(nq.b, b, rtol=1e-10, atol=1e-10 * np.max(np.abs(b)))
        assert np.allclose(nq.beta, beta, rtol=1e-10, atol=1e-10 * np.max(np.abs(beta)))
        qp_back = denormalize(nq, tau, s0)
        scale = max(1.0, float(np.max(np.abs(res.a))), float(np.max(np.abs(res.alpha))))
        assert np.allclose(qp_back.a, res.a, rtol=1e-9, atol=1e-9 * scale)
        assert np.allclose(qp_back.alpha, res.alpha, rtol=1e-9, atol=1e-9 * scale)


def test_synthesize_validation():
    with pytest.raises(ValueError):
        synthesize(0, 1.0, 0.0)
    with pytest.raises(NonpositiveDelay):
        synthesize(2, 0.0, 0.0)
    with pytest.raises(NonpositiveDelay):
        synthesize(2, -1.0, 0.0)


def test_certify_multiplicity_exact_and_perturbed():
    res = synthesize(3, 1.5, -2.0)
    qp = res.quasipolynomial()
    assert certify_multiplicity(qp, -2.0) == 6
    # a wrong expansion point is not a root at all
    assert certify_multiplicity(qp, -1.0) == 0
    # a perturbed coefficient breaks maximality
    a = np.array(qp.a)
    a[0] *= 1.0 + 1e-3
    from midpole import RetardedQuasipolynomial

    perturbed = RetardedQuasipolynomial(n=3, tau=1.5, a=a, alpha=qp.alpha)
    assert certify_multiplicity(perturbed, -2.0, rel_tol=1e-12) < 6


def test_certify_multiplicity_rejects_bad_tol():
    qp = synthesize(1, 1.0, 0.0).quasipolynomial()
    with pytest.raises(ValueError):
        certify_multiplicity(qp, 0.0, rel_tol=0.0)
    with pytest.raises(ValueError):
        certify_multiplicity(qp, 0.0, rel_tol=1e-2)


def test_binomial_suite_counts():
    report = binomial_suite(12)
    assert set(report) == {
        "shifting",
        "kronecker_sum",
        "binomial_inverse",
        "partial_row_sum",
        "s_sum",
        "convolution",
    }
    assert all(v > 0 for v in report.values())
