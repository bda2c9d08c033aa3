import math

import numpy as np
import pytest
from scipy.special import hyp1f1

from midpole import (
    KummerParams,
    factored_delta,
    kummer_integral,
    kummer_m,
    normalized_mid_eval,
    normalized_mid_quasipolynomial,
    wynn_root_sides,
)
from midpole.errors import InvalidParameters, SideViolation


def test_kummer_against_scipy_real_axis():
    for a, b in ((1.0, 3.0), (2.0, 5.0), (3.0, 7.0), (0.5, 2.5)):
        params = KummerParams(a=a, b=b)
        for x in np.linspace(-30.0, 30.0, 25):
            got = kummer_m(params, x)
            want = hyp1f1(a, b, x)
            assert got.imag == 0.0
            assert got.real == pytest.approx(want, rel=1e-11, abs=1e-300)


def test_kummer_against_integral_complex():
    rng = np.random.default_rng(3)
    for _ in range(30):
        a = float(rng.uniform(0.5, 4.0))
        b = a + float(rng.uniform(0.5, 4.0))
        z = complex(rng.uniform(-15, 15), rng.uniform(-15, 15))
        series = kummer_m(KummerParams(a=a, b=b), z)
        integral = kummer_integral(a, b, z)
        # the quadrature oracle itself loses digits near its endpoint
        # singularity for a close to 0, hence the looser band
        assert abs(series - integral) <= 1e-7 * max(1.0, abs(integral))


def test_kummer_reflection_identity():
    # M(a, b, z) = e^z M(b-a, b, -z), checked across the evaluator's branch cut
    params = KummerParams(a=2.0, b=5.0)
    reflected = KummerParams(a=3.0, b=5.0)
    for z in (1.5 + 2.0j, -1.5 + 2.0j, -8.0, 8.0, -0.001 + 4.0j):
        lhs = kummer_m(params, z)
        rhs = np.exp(z) * kummer_m(reflected, -z)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_kummer_params_validation():
    with pytest.raises(InvalidParameters):
        KummerParams(a=1.0, b=0.0)
    with pytest.raises(InvalidParameters):
        KummerParams(a=1.0, b=-2.0)
    KummerParams(a=1.0, b=-2.5)  # non-integer negative b is fine
    with pytest.raises(InvalidParameters):
        KummerParams(a=1.0, b=3.0, rel_tol=1e-3)
    with pytest.raises(InvalidParameters):
        kummer_integral(3.0, 2.0, 1.0)


def test_factorization_pointwise():
    # the delayed quasipolynomial equals its Kummer factorization everywhere
    rng = np.random.default_rng(4)
    for n in range(1, 6):
        for _ in range(20):
            z = complex(rng.uniform(-20, 20), rng.uniform(-20, 20))
            lhs = normalized_mid_eval(n, z)
            rhs = factored_delta(n, z)
            denom = max(abs(lhs), abs(rhs), 1e-300)
            assert abs(lhs - rhs) / denom <= 1e-8, (n, z)


def test_factored_delta_vanishes_to_order_2n():
    # leading Taylor coefficient at the origin: (n!/(2n)!) M(n, 2n+1, 0) = n!/(2n)!
    for n in range(1, 5):
        h = 1e-3
        lead = factored_delta(n, h) / h ** (2 * n)
        assert abs(lead) == pytest.approx(
            math.factorial(n) / math.factorial(2 * n), rel=1e-2
        )


def test_normalized_mid_eval_matches_direct_away_from_origin():
    for n in range(1, 5):
        qp = normalized_mid_quasipolynomial(n).as_quasipolynomial()
        for z in (3.0 + 1.0j, -4.0, 2.5j, 5.0 - 5.0j):
            direct = qp.eval(z)
            assert abs(normalized_mid_eval(n, z) - direct) <= 1e-9 * max(
                1.0, abs(direct)
            )


def test_normalized_mid_eval_smooth_at_taylor_radius():
    # the Taylor-tail branch and the direct branch meet at |z| = 2 without a
    # jump: the second difference across the seam stays at curvature size
    h = 1e-4
    for n in (1, 3):
        f = [normalized_mid_eval(n, 2.0 + k * h) for k in (-1, 0, 1)]
        scale = max(abs(v) for v in f)
        assert abs(f[0] - 2 * f[1] + f[2]) <= 1e-6 * scale


def test_wynn_sides():
    report = wynn_root_sides(2.0, [1.0 + 3.0j, 0.5 - 1.0j])
    assert report["all_on_correct_side"]
    assert report["roots_checked"] == 2
    with pytest.raises(SideViolation):
        wynn_root_sides(2.0, [-1.0 + 3.0j])
    report = wynn_root_sides(2.0, [-1.0 + 3.0j], shifted=True)
    assert report["all_on_correct_side"]
    with pytest.raises(SideViolation):
        wynn_root_sides(2.0, [1.0], shifted=True)
    with pytest.raises(InvalidParameters):
        wynn_root_sides(-1.0, [])
