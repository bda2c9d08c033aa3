import math

import numpy as np
import pytest

from midpole import (
    Rectangle,
    RetardedQuasipolynomial,
    apriori_root_radius,
    count_roots,
    count_roots_in_strip,
    find_roots,
    spectral_abscissa,
    synthesize,
    verify_dominance,
    wynn_root_sides,
)
from midpole.errors import InvalidParameters

# Frozen spectrum of the unit-delay double-root-at-zero system on
# [-8, 2] x [-30, 30]: the placed double root plus four conjugate pairs.
# Derived once from the subdivision root finder and cross-checked against
# Newton refinement at tol 1e-12; locations good to ~1e-9.
FROZEN_SIMPLE_ROOTS = [
    complex(-2.088843015613044, 7.461489285654254),
    complex(-2.664068142429071, 13.87905600274681),
    complex(-3.026296955077878, 20.223834997330446),
    complex(-3.291678340289413, 26.543238507370212),
]


def _example_qp():
    return synthesize(1, 1.0, 0.0).quasipolynomial()


def test_rectangle_basics():
    r = Rectangle(-2.0, 4.0, -3.0, 3.0)
    assert r.width == 6.0
    assert r.height == 6.0
    assert r.center == 1.0 + 0.0j
    assert r.contains(0.0)
    assert not r.contains(5.0)
    assert r.dilated(0.5).contains(4.2)
    with pytest.raises(InvalidParameters):
        Rectangle(2.0, -2.0, 0.0, 1.0)


def test_find_roots_example_spectrum():
    qp = _example_qp()
    report = find_roots(qp, Rectangle(-8.0, 2.0, -30.0, 30.0))
    assert report.total_count == 10
    by_mult = sorted(report.roots, key=lambda r: -r.multiplicity)
    double = by_mult[0]
    assert double.multiplicity == 2
    assert abs(double.location) < 1e-4  # noise-limited for a double root
    simple = sorted(
        (r for r in report.roots if r.multiplicity == 1),
        key=lambda r: (abs(r.location.imag), r.location.imag),
    )
    assert len(simple) == 8
    for got, want in zip(simple[::2], FROZEN_SIMPLE_ROOTS):
        assert abs(got.location - want.conjugate()) < 1e-8
    for got, want in zip(simple[1::2], FROZEN_SIMPLE_ROOTS):
        assert abs(got.location - want) < 1e-8
    # residuals are evaluations at the reported locations
    for r in report.roots:
        assert r.residual <= 1e-10
    assert report.strip_bound.contains(report.total_count)


def test_count_roots_matches_find_roots():
    qp = _example_qp()
    rect = Rectangle(-8.0, 2.0, -30.0, 30.0)
    assert count_roots(qp, rect) == 10


def test_count_additivity():
    # splitting a rectangle leaves the total count unchanged
    qp = synthesize(2, 1.0, -1.0).quasipolynomial()
    rect = Rectangle(-6.0, 1.0, -25.0, 25.0)
    whole = count_roots(qp, rect, deflate=(-1.0, 4))
    mid = 0.4 * rect.re_min + 0.6 * rect.re_max
    left = count_roots(qp, Rectangle(rect.re_min, mid, rect.im_min, rect.im_max), deflate=(-1.0, 4))
    right = count_roots(qp, Rectangle(mid, rect.re_max, rect.im_min, rect.im_max), deflate=(-1.0, 4))
    assert whole == left + right


def test_multiple_root_multiplicity_detected():
    for n in (1, 2, 3):
        s0 = -0.8
        qp = synthesize(n, 1.2, s0).quasipolynomial()
        pad = 0.6
        report = find_roots(qp, Rectangle(s0 - pad, s0 + pad, -pad, pad))
        assert report.total_count == 2 * n
        assert max(r.multiplicity for r in report.roots) == 2 * n


def test_verify_dominance_placed_system():
    qp = synthesize(2, 0.5, -5.2).quasipolynomial()
    report = verify_dominance(qp, -5.2, 40.0 * math.pi / 0.5)
    assert bool(report)
    assert report.count_right == 0


def test_verify_dominance_detects_right_root():
    # an unstable plant with no delayed part has its poles at +/-1; the
    # region right of s0 = -2 must contain the root at +1
    qp = RetardedQuasipolynomial(n=2, tau=1.0, a=[-1.0, 0.0], alpha=[1e-12, 0.0])
    with pytest.raises(InvalidParameters):
        verify_dominance(qp, -2.0, 10.0)  # s0 is not a root at all
    cnt = count_roots(qp, Rectangle(0.5, 1.5, -0.5, 0.5))
    assert cnt == 1


def test_strip_count_within_polya_szego():
    rng = np.random.default_rng(5)
    for _ in range(10):
        n = int(rng.integers(1, 5))
        tau = float(rng.uniform(0.1, 3.0))
        s0 = float(rng.uniform(-5.0, 5.0))
        qp = synthesize(n, tau, s0).quasipolynomial()
        a = float(rng.uniform(-40.0, 35.0))
        b = a + float(rng.uniform(0.5, 30.0))
        cnt = count_roots_in_strip(qp, a, b, deflate=(s0, 2 * n))
        assert qp.polya_szego_bound(a, b).contains(cnt)


def test_degenerate_strip_contains_placed_root():
    qp = synthesize(2, 1.0, -1.5).quasipolynomial()
    assert count_roots_in_strip(qp, 0.0, 0.0, deflate=(-1.5, 4)) >= 4


def test_apriori_radius_bounds_found_roots():
    qp = _example_qp()
    report = find_roots(qp, Rectangle(-8.0, 2.0, -30.0, 30.0))
    R = apriori_root_radius(qp, -8.0)
    for r in report.roots:
        assert abs(r.location) <= R


def test_spectral_abscissa_example():
    qp = _example_qp()
    got = spectral_abscissa(qp, [Rectangle(-8.0, 2.0, -30.0, 30.0)])
    assert abs(got) < 1e-4  # dominant double root sits at the origin


def test_normalized_roots_satisfy_half_plane_sides():
    # nonzero roots of the normalized placement lie strictly right of the
    # placed root after the change of variables z = tau (s - s0); for the
    # unit-delay, s0 = 0 family they must satisfy Re z > 0 as roots of
    # M(n, 2n+1, .) up to reflection z -> -z of the found spectrum
    qp = _example_qp()
    report = find_roots(qp, Rectangle(-8.0, 2.0, -30.0, 30.0))
    nonzero = [-r.location for r in report.roots if abs(r.location) > 1e-3]
    out = wynn_root_sides(1.0, nonzero)
    assert out["all_on_correct_side"]


def test_far_left_rectangle_counts_without_overflow():
    # exp(-tau * re) overflows floats at re < -709/tau; counting must survive
    qp = synthesize(2, 2.5, -1.0).quasipolynomial()
    cnt = count_roots(qp, Rectangle(-2000.0, -1500.0, -1.0, 1.0))
    assert cnt == 0


def test_roots_report_serialization():
    qp = _example_qp()
    report = find_roots(qp, Rectangle(-3.0, 2.0, -10.0, 10.0))
    d = report.to_json_dict()
    assert d["total_count"] == report.total_count
    assert len(d["roots"]) == len(report.roots)
    csv_text = report.to_csv()
    lines = csv_text.strip().split("\n")
    assert lines[0] == "re,im,multiplicity,residual"
    assert len(lines) == 1 + len(report.roots)
