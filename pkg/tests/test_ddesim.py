import math

import numpy as np
import pytest
from scipy.linalg import expm

from midpole import (
    RetardedQuasipolynomial,
    SCENARIO_NAMES,
    SimulationSpec,
    SimulationTrace,
    build_scenario,
    fit_decay_rate,
    simulate,
    synthesize,
)
from midpole.errors import (
    InsufficientData,
    InvalidParameters,
    StepNotDividingDelay,
    UnknownScenario,
)


def _first_order_analytic(t, tau):
    """Exact solution of y' = -y(t - tau), y = 1 for t <= 0, by the method
    of steps: on [k tau, (k+1) tau] the solution is a degree-k polynomial
    accumulated interval by interval."""
    if t <= 0:
        return 1.0
    k = int(t // tau)
    # y(t) = sum_{j=0}^{k+?} (-1)^j (t - (j-1) tau)^j / j! truncated to j <= k+1
    total = 0.0
    for j in range(0, k + 2):
        arg = t - (j - 1) * tau
        if arg < 0:
            break
        total += (-1.0) ** j * arg**j / math.factorial(j)
    return total


def test_first_order_delay_matches_analytic():
    tau = 1.0
    qp = RetardedQuasipolynomial(n=1, tau=tau, a=[0.0], alpha=[1.0])
    spec = SimulationSpec(qp=qp, history=([1.0],), t_end=5.0, dt=0.25, rk_dt=tau / 100)
    trace = simulate(spec)
    for t, y in zip(trace.times, trace.y):
        assert y == pytest.approx(_first_order_analytic(float(t), tau), abs=1e-10)


def test_delay_free_matches_matrix_exponential():
    qp = RetardedQuasipolynomial(n=3, tau=0.4, a=[6.0, 11.0, 6.0], alpha=[0.0, 0.0, 0.0])
    A = np.zeros((3, 3))
    A[0, 1] = 1.0
    A[1, 2] = 1.0
    A[2, :] = [-6.0, -11.0, -6.0]
    x0 = np.array([1.0, -0.5, 0.25])
    spec = SimulationSpec(
        qp=qp, history=([1.0], [-0.5], [0.25]), t_end=3.0, dt=0.1, rk_dt=0.4 / 100
    )
    trace = simulate(spec)
    for j, t in enumerate(trace.times):
        exact = expm(A * float(t)) @ x0
        assert np.max(np.abs(trace.y_full[:, j] - exact)) < 1e-8


def test_rk4_order():
    qp = synthesize(2, 0.5, -3.0).quasipolynomial()
    hist = ((1.0,), (0.0,))
    ref = simulate(SimulationSpec(qp=qp, history=hist, t_end=2.0, dt=0.5, rk_dt=0.5 / 800))
    errs = []
    for m in (25, 50, 100):
        tr = simulate(SimulationSpec(qp=qp, history=hist, t_end=2.0, dt=0.5, rk_dt=0.5 / m))
        errs.append(np.max(np.abs(tr.y - ref.y)))
    for i in range(2):
        factor = errs[i] / errs[i + 1]
        assert 12.0 <= factor <= 20.0, factor


def test_polynomial_history_honored():
    qp = RetardedQuasipolynomial(n=1, tau=1.0, a=[0.0], alpha=[1.0])
    spec = SimulationSpec(qp=qp, history=([2.0, -3.0],), t_end=0.5, dt=0.05, rk_dt=1.0 / 40)
    # y'(t) = -y(t-1) = -(2 - 3(t-1)) = -5 + 3t on [0, 1/2]
    trace = simulate(spec)
    for t, y in zip(trace.times, trace.y):
        t = float(t)
        assert y == pytest.approx(2.0 - 5.0 * t + 1.5 * t * t, abs=1e-12)


def test_blow_up_truncates_with_flag():
    qp = synthesize(1, 1.0, 8.0).quasipolynomial()  # placed far right, unstable
    spec = SimulationSpec(qp=qp, history=([1.0],), t_end=30.0, dt=0.1, rk_dt=1.0 / 50)
    trace = simulate(spec)
    assert trace.truncated
    assert trace.times[-1] < 30.0
    assert np.all(np.isfinite(trace.y))


def test_spec_validation():
    qp = RetardedQuasipolynomial(n=2, tau=1.0, a=[1.0, 1.0], alpha=[0.5, 0.5])
    with pytest.raises(InvalidParameters):
        SimulationSpec(qp=qp, history=([1.0],), t_end=1.0, dt=0.1, rk_dt=0.05)
    with pytest.raises(InvalidParameters):
        SimulationSpec(qp=qp, history=([1.0], [0.0]), t_end=-1.0, dt=0.1, rk_dt=0.05)
    with pytest.raises(InvalidParameters):
        SimulationSpec(qp=qp, history=([1.0], [0.0]), t_end=1.0, dt=0.01, rk_dt=0.05)
    with pytest.raises(StepNotDividingDelay):
        SimulationSpec(qp=qp, history=([1.0], [0.0]), t_end=1.0, dt=0.1, rk_dt=0.03)
    with pytest.raises(StepNotDividingDelay):
        # divides the delay but with fewer than 20 steps per delay interval
        SimulationSpec(qp=qp, history=([1.0], [0.0]), t_end=1.0, dt=0.5, rk_dt=0.1)


def test_spec_json_round_trip():
    qp = RetardedQuasipolynomial(n=2, tau=1.0, a=[1.0, 1.0], alpha=[0.5, 0.5])
    spec = SimulationSpec(qp=qp, history=([1.0], [0.0, 2.0]), t_end=1.0, dt=0.1, rk_dt=0.05)
    back = SimulationSpec.from_json_dict(spec.to_json_dict())
    assert back.qp.to_json_dict() == spec.qp.to_json_dict()
    assert all(np.array_equal(h1, h2) for h1, h2 in zip(back.history, spec.history))
    assert (back.t_end, back.dt, back.rk_dt) == (spec.t_end, spec.dt, spec.rk_dt)


def test_fit_decay_rate_pure_exponential():
    times = np.linspace(0.0, 5.0, 501)
    y = np.exp(-1.7 * times)
    trace = SimulationTrace(times=times, y=y, y_full=y[None, :])
    assert fit_decay_rate(trace, (0.0, 5.0)) == pytest.approx(-1.7, rel=1e-10)


def test_fit_decay_rate_oscillatory_envelope():
    times = np.linspace(0.0, 20.0, 4001)
    y = np.exp(-0.5 * times) * np.cos(3.0 * times)
    trace = SimulationTrace(times=times, y=y, y_full=y[None, :])
    assert fit_decay_rate(trace, (1.0, 19.0)) == pytest.approx(-0.5, rel=1e-3)


def test_fit_decay_rate_validation():
    times = np.linspace(0.0, 1.0, 11)
    y = np.exp(-times)
    trace = SimulationTrace(times=times, y=y, y_full=y[None, :])
    with pytest.raises(InsufficientData):
        fit_decay_rate(trace, (0.0, 2.0))  # outside the trace
    with pytest.raises(InsufficientData):
        fit_decay_rate(trace, (0.0, 1.0))  # fewer than 50 samples


def test_scenarios_build_and_run():
    for name in SCENARIO_NAMES:
        open_spec, closed_spec = build_scenario(name, t_end=1.0, dt=0.05)
        assert open_spec.t_end == closed_spec.t_end == 1.0
        tr = simulate(closed_spec)
        assert not tr.truncated
        assert tr.y_full.shape[0] == closed_spec.qp.n
    with pytest.raises(UnknownScenario):
        build_scenario("nope")


def test_trace_csv_header_and_shape():
    qp = RetardedQuasipolynomial(n=2, tau=1.0, a=[1.0, 1.0], alpha=[0.5, 0.5])
    spec = SimulationSpec(qp=qp, history=([1.0], [0.0]), t_end=0.5, dt=0.1, rk_dt=0.05)
    trace = simulate(spec)
    lines = trace.to_csv().strip().split("\n")
    assert lines[0] == "t,y0,y1"
    assert len(lines) == 1 + len(trace.times)
    # values round-trip exactly through repr
    t0, y00, y10 = lines[1].split(",")
    assert float(t0) == trace.times[0]
    assert float(y00) == trace.y_full[0, 0]
    assert float(y10) == trace.y_full[1, 0]
