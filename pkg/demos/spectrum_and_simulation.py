"""Tie the spectrum to the time response.

The dominant root fixes the asymptotic decay of every solution: a trace
of the closed loop should die off like t^(2n-1) exp(s0 t), so the fitted
log slope over a late window must approach s0. We run the bundled
second order scenario open loop and closed loop and compare fitted
decay rates against the spectral abscissa of each system.
"""

import numpy as np

import midpole as mp

open_spec, closed_spec = mp.build_scenario(
    "second_order_velocity_delay", t_end=28.0, dt=0.02
)

open_spec = mp.SimulationSpec(
    qp=open_spec.qp, history=open_spec.history,
    t_end=5.0, dt=0.02, rk_dt=open_spec.rk_dt,
)

open_trace = mp.simulate(open_spec)
closed_trace = mp.simulate(closed_spec)

open_rate = mp.fit_decay_rate(open_trace, (1.0, 4.0))
closed_rate = mp.fit_decay_rate(closed_trace, (18.0, 26.0))

print("open loop   fitted decay rate = %+.4f" % open_rate)
print("closed loop fitted decay rate = %+.4f" % closed_rate)

# Cross-check against the spectrum itself.
tau = closed_spec.qp.tau
s0 = mp.dominant_root_from_coeff(closed_spec.qp.n, tau, closed_spec.qp.a[-1])
print("placed dominant root          = %+.4f" % s0)

abscissa = mp.spectral_abscissa(
    open_spec.qp, [mp.Rectangle(-10.0, 1.0, -60.0, 60.0)]
)
print("open loop spectral abscissa   = %+.4f" % abscissa)

# The closed loop trace also shows the polynomial-times-exponential
# shape: the local slope of log|y| drifts down toward s0 as t grows.
t = closed_trace.times
y = np.abs(closed_trace.y)
mask = (y > 0) & (t > 1.0)
slope = np.gradient(np.log(y[mask]), t[mask])
for probe in (4.0, 10.0, 20.0, 26.0):
    j = np.searchsorted(t[mask], probe)
    print("local log slope near t = %4.1f : %+.3f" % (probe, slope[j]))
print("(drifts toward s0 = %+.3f as the polynomial factor flattens)" % s0)
