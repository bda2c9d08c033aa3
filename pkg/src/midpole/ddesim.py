"""Time-domain simulation of single-delay retarded equations.

The scalar equation y^(n) + sum a_k y^(k) + sum alpha_k y^(k)(t - tau) = 0
is put in first-order companion form x' = A x + B x(t - tau) and integrated
by the method of steps: classical RK4 with a step that divides the delay
exactly, so every delayed lookup lands inside already-integrated data, read
back through cubic Hermite dense output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    InsufficientData,
    InvalidParameters,
    StepNotDividingDelay,
    UnknownScenario,
)
from .quasipoly import RetardedQuasipolynomial

__all__ = [
    "SimulationSpec",
    "SimulationTrace",
    "simulate",
    "fit_decay_rate",
    "build_scenario",
    "SCENARIO_NAMES",
]

_BLOWUP = 1e12
_MIN_STEPS_PER_DELAY = 20


@dataclass(frozen=True)
class SimulationSpec:
    """Inputs for one deterministic simulation run.

    history holds one ascending-power polynomial coefficient vector per
    state component (y, y', ..., y^(n-1)), evaluated for t <= 0; a constant
    history is a length-1 vector per component.
    """

    qp: RetardedQuasipolynomial
    history: tuple
    t_end: float
    dt: float
    rk_dt: float

    def __post_init__(self):
        if len(self.history) != self.qp.n:
            raise InvalidParameters(
                f"history needs {self.qp.n} components, got {len(self.history)}"
            )
        object.__setattr__(
            self,
            "history",
            tuple(np.asarray(h, dtype=float).ravel() for h in self.history),
        )
        if not (self.t_end > 0):
            raise InvalidParameters("t_end must be > 0")
        if not (self.rk_dt > 0):
            raise InvalidParameters("rk_dt must be > 0")
        if self.dt < self.rk_dt:
            raise InvalidParameters("dt must be >= rk_dt")
        m = self.qp.tau / self.rk_dt
        if abs(m - round(m)) > 1e-9 * max(1.0, m) or round(m) < _MIN_STEPS_PER_DELAY:
            raise StepNotDividingDelay(
                f"rk_dt must equal tau/m for integer m >= {_MIN_STEPS_PER_DELAY}; "
                f"tau/rk_dt = {m}"
            )

    def history_at(self, t: float) -> np.ndarray:
        return np.array([np.polynomial.polynomial.polyval(t, h) for h in self.history])

    def to_json_dict(self) -> dict:
        return {
            "qp": self.qp.to_json_dict(),
            "history": [list(h) for h in self.history],
            "t_end": self.t_end,
            "dt": self.dt,
            "rk_dt": self.rk_dt,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SimulationSpec":
        return cls(
            qp=RetardedQuasipolynomial.from_json_dict(d["qp"]),
            history=tuple(d["history"]),
            t_end=float(d["t_end"]),
            dt=float(d["dt"]),
            rk_dt=float(d["rk_dt"]),
        )


@dataclass(frozen=True)
class SimulationTrace:
    times: np.ndarray
    y: np.ndarray
    y_full: np.ndarray
    truncated: bool = False
    fitted_rate: float | None = None

    def with_rate(self, rate: float) -> "SimulationTrace":
        return replace(self, fitted_rate=rate)

    def to_csv(self) -> str:
        n = self.y_full.shape[0]
        lines = ["t," + ",".join(f"y{k}" for k in range(n))]
        for i, t in enumerate(self.times):
            row = ",".join(repr(float(self.y_full[k, i])) for k in range(n))
            lines.append(f"{float(t)!r},{row}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "times": [float(t) for t in self.times],
            "y": [float(v) for v in self.y],
            "y_full": [[float(v) for v in row] for row in self.y_full],
            "truncated": self.truncated,
            "fitted_rate": self.fitted_rate,
        }


def _companion(qp: RetardedQuasipolynomial):
    n = qp.n
    A = np.zeros((n, n))
    B = np.zeros((n, n))
    A[: n - 1, 1:] = np.eye(n - 1)
    A[n - 1, :] = -qp.a
    B[n - 1, :] = -qp.alpha
    return A, B


def _hermite(t, t0, t1, x0, x1, f0, f1):
    h = t1 - t0
    u = (t - t0) / h
    u2 = u * u
    u3 = u2 * u
    return (
        (2 * u3 - 3 * u2 + 1) * x0
        + (u3 - 2 * u2 + u) * h * f0
        + (-2 * u3 + 3 * u2) * x1
        + (u3 - u2) * h * f1
    )


def simulate(spec: SimulationSpec) -> SimulationTrace:
    """Integrate the companion system; deterministic for a fixed spec.

    Because rk_dt divides tau, every RK stage needs the delayed state only
    at times covered by the history or by completed steps, so the scheme
    stays explicit.  State norms above 1e12 truncate the trace with a flag
    instead of raising: unstable placements are legitimate experiments.
    """
    qp = spec.qp
    A, B = _companion(qp)
    tau = qp.tau
    h = spec.rk_dt

    node_t = [0.0]
    node_x = [spec.history_at(0.0)]
    node_f = []

    def delayed(t: float) -> np.ndarray:
        td = t - tau
        if td <= 0.0:
            return spec.history_at(td)
        i = int(np.searchsorted(node_t, td, side="right")) - 1
        if i >= len(node_t) - 1:
            i = len(node_t) - 2
        return _hermite(
            td, node_t[i], node_t[i + 1], node_x[i], node_x[i + 1], node_f[i], node_f[i + 1]
        )

    def rhs(t: float, x: np.ndarray) -> np.ndarray:
        return A @ x + B @ delayed(t)

    node_f.append(rhs(0.0, node_x[0]))

    truncated = False
    t = 0.0
    while t < spec.t_end - 1e-12 * spec.t_end:
        step = min(h, spec.t_end - t)
        x = node_x[-1]
        k1 = node_f[-1]
        k2 = rhs(t + 0.5 * step, x + 0.5 * step * k1)
        k3 = rhs(t + 0.5 * step, x + 0.5 * step * k2)
        k4 = rhs(t + step, x + step * k3)
        x_new = x + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t + step
        if not np.all(np.isfinite(x_new)) or np.max(np.abs(x_new)) > _BLOWUP:
            truncated = True
            break
        node_t.append(t)
        node_x.append(x_new)
        node_f.append(rhs(t, x_new))

    t_last = node_t[-1]
    n_out = int(math.floor(min(spec.t_end, t_last) / spec.dt + 1e-9)) + 1
    times = np.arange(n_out) * spec.dt
    nt = np.asarray(node_t)
    y_full = np.empty((qp.n, n_out))
    for j, tq in enumerate(times):
        i = int(np.searchsorted(nt, tq, side="right")) - 1
        if i >= len(node_t) - 1:
            y_full[:, j] = node_x[-1]
        else:
            y_full[:, j] = _hermite(
                tq, node_t[i], node_t[i + 1], node_x[i], node_x[i + 1],
                node_f[i], node_f[i + 1],
            )
    return SimulationTrace(
        times=times, y=y_full[0].copy(), y_full=y_full, truncated=truncated
    )


def fit_decay_rate(trace: SimulationTrace, window) -> float:
    """Least-squares exponential rate of |y| over window = [t0, t1].

    Fits the log of the peak envelope (local maxima of |y|); with fewer
    than 4 peaks, fits log|y| directly on samples with |y| > 1e-300.
    """
    t0, t1 = float(window[0]), float(window[1])
    if not (trace.times[0] <= t0 < t1 <= trace.times[-1] + 1e-12):
        raise InsufficientData(f"window [{t0}, {t1}] outside trace")
    mask = (trace.times >= t0) & (trace.times <= t1)
    ts = trace.times[mask]
    ys = np.abs(trace.y[mask])
    if ts.size < 50:
        raise InsufficientData(f"only {ts.size} samples in window, need 50")
    peaks = [
        i
        for i in range(1, ts.size - 1)
        if ys[i] > ys[i - 1] and ys[i] >= ys[i + 1] and ys[i] > 0
    ]
    if len(peaks) >= 4:
        tt = ts[peaks]
        ll = np.log(ys[peaks])
    else:
        keep = ys > 1e-300
        if np.count_nonzero(keep) < 2:
            raise InsufficientData("envelope of |y| vanishes on the window")
        tt = ts[keep]
        ll = np.log(ys[keep])
    slope, _ = np.polyfit(tt, ll, 1)
    return float(slope)


SCENARIO_NAMES = ("second_order_velocity_delay", "wind_tunnel_row1", "wind_tunnel_row2")


def _spec_for(qp, history, t_end, dt):
    m = max(_MIN_STEPS_PER_DELAY, int(math.ceil(qp.tau / dt)))
    return SimulationSpec(
        qp=qp, history=history, t_end=t_end, dt=dt, rk_dt=qp.tau / m
    )


def build_scenario(name: str, t_end: float | None = None, dt: float = 0.002):
    """Return the (open-loop, closed-loop) SimulationSpec pair for a named
    study: the delayed-velocity second-order design, or one of the two
    wind-tunnel parameter rows."""
    from .designs import design_second_order, design_wind_tunnel
    from .synthesis import synthesize

    if name == "second_order_velocity_delay":
        zeta, omega, tau = 0.2, 6.0, 0.5
        design = design_second_order(zeta, omega, tau)
        open_qp = RetardedQuasipolynomial(
            n=2, tau=tau, a=[omega * omega, 2.0 * zeta * omega], alpha=[0.0, 0.0]
        )
        closed_qp = synthesize(2, tau, design.s0).quasipolynomial()
        history = ([1.0], [0.0])
        te = 3.0 if t_end is None else t_end
        return _spec_for(open_qp, history, te, dt), _spec_for(closed_qp, history, te, dt)

    if name in ("wind_tunnel_row1", "wind_tunnel_row2"):
        kappa, k_gain, tau0 = 1.964, -0.67036, 0.33
        tau1 = 0.33 if name == "wind_tunnel_row1" else 0.70
        design = design_wind_tunnel(kappa, k_gain, tau0, tau1)
        tau = design.tau
        # uncontrolled Mach mode kappa m' + m = const: first-order decay -1/kappa
        open_qp = RetardedQuasipolynomial(n=1, tau=tau, a=[1.0 / kappa], alpha=[0.0])
        closed_qp = synthesize(3, tau, design.s0).quasipolynomial()
        # deviation history m = -0.1 with the vane held at its equilibrium,
        # so m' = m'' = 0 before the controller engages
        open_hist = ([-0.1],)
        closed_hist = ([-0.1], [0.0], [0.0])
        te = (6.0 / abs(design.s0) if t_end is None else t_end)
        return (
            _spec_for(open_qp, open_hist, te, dt),
            _spec_for(closed_qp, closed_hist, te, dt),
        )

    raise UnknownScenario(f"unknown scenario {name!r}; choose from {SCENARIO_NAMES}")
