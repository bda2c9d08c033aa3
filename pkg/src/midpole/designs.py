"""Two worked control designs built on maximal-multiplicity placement.

design_second_order places a multiplicity-4 dominant root for a second-order
plant under delayed proportional-derivative feedback.  design_wind_tunnel
places a multiplicity-6 dominant root for the classical wind-tunnel
Mach-number model (first-order Mach dynamics in cascade with a second-order
vane actuator, delays tau0 and tau1 adding up to the loop delay).

Both assemble their closed-loop quasipolynomial from hand-derived formulas
and cross-check it against the general synthesis routine, so a transcription
error in either path fails loudly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameters, NonPositiveRadicand, NumericalError
from .quasipoly import RetardedQuasipolynomial
from .synthesis import synthesize

__all__ = [
    "SecondOrderDesign",
    "ControllerDesign",
    "design_second_order",
    "design_wind_tunnel",
    "real_root_r0",
    "cubic_q",
    "cubic_q_derivative",
]

# units of the controller fields, carried into CSV/JSON metadata unchanged
CONTROLLER_UNITS = {
    "kappa": "s",
    "k_gain": "1/rad",
    "tau0": "s",
    "tau1": "s",
    "tau": "s",
    "s0": "1/s",
    "zeta": "1",
    "omega": "rad/s",
    "beta0": "1",
    "beta1": "s",
    "beta2": "s^2",
}


@dataclass(frozen=True)
class SecondOrderDesign:
    zeta: float
    omega: float
    tau: float
    s0: float
    a0: float
    alpha1: float
    alpha0: float

    def closed_loop(self) -> RetardedQuasipolynomial:
        return RetardedQuasipolynomial(
            n=2,
            tau=self.tau,
            a=[self.omega**2 + self.a0, 2.0 * self.zeta * self.omega],
            alpha=[self.alpha0, self.alpha1],
        )

    def to_json_dict(self) -> dict:
        return {
            "zeta": self.zeta,
            "omega": self.omega,
            "tau": self.tau,
            "s0": self.s0,
            "a0": self.a0,
            "alpha1": self.alpha1,
            "alpha0": self.alpha0,
            "closed_loop": self.closed_loop().to_json_dict(),
        }


@dataclass(frozen=True)
class ControllerDesign:
    kappa: float
    k_gain: float
    tau0: float
    tau1: float
    tau: float
    s0: float
    zeta: float
    omega: float
    beta0: float
    beta1: float
    beta2: float
    zeta_in_unit_interval: bool

    def closed_loop(self) -> RetardedQuasipolynomial:
        w2 = self.omega**2
        a = [
            w2 / self.kappa,
            w2 + 2.0 * self.zeta * self.omega / self.kappa,
            2.0 * self.zeta * self.omega + 1.0 / self.kappa,
        ]
        scale = -self.k_gain * w2 / self.kappa
        alpha = [scale * self.beta0, scale * self.beta1, scale * self.beta2]
        return RetardedQuasipolynomial(n=3, tau=self.tau, a=a, alpha=alpha)

    def to_json_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "k_gain": self.k_gain,
            "tau0": self.tau0,
            "tau1": self.tau1,
            "tau": self.tau,
            "s0": self.s0,
            "zeta": self.zeta,
            "omega": self.omega,
            "beta0": self.beta0,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "zeta_in_unit_interval": self.zeta_in_unit_interval,
            "units": CONTROLLER_UNITS,
            "closed_loop": self.closed_loop().to_json_dict(),
        }


def _gate(label: str, got: RetardedQuasipolynomial, want) -> None:
    scale = max(
        1.0,
        float(np.max(np.abs(want.a))),
        float(np.max(np.abs(want.alpha))),
    )
    if not (
        np.allclose(got.a, want.a, rtol=1e-8, atol=1e-10 * scale)
        and np.allclose(got.alpha, want.alpha, rtol=1e-8, atol=1e-10 * scale)
    ):
        raise NumericalError(
            f"{label}: hand-derived closed loop disagrees with synthesis; "
            f"a={got.a} vs {want.a}, alpha={got.alpha} vs {want.alpha}"
        )


def design_second_order(zeta: float, omega: float, tau: float) -> SecondOrderDesign:
    """Delayed-feedback gains placing a root of multiplicity 4 at
    s0 = -zeta*omega - 2/tau for the plant y'' + 2 zeta omega y' + omega^2 y = u."""
    if not (zeta > 0 and omega > 0 and tau > 0):
        raise InvalidParameters("zeta, omega, tau must all be > 0")
    s0 = -zeta * omega - 2.0 / tau
    a0 = 6.0 / tau**2 + 4.0 * s0 / tau + s0**2 - omega**2
    e = math.exp(s0 * tau)
    alpha1 = -(2.0 / tau) * e
    alpha0 = (2.0 / tau) * e * (s0 - 3.0 / tau)
    design = SecondOrderDesign(
        zeta=zeta, omega=omega, tau=tau, s0=s0, a0=a0, alpha1=alpha1, alpha0=alpha0
    )
    reference = synthesize(2, tau, s0)
    _gate("second-order design", design.closed_loop(), reference.quasipolynomial())
    return design


def cubic_q(x: float) -> float:
    """Q(X) = X^3 + 9 X^2 + 36 X + 60, the cubic whose unique real root
    fixes the normalized placement."""
    return ((x + 9.0) * x + 36.0) * x + 60.0


def cubic_q_derivative(x: float) -> float:
    """Q'(X) = 3 (X^2 + 6 X + 12), positive everywhere, so Q is strictly
    increasing and the real root is unique."""
    return 3.0 * ((x + 6.0) * x + 12.0)


def real_root_r0() -> float:
    """The unique real root of Q, in closed form -3 - 9^(1/3) + 3^(1/3),
    polished by one Newton pass for a bit-stable constant."""
    r = -3.0 - 9.0 ** (1.0 / 3.0) + 3.0 ** (1.0 / 3.0)
    for _ in range(3):
        r = r - cubic_q(r) / cubic_q_derivative(r)
    return r


def design_wind_tunnel(
    kappa: float, k_gain: float, tau0: float, tau1: float
) -> ControllerDesign:
    """Vane-position feedback gains placing a root of multiplicity 6 for the
    wind-tunnel loop; the actuator damping and natural frequency (zeta,
    omega) come out of the design rather than going in."""
    if not (kappa > 0):
        raise InvalidParameters("kappa must be > 0")
    if not (k_gain < 0):
        raise InvalidParameters("k_gain must be < 0")
    if not (tau0 > 0 and tau1 > 0):
        raise InvalidParameters("tau0 and tau1 must be > 0")
    tau = tau0 + tau1
    s0 = real_root_r0() / tau - 1.0 / kappa

    radicand = -kappa * (
        s0**3 + 9.0 * s0**2 / tau + 36.0 * s0 / tau**2 + 60.0 / tau**3
    )
    if not (radicand > 0):
        raise NonPositiveRadicand(
            f"frequency radicand {radicand} is not positive (must never happen)"
        )
    omega = math.sqrt(radicand)
    zeta = (
        -3.0 * s0 / (2.0 * omega)
        - 9.0 / (2.0 * omega * tau)
        - 1.0 / (2.0 * omega * kappa)
    )
    e = math.exp(s0 * tau)
    kw2 = k_gain * omega**2
    beta0 = -3.0 * kappa * (s0**2 * tau**2 - 8.0 * s0 * tau + 20.0) * e / (kw2 * tau**3)
    beta1 = 6.0 * kappa * (s0 * tau - 4.0) * e / (kw2 * tau**2)
    beta2 = -3.0 * kappa * e / (kw2 * tau)

    design = ControllerDesign(
        kappa=kappa,
        k_gain=k_gain,
        tau0=tau0,
        tau1=tau1,
        tau=tau,
        s0=s0,
        zeta=zeta,
        omega=omega,
        beta0=beta0,
        beta1=beta1,
        beta2=beta2,
        zeta_in_unit_interval=0.0 < zeta < 1.0,
    )
    reference = synthesize(3, tau, s0)
    _gate("wind-tunnel design", design.closed_loop(), reference.quasipolynomial())
    return design
