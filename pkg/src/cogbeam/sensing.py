"""Energy-detection statistics under the Gaussian approximation: sensing SNR,
false-alarm and detection probabilities, the joint idle probabilities, and
the decision-threshold window that keeps the capacity concave in the sensing
time.
"""

import math
from dataclasses import dataclass

import numpy as np

from .scenario import antenna_gain
from .specfun import q_function

__all__ = [
    "SensingConfig",
    "SensingOutcome",
    "snr_at_sutx",
    "prob_false_alarm",
    "prob_detection",
    "joint_idle_probs",
    "threshold_window",
    "threshold_from_kappa",
    "sensing_outcome",
]


@dataclass(frozen=True)
class SensingConfig:
    """Decision threshold (W) and sensing time (s)."""

    xi: float
    tau: float

    def validate(self, frame):
        if not self.xi > 0.0:
            raise ValueError("xi must be > 0")
        if not 0.0 < self.tau < frame.t_frame:
            raise ValueError("tau must be in (0, t_frame)")

    def n_samples(self, frame):
        """Sample count tau * f_s, kept continuous (no rounding)."""
        return self.tau * frame.f_s


@dataclass(frozen=True)
class SensingOutcome:
    """Sensing error probabilities and the joint idle probabilities."""

    p_f: float
    p_d: float
    alpha0: float   # Pr{idle, sensed idle}
    beta0: float    # Pr{busy, sensed idle}
    pi0_hat: float  # Pr{sensed idle} = alpha0 + beta0


def snr_at_sutx(scenario, phi_t, omni=False):
    """Sensing SNR at SU_tx for a transmit orientation phi_t (rad).

    gamma = P_p * gamma_stpt * A(phi_t - theta_pt) * L_stpt / sigma_n2;
    with omni=True the antenna gain is the unit constant.
    """
    gain = 1.0 if omni else antenna_gain(scenario.pattern,
                                         phi_t - scenario.geometry.theta_pt)
    return (scenario.primary.p_p * scenario.channels.gamma_stpt * gain
            * scenario.l_stpt / scenario.channels.sigma_n2)


def prob_false_alarm(xi, tau, f_s, sigma_n2):
    """Q((xi/sigma_n2 - 1) * sqrt(tau * f_s)); decreasing in tau for
    xi > sigma_n2."""
    return q_function((xi / sigma_n2 - 1.0) * math.sqrt(tau * f_s))


def prob_detection(xi, tau, f_s, sigma_n2, gamma):
    """Q((xi/sigma_n2 - gamma - 1) * sqrt(tau * f_s / (2*gamma + 1)))."""
    arg = (xi / sigma_n2 - gamma - 1.0) * math.sqrt(tau * f_s / (2.0 * gamma + 1.0))
    return q_function(arg)


def joint_idle_probs(pi0, pi1, p_f, p_d):
    """Joint probabilities of the true state with a sensed-idle decision:
    alpha0 = pi0*(1 - p_f), beta0 = pi1*(1 - p_d), pi0_hat = alpha0 + beta0."""
    alpha0 = pi0 * (1.0 - p_f)
    beta0 = pi1 * (1.0 - p_d)
    return SensingOutcome(p_f=p_f, p_d=p_d, alpha0=alpha0, beta0=beta0,
                          pi0_hat=alpha0 + beta0)


def threshold_window(sigma_n2, gamma, pi0, pi1):
    """Threshold interval [xi_lo, xi_hi) on which the capacity is concave in
    the sensing time: xi_lo = sigma_n2*(1 + m*gamma), xi_hi = sigma_n2*(1 +
    gamma) with m = pi1 / (pi1 + pi0*sqrt(2*gamma + 1)).

    Raises ValueError for gamma <= 0 (the window degenerates to a point).
    """
    if not gamma > 0.0:
        raise ValueError("threshold window degenerates for gamma <= 0")
    m = pi1 / (pi1 + pi0 * math.sqrt(2.0 * gamma + 1.0))
    return sigma_n2 * (1.0 + m * gamma), sigma_n2 * (1.0 + gamma)


def threshold_from_kappa(scenario, phi_t, kappa=0.5, omni=False):
    """Decision threshold xi_lo + kappa*(xi_hi - xi_lo) inside the
    concavity window at the sensing SNR of phi_t."""
    if not 0.0 <= kappa < 1.0:
        raise ValueError("kappa must be in [0, 1)")
    gamma = snr_at_sutx(scenario, phi_t, omni=omni)
    lo, hi = threshold_window(scenario.channels.sigma_n2, gamma,
                              scenario.primary.pi0, scenario.primary.pi1)
    return lo + kappa * (hi - lo)


def sensing_outcome(scenario, phi_t, tau, xi, omni=False):
    """Full sensing outcome at (phi_t, tau, xi) for a scenario."""
    gamma = snr_at_sutx(scenario, phi_t, omni=omni)
    sigma_n2 = scenario.channels.sigma_n2
    f_s = scenario.frame.f_s
    p_f = prob_false_alarm(xi, tau, f_s, sigma_n2)
    p_d = prob_detection(xi, tau, f_s, sigma_n2, gamma)
    return joint_idle_probs(scenario.primary.pi0, scenario.primary.pi1, p_f, p_d)
