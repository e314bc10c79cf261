"""Ergodic capacity of the secondary link and its analytic derivatives.

The busy-branch instantaneous capacity is averaged in closed form over the
PU->SU_rx fading.  The remaining expectation over the SU_tx->SU_rx fading
gain also reduces to closed form: with x_bar the noise-to-signal ratio at
the mean fading gain and r = y/x_bar,

    E[log2(1 + 1/x)]         = -T(x_bar) / ln 2
    E[T(y + y/x)]            = (T(x_bar) - T(y)) / (r - 1)

the second identity following from the antiderivative of e^{a s} Ei(-s).
Both are evaluated in forms built on W(z) = z*T(z) (bounded in (-1, 0)) so
that vanishing transmit power, vanishing interference and r -> 1 are all
continuous; near r = 1 a Taylor branch avoids the 0/0.  A reusable
evaluation context carries everything fixed for a given (P, phi_t, tau,
xi), making sweeps over the receive orientation a single vectorized pass.
"""

import math
from dataclasses import dataclass

import numpy as np

from .scenario import antenna_gain, normalize_angle
from .sensing import sensing_outcome, snr_at_sutx
from .specfun import _t_core, t_func

__all__ = [
    "CapacityOperands",
    "capacity_operands",
    "instantaneous_caps",
    "expected_c10_over_interference",
    "ergodic_capacity",
    "d_capacity_d_phir",
    "d_capacity_d_tau",
]

_LN2 = math.log(2.0)
_R1_GUARD = 1e-3   # |r - 1| below this switches to the Taylor branch


def _t_masked(z):
    """T(z) with the z = +inf asymptote mapped to 0."""
    if np.isfinite(z).all():
        return _t_core(z)
    out = np.zeros(z.shape)
    fin = np.isfinite(z)
    out[fin] = _t_core(z[fin])
    return out


def _w_func(z):
    """W(z) = z*T(z), continuous at z = +inf where the limit is -1."""
    if np.isfinite(z).all():
        return z * _t_core(z)
    out = np.full(z.shape, -1.0)
    fin = np.isfinite(z)
    out[fin] = z[fin] * _t_core(z[fin])
    return out


def _t_chain(z):
    """T(z) and its first four derivatives (T' = T + 1/z, ...)."""
    t0 = _t_core(z)
    t1 = t0 + 1.0 / z
    t2 = t1 - 1.0 / z ** 2
    t3 = t2 + 2.0 / z ** 3
    t4 = t3 - 6.0 / z ** 4
    return t0, t1, t2, t3, t4


def _gain_log_slope(pattern, offset):
    """A'(offset)/A(offset), stable even where the lobe term underflows."""
    off = normalize_angle(offset)
    scale = -2.0 * _LN2 * off / pattern.phi_3db ** 2
    if pattern.a1 == 0.0:
        return scale * np.ones_like(off)
    lobe = pattern.a0 * np.exp(-_LN2 * (off / pattern.phi_3db) ** 2)
    return scale * lobe / (pattern.a1 + lobe)


def _safe_r(x_bar, y):
    """r = y/x_bar with the doubly-degenerate inf/inf mapped to 0."""
    with np.errstate(invalid="ignore"):
        r = y / x_bar
    return np.where(np.isnan(r), 0.0, r)


def _psi(x_bar, y):
    """Mean of T(y*(1 + g/x_bar_g)) over the unit-mean fading gain:
    (T(x_bar) - T(y)) / (r - 1), Taylor branch near r = 1."""
    x_bar = np.asarray(x_bar, dtype=float)
    y = np.asarray(y, dtype=float)
    r = _safe_r(x_bar, y)
    t_x = _t_masked(x_bar)
    t_y = _t_masked(y)
    near = np.abs(r - 1.0) < _R1_GUARD
    denom = np.where(near, 1.0, r - 1.0)
    psi = (t_x - t_y) / denom
    if np.any(near):
        xb = x_bar[near]
        _, t1, t2, t3, _ = _t_chain(xb)
        d = y[near] - xb
        psi[near] = -xb * (t1 + t2 * d / 2.0 + t3 * d * d / 6.0)
    return psi


def _mean_bracket(x_bar, y, pi0_hat, beta0):
    """g_ss-average of the capacity bracket, bits/s/Hz."""
    t_x = _t_masked(x_bar)
    t_y = _t_masked(y)
    return (-pi0_hat * t_x + beta0 * (t_y - _psi(x_bar, y))) / _LN2


@dataclass(frozen=True)
class CapacityOperands:
    """Derived quantities feeding the closed-form ergodic capacity."""

    a: float             # composite channel gain g_ss * L_ss * G
    x: float             # sigma_n2 / (a * P)
    y: float             # sigma_n2 / sigma_p_bar2
    sigma_p_bar2: float  # mean PU->SU_rx interference power
    d_frac: float        # transmit fraction (T - tau) / T

    def __post_init__(self):
        if not (self.a > 0.0 and self.x > 0.0 and self.y > 0.0):
            raise ValueError("capacity operands require a, x, y > 0")
        if not 0.0 < self.d_frac < 1.0:
            raise ValueError("d_frac must be in (0, 1)")


def capacity_operands(scenario, g_ss, p, phi_t, phi_r, tau):
    """Operands (a, x, y, sigma_p_bar2, D) at one fading realization."""
    geo = scenario.geometry
    pat = scenario.pattern
    gain_prod = (antenna_gain(pat, phi_t - geo.theta)
                 * antenna_gain(pat, phi_r - np.pi - geo.theta))
    a = g_ss * scenario.l_ss * gain_prod
    sigma_p_bar2 = (scenario.primary.p_p * scenario.channels.gamma_ps
                    * scenario.l_ps * antenna_gain(pat, phi_r - geo.theta_pt_prime))
    sigma_n2 = scenario.channels.sigma_n2
    return CapacityOperands(
        a=a,
        x=sigma_n2 / (a * p),
        y=sigma_n2 / sigma_p_bar2,
        sigma_p_bar2=sigma_p_bar2,
        d_frac=(scenario.frame.t_frame - tau) / scenario.frame.t_frame,
    )


def instantaneous_caps(a, p, sigma_n2, interference):
    """Instantaneous capacities (idle-true, busy-true) for a sensed-idle
    transmission: c00 = log2(1 + aP/sigma_n2), c10 with the interference
    added to the noise."""
    snr = a * p / sigma_n2
    c00 = np.log1p(snr) / _LN2
    c10 = np.log1p(a * p / (sigma_n2 + interference)) / _LN2
    return c00, c10


def expected_c10_over_interference(x, y):
    """Mean of c10 over the exponentially distributed interference power:
    log2(1 + 1/x) + [T(y) - T(y + y/x)] / ln 2."""
    if not x > 0.0 or not y > 0.0:
        raise ValueError("expected_c10_over_interference requires x > 0 and y > 0")
    return math.log1p(1.0 / x) / _LN2 + (t_func(y) - t_func(y + y / x)) / _LN2


# --------------------------------------------------------------------------
# evaluation context: everything fixed for given (P, phi_t, tau, xi)

@dataclass(frozen=True)
class _Ctx:
    scenario: object
    omni: bool
    p: float
    phi_t: float
    tau: float
    xi: float
    gamma: float
    outcome: object      # SensingOutcome
    d_frac: float
    x_bar_base: float    # x_bar = x_bar_base / A_r
    y_scale: float       # y = y_scale / A_p


def make_context(scenario, p, phi_t, tau, xi, omni=False):
    t_frame = scenario.frame.t_frame
    if not 0.0 < tau < t_frame:
        raise ValueError("tau must be in (0, t_frame)")
    if p < 0.0:
        raise ValueError("transmit power must be >= 0")
    outcome = sensing_outcome(scenario, phi_t, tau, xi, omni=omni)
    gamma = snr_at_sutx(scenario, phi_t, omni=omni)
    a_t = 1.0 if omni else antenna_gain(scenario.pattern,
                                        phi_t - scenario.geometry.theta)
    sigma_n2 = scenario.channels.sigma_n2
    signal = scenario.channels.gamma_ss * scenario.l_ss * a_t * p
    x_bar_base = sigma_n2 / signal if signal > 0.0 else math.inf
    interf = scenario.primary.p_p * scenario.channels.gamma_ps * scenario.l_ps
    return _Ctx(
        scenario=scenario, omni=omni, p=p, phi_t=phi_t, tau=tau, xi=xi,
        gamma=gamma, outcome=outcome,
        d_frac=(t_frame - tau) / t_frame,
        x_bar_base=x_bar_base,
        y_scale=sigma_n2 / interf,
    )


def _rx_state(ctx, phi_r):
    """x_bar and y at each receive orientation, plus the raw gains."""
    phi_r = np.atleast_1d(np.asarray(phi_r, dtype=float))
    if ctx.omni:
        ones = np.ones_like(phi_r)
        x_bar = np.full_like(phi_r, ctx.x_bar_base)
        y = np.full_like(phi_r, ctx.y_scale)
        return phi_r, ones, ones, x_bar, y
    geo = ctx.scenario.geometry
    pat = ctx.scenario.pattern
    a_r = antenna_gain(pat, phi_r - np.pi - geo.theta)
    a_p = antenna_gain(pat, phi_r - geo.theta_pt_prime)
    with np.errstate(divide="ignore"):
        x_bar = ctx.x_bar_base / a_r
        y = ctx.y_scale / a_p
    return phi_r, a_r, a_p, x_bar, y


def context_capacity(ctx, phi_r):
    """Ergodic capacity at each receive orientation in phi_r (scalar or
    array), bits/s/Hz."""
    scalar = np.isscalar(phi_r) or np.ndim(phi_r) == 0
    _, _, _, x_bar, y = _rx_state(ctx, phi_r)
    out = ctx.outcome
    c = ctx.d_frac * _mean_bracket(x_bar, y, out.pi0_hat, out.beta0)
    return float(c[0]) if scalar else c


def context_dphir(ctx, phi_r):
    """Analytic derivative dC/dphi_r at each orientation in phi_r.

    Written in terms of U1(z) = 1 + W(z) so the vanishing-power and
    vanishing-interference limits are exact zeros instead of inf*0.
    """
    scalar = np.isscalar(phi_r) or np.ndim(phi_r) == 0
    phi_r_arr, a_r, a_p, x_bar, y = _rx_state(ctx, phi_r)
    if ctx.omni:
        res = np.zeros_like(phi_r_arr)
        return float(res[0]) if scalar else res
    out = ctx.outcome
    geo = ctx.scenario.geometry
    pat = ctx.scenario.pattern
    slope_r = _gain_log_slope(pat, phi_r_arr - np.pi - geo.theta)
    slope_p = _gain_log_slope(pat, phi_r_arr - geo.theta_pt_prime)

    u1x = 1.0 + _w_func(x_bar)
    u1y = 1.0 + _w_func(y)
    r = _safe_r(x_bar, y)
    delta = _t_masked(x_bar) - _t_masked(y)
    near = np.abs(r - 1.0) < _R1_GUARD
    denom = np.where(near, 1.0, r - 1.0)
    # x_bar * dPsi/dx_bar and y * dPsi/dy in stable ratio form
    x_dpsi_dx = u1x / denom + r * delta / denom ** 2
    y_dpsi_dy = -u1y / denom - r * delta / denom ** 2
    if np.any(near):
        xb = x_bar[near]
        _, t1, t2, t3, t4 = _t_chain(xb)
        d = y[near] - xb
        x_dpsi_dx[near] = xb * (-t1 - t2 * d / 2.0 - t3 * d * d / 6.0
                                - xb * (t2 / 2.0 + t3 * d / 6.0 + t4 * d * d / 6.0))
        y_dpsi_dy[near] = -y[near] * xb * (t2 / 2.0 + t3 * d / 3.0)

    term_r = out.pi0_hat * u1x + out.beta0 * x_dpsi_dx
    term_p = out.beta0 * (u1y - y_dpsi_dy)
    d_c = ctx.d_frac / _LN2 * (slope_r * term_r - slope_p * term_p)
    return float(d_c[0]) if scalar else d_c


def context_dtau(ctx, phi_r):
    """Analytic derivative dC/dtau at fixed power, orientations and
    threshold (the busy-branch capacity enters through its closed-form
    fading averages)."""
    scalar = np.isscalar(phi_r) or np.ndim(phi_r) == 0
    _, _, _, x_bar, y = _rx_state(ctx, phi_r)
    out = ctx.outcome
    sc = ctx.scenario
    t_x = _t_masked(x_bar)
    e_c00 = -t_x / _LN2
    e_c10 = e_c00 + (_t_masked(y) - _psi(x_bar, y)) / _LN2
    cap = ctx.d_frac * (out.alpha0 * e_c00 + out.beta0 * e_c10)

    sigma_n2 = sc.channels.sigma_n2
    f_s = sc.frame.f_s
    t_frame = sc.frame.t_frame
    big_x = (ctx.xi / sigma_n2 - 1.0) * math.sqrt(f_s)
    big_y = ((ctx.xi / sigma_n2 - ctx.gamma - 1.0)
             * math.sqrt(f_s / (2.0 * ctx.gamma + 1.0)))
    tau = ctx.tau
    gauss = (big_x * sc.primary.pi0 * e_c00 * math.exp(-0.5 * tau * big_x ** 2)
             + big_y * sc.primary.pi1 * e_c10 * math.exp(-0.5 * tau * big_y ** 2))
    d = -cap / (t_frame - tau) + ctx.d_frac / math.sqrt(8.0 * np.pi * tau) * gauss
    return float(d[0]) if scalar else d


# --------------------------------------------------------------------------
# public one-shot wrappers

def ergodic_capacity(scenario, p, phi_t, phi_r, tau, xi, omni=False):
    """Closed-form ergodic capacity C(P, phi_t, phi_r, tau, xi), bits/s/Hz."""
    ctx = make_context(scenario, p, phi_t, tau, xi, omni=omni)
    return context_capacity(ctx, phi_r)


def d_capacity_d_phir(scenario, p, phi_t, phi_r, tau, xi, omni=False):
    """Analytic dC/dphi_r, averaged over the SU link fading in closed
    form, consistent with finite differences of ergodic_capacity."""
    ctx = make_context(scenario, p, phi_t, tau, xi, omni=omni)
    return context_dphir(ctx, phi_r)


def d_capacity_d_tau(scenario, p, phi_t, phi_r, tau, xi, omni=False):
    """Analytic dC/dtau at fixed transmit power and orientations."""
    ctx = make_context(scenario, p, phi_t, tau, xi, omni=omni)
    return context_dtau(ctx, phi_r)
