"""Seeded Monte Carlo estimators that validate the closed-form capacity and
the interference-outage reduction, plus a central-difference utility.

Fading gains are drawn by inverse-CDF transform of uniforms from the
counter-based Philox generator; sample batches map to fixed disjoint
substreams, so the merged estimate does not depend on evaluation order.
The sensing layer is never sampled: the joint idle probabilities are exact
and multiply the capacity terms directly.
"""

import math
from dataclasses import dataclass

import numpy as np

from .scenario import antenna_gain
from .sensing import sensing_outcome

__all__ = ["McEstimate", "mc_capacity", "mc_outage", "finite_difference"]

_BATCH = 1 << 18


@dataclass(frozen=True)
class McEstimate:
    """Sample mean with its standard error."""

    mean: float
    std_error: float
    n_samples: int

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")


def _batch_uniforms(seed, rows, n):
    """Yield (rows, m) uniform blocks; batch i always maps to substream i."""
    base = np.random.Philox(key=int(seed))
    start = 0
    index = 0
    while start < n:
        m = min(_BATCH, n - start)
        gen = np.random.Generator(base.jumped(index))
        yield gen.random(size=(rows, m))
        start += m
        index += 1


def _accumulate(seed, rows, n, sample_fn):
    """Stream batches through sample_fn and reduce to an McEstimate."""
    total = 0.0
    total_sq = 0.0
    for u in _batch_uniforms(seed, rows, n):
        vals = sample_fn(u)
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return McEstimate(mean=mean, std_error=math.sqrt(var / n), n_samples=n)


def mc_capacity(scenario, p, phi_t, phi_r, tau, xi, n, seed, omni=False):
    """Monte Carlo estimate of the ergodic capacity.

    Samples the two exponential fading gains, forms the instantaneous
    capacities of the sensed-idle branches and averages
    D*(alpha0*c00 + beta0*c10); deterministic for a given seed.
    """
    if n < 1000:
        raise ValueError("mc_capacity requires n >= 1000")
    geo = scenario.geometry
    ch = scenario.channels
    out = sensing_outcome(scenario, phi_t, tau, xi, omni=omni)
    d_frac = (scenario.frame.t_frame - tau) / scenario.frame.t_frame
    if omni:
        gain_prod = 1.0
        a_intf = 1.0
    else:
        gain_prod = (antenna_gain(scenario.pattern, phi_t - geo.theta)
                     * antenna_gain(scenario.pattern, phi_r - np.pi - geo.theta))
        a_intf = antenna_gain(scenario.pattern, phi_r - geo.theta_pt_prime)
    sig_coeff = scenario.l_ss * gain_prod * p / ch.sigma_n2
    intf_coeff = scenario.primary.p_p * scenario.l_ps * a_intf / ch.sigma_n2
    ln2 = math.log(2.0)

    def sample(u):
        g_ss = -ch.gamma_ss * np.log1p(-u[0])
        g_ps = -ch.gamma_ps * np.log1p(-u[1])
        snr = g_ss * sig_coeff
        c00 = np.log1p(snr) / ln2
        c10 = np.log1p(snr / (1.0 + g_ps * intf_coeff)) / ln2
        return d_frac * (out.alpha0 * c00 + out.beta0 * c10)

    return _accumulate(seed, 2, n, sample)


def mc_outage(scenario, p, phi_t, sensing_out, tau, n, seed, omni=False):
    """Binomial estimate of the interference outage probability
    Pr{D*beta0*P*g_sp*L_sp*A(phi_t - theta_pr) > I_pk}."""
    if n < 1000:
        raise ValueError("mc_outage requires n >= 1000")
    d_frac = (scenario.frame.t_frame - tau) / scenario.frame.t_frame
    gain = 1.0 if omni else antenna_gain(scenario.pattern,
                                         phi_t - scenario.geometry.theta_pr)
    coeff = d_frac * sensing_out.beta0 * p * scenario.l_sp * gain

    def sample(u):
        g_sp = -scenario.channels.gamma_sp * np.log1p(-u[0])
        return (coeff * g_sp > scenario.limits.i_pk).astype(float)

    est = _accumulate(seed, 1, n, sample)
    # binomial proportion standard error
    se = math.sqrt(max(est.mean * (1.0 - est.mean), 0.0) / n)
    return McEstimate(mean=est.mean, std_error=se, n_samples=n)


def finite_difference(f, at, step):
    """Central difference (f(at + step) - f(at - step)) / (2 step)."""
    if not step > 0.0:
        raise ValueError("step must be > 0")
    return (f(at + step) - f(at - step)) / (2.0 * step)
