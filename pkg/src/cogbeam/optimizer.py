"""Constrained maximization of the ergodic capacity: closed-form optimal
power, the receive-orientation stationary-point solve, an outer
grid-then-golden-section search over (phi_t, tau), and the omni/LOS
baselines with their capacity ratio.

The objective is not concave in phi_t (and only conditionally in tau), so
the outer search scans a coarse grid first and refines coordinate-wise; the
inner variables (P, phi_r) are re-solved at every candidate.  All stages
are deterministic: identical inputs give bit-identical results.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .capacity import context_capacity, context_dphir, make_context
from .scenario import antenna_gain, normalize_angle
from .sensing import sensing_outcome, threshold_from_kappa

__all__ = [
    "SearchConfig",
    "OptimizationResult",
    "PowerChoice",
    "b_bar0",
    "optimal_power",
    "solve_phi_r",
    "optimize",
    "optimize_omni",
    "optimize_los",
    "capacity_ratio_d2o",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

PEAK_POWER = "peak-power"
INTERFERENCE_OUTAGE = "interference-outage"


@dataclass(frozen=True)
class SearchConfig:
    """Grid resolutions and tolerances of the outer search."""

    phi_t_grid: int = 33
    tau_grid: int = 33
    phi_r_scan: int = 65
    tol: float = 1e-6
    max_iters: int = 60
    xi_kappa: float = 0.5
    tau_max_frac: float = 0.999

    def __post_init__(self):
        if self.phi_t_grid < 2 or self.tau_grid < 2 or self.phi_r_scan < 3:
            raise ValueError("grids need at least 2 (phi_t, tau) / 3 (phi_r) points")
        if not 0.0 <= self.xi_kappa < 1.0:
            raise ValueError("xi_kappa must be in [0, 1)")
        if not 0.0 < self.tol:
            raise ValueError("tol must be > 0")


@dataclass(frozen=True)
class OptimizationResult:
    """Optimal decision variables, the capacity they attain, and which
    power constraint binds there."""

    tau_opt: float
    phi_t_opt: float
    phi_r_opt: float
    p_opt: float
    c_opt: float
    binding: str
    iterations: int
    converged: bool


class PowerChoice(NamedTuple):
    power: float
    binding: str


def b_bar0(scenario, sensing_out, phi_t, omni=False):
    """Mean interference coefficient toward the primary receiver:
    beta0 * gamma_sp * L_sp * A(phi_t - theta_pr)."""
    gain = 1.0 if omni else antenna_gain(scenario.pattern,
                                         phi_t - scenario.geometry.theta_pr)
    return sensing_out.beta0 * scenario.channels.gamma_sp * scenario.l_sp * gain


def optimal_power(sensing_out, bbar0, d_frac, limits):
    """Transmit power P = min{P_pk/(D*pi0_hat), -I_pk/(D*bbar0*ln(eps))}
    and the constraint that attains the minimum."""
    if not sensing_out.pi0_hat > 0.0:
        raise ValueError("pi0_hat = 0: the secondary never transmits")
    peak = limits.p_pk / (d_frac * sensing_out.pi0_hat)
    if bbar0 > 0.0:
        outage = -limits.i_pk / (d_frac * bbar0 * math.log(limits.epsilon))
    else:
        outage = math.inf
    if peak <= outage:
        return PowerChoice(peak, PEAK_POWER)
    return PowerChoice(outage, INTERFERENCE_OUTAGE)


def _phi_r_interval(scenario):
    theta = scenario.geometry.theta
    half = scenario.pattern.phi_3db
    center = math.pi + theta
    return center - half, center + half, center


def _solve_phi_r_ctx(ctx, scan):
    """Maximizer of the capacity over the receive-orientation interval.

    Scans the analytic derivative, polishes every sign change with a
    bracketed root find, and picks the best among roots, endpoints and
    boresight; ties break toward boresight.
    """
    lo, hi, center = _phi_r_interval(ctx.scenario)
    grid = np.linspace(lo, hi, scan)
    deriv = context_dphir(ctx, grid)
    candidates = [lo, hi, center]
    for i in range(scan - 1):
        d0, d1 = deriv[i], deriv[i + 1]
        if d0 == 0.0:
            candidates.append(grid[i])
        elif d0 * d1 < 0.0:
            root = brentq(lambda v: context_dphir(ctx, v), grid[i], grid[i + 1],
                          xtol=1e-11, rtol=4.0 * np.finfo(float).eps)
            candidates.append(root)
    if deriv[-1] == 0.0:
        candidates.append(grid[-1])
    cand = np.array(candidates)
    caps = context_capacity(ctx, cand)
    order = sorted(range(len(cand)), key=lambda k: (-caps[k], abs(cand[k] - center)))
    return float(cand[order[0]])


def solve_phi_r(scenario, p, phi_t, tau, xi, scan=65):
    """Receive orientation maximizing the capacity within the half-power
    interval around boresight-to-SU_tx."""
    ctx = make_context(scenario, p, phi_t, tau, xi)
    return _solve_phi_r_ctx(ctx, scan)


class _Candidate(NamedTuple):
    c: float
    phi_t: float
    tau: float
    phi_r: float
    power: float
    binding: str


def _evaluate(scenario, phi_t, tau, cfg, mode):
    """Capacity at one (phi_t, tau) with P from the power rule, xi from the
    kappa window at phi_t, and phi_r re-solved (or pinned for los/omni)."""
    omni = mode == "omni"
    xi = threshold_from_kappa(scenario, phi_t, cfg.xi_kappa, omni=omni)
    out = sensing_outcome(scenario, phi_t, tau, xi, omni=omni)
    d_frac = (scenario.frame.t_frame - tau) / scenario.frame.t_frame
    bbar = b_bar0(scenario, out, phi_t, omni=omni)
    power, binding = optimal_power(out, bbar, d_frac, scenario.limits)
    ctx = make_context(scenario, power, phi_t, tau, xi, omni=omni)
    if mode == "dir":
        phi_r = _solve_phi_r_ctx(ctx, cfg.phi_r_scan)
    else:
        phi_r = math.pi + scenario.geometry.theta
    c = context_capacity(ctx, phi_r)
    return _Candidate(c, phi_t, tau, phi_r, power, binding)


def _tau_domain(scenario, cfg):
    frame = scenario.frame
    hi = cfg.tau_max_frac * frame.t_frame
    lo = frame.t_frame * 30.0 / frame.f_s
    if lo >= hi:
        lo = hi / 1000.0
    return lo, hi


def _golden_max(f, lo, hi, tol, max_iter=200):
    """Deterministic golden-section maximization on [lo, hi]."""
    a, b = lo, hi
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while (b - a) > tol and it < max_iter:
        if f1.c < f2.c:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = f(x1)
        it += 1
    return f1 if f1.c >= f2.c else f2


def _search(scenario, cfg, mode):
    theta = scenario.geometry.theta
    half = scenario.pattern.phi_3db
    tau_lo, tau_hi = _tau_domain(scenario, cfg)
    taus = np.linspace(tau_lo, tau_hi, cfg.tau_grid)
    if mode == "dir":
        phi_ts = np.linspace(theta - half, theta + half, cfg.phi_t_grid)
    else:
        phi_ts = np.array([theta])

    best = None
    for phi_t in phi_ts:
        for tau in taus:
            cand = _evaluate(scenario, float(phi_t), float(tau), cfg, mode)
            if best is None or cand.c > best.c:
                best = cand

    dphi = (phi_ts[1] - phi_ts[0]) if len(phi_ts) > 1 else 0.0
    dtau = taus[1] - taus[0]
    iterations = 0
    converged = False
    for _ in range(cfg.max_iters):
        iterations += 1
        prev = best
        if mode == "dir":
            lo = max(theta - half, best.phi_t - dphi)
            hi = min(theta + half, best.phi_t + dphi)
            got = _golden_max(
                lambda v: _evaluate(scenario, v, best.tau, cfg, mode), lo, hi, cfg.tol)
            if got.c > best.c:
                best = got
        lo = max(tau_lo, best.tau - dtau)
        hi = min(tau_hi, best.tau + dtau)
        got = _golden_max(
            lambda v: _evaluate(scenario, best.phi_t, v, cfg, mode), lo, hi, cfg.tol)
        if got.c > best.c:
            best = got
        moved = abs(best.phi_t - prev.phi_t) + abs(best.tau - prev.tau)
        dphi = max(dphi / 2.0, cfg.tol)
        dtau = max(dtau / 2.0, cfg.tol)
        if moved < cfg.tol:
            converged = True
            break

    return OptimizationResult(
        tau_opt=best.tau,
        phi_t_opt=normalize_angle(best.phi_t),
        phi_r_opt=normalize_angle(best.phi_r),
        p_opt=best.power,
        c_opt=best.c,
        binding=best.binding,
        iterations=iterations,
        converged=converged,
    )


def optimize(scenario, search_config=None):
    """Joint search over (phi_t, tau) with P and phi_r re-solved at every
    candidate; returns the best point of the evaluated set."""
    cfg = search_config or SearchConfig()
    return _search(scenario, cfg, "dir")


def optimize_omni(scenario, search_config=None):
    """Baseline with both antenna gains replaced by the unit constant;
    only (P, tau) are optimized."""
    cfg = search_config or SearchConfig()
    return _search(scenario, cfg, "omni")


def optimize_los(scenario, search_config=None):
    """Baseline with the antennas pointed exactly at each other;
    only (P, tau) are optimized."""
    cfg = search_config or SearchConfig()
    return _search(scenario, cfg, "los")


def capacity_ratio_d2o(scenario, search_config=None):
    """Capacity ratio of the fully optimized directional solution to the
    omni-directional baseline."""
    cfg = search_config or SearchConfig()
    dir_res = optimize(scenario, cfg)
    omn_res = optimize_omni(scenario, cfg)
    if omn_res.c_opt == 0.0:
        raise ZeroDivisionError("omni baseline capacity is zero")
    return dir_res.c_opt / omn_res.c_opt
