"""Runtime cross-checks: every closed form is validated against a seeded
Monte Carlo or finite-difference oracle on the supplied scenario.  Backs
the `validate` CLI subcommand.
"""

import math
from dataclasses import dataclass

import numpy as np

from .capacity import d_capacity_d_phir, d_capacity_d_tau, ergodic_capacity
from .mc import finite_difference, mc_capacity, mc_outage
from .optimizer import b_bar0, optimal_power
from .sensing import sensing_outcome, threshold_from_kappa
from .specfun import t_func

__all__ = ["CheckResult", "run_all_checks", "random_feasible_points"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def random_feasible_points(scenario, count, seed, tau_span=(0.05, 0.95)):
    """Deterministic sample of feasible (P, phi_t, phi_r, tau, xi) tuples.

    tau stays away from the interval ends so finite differences in tau are
    well conditioned; P is log-uniform; xi sits at a random position inside
    the concavity window of phi_t.
    """
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    theta = scenario.geometry.theta
    half = scenario.pattern.phi_3db
    t_frame = scenario.frame.t_frame
    points = []
    for _ in range(count):
        phi_t = theta + rng.uniform(-half, half)
        phi_r = math.pi + theta + rng.uniform(-half, half)
        tau = t_frame * rng.uniform(*tau_span)
        p = float(10.0 ** rng.uniform(-1.0, 1.3))
        kappa = rng.uniform(0.1, 0.9)
        xi = threshold_from_kappa(scenario, phi_t, kappa)
        points.append((p, float(phi_t), float(phi_r), float(tau), float(xi)))
    return points


def _capacity_vs_mc(scenario, seed, n_samples, count=20):
    points = random_feasible_points(scenario, count, seed)
    worst = 0.0
    for i, (p, phi_t, phi_r, tau, xi) in enumerate(points):
        closed = ergodic_capacity(scenario, p, phi_t, phi_r, tau, xi)
        est = mc_capacity(scenario, p, phi_t, phi_r, tau, xi, n_samples, seed + i)
        if est.std_error > 0.0:
            worst = max(worst, abs(closed - est.mean) / est.std_error)
    return CheckResult(
        name="capacity-closed-form-vs-monte-carlo",
        passed=worst <= 3.0,
        detail=f"max |closed - mc| = {worst:.2f} standard errors over {count} points",
    )


def _outage_vs_mc(scenario, seed, n_samples, count=10):
    points = random_feasible_points(scenario, count - 1, seed + 1000)
    worst = 0.0
    checked = 0
    eps_hit = None
    for i, (p, phi_t, phi_r, tau, xi) in enumerate(points):
        out = sensing_outcome(scenario, phi_t, tau, xi)
        bbar = b_bar0(scenario, out, phi_t)
        d_frac = (scenario.frame.t_frame - tau) / scenario.frame.t_frame
        closed = math.exp(-scenario.limits.i_pk / (d_frac * bbar * p)) if bbar > 0 else 0.0
        est = mc_outage(scenario, p, phi_t, out, tau, n_samples, seed + 2000 + i)
        if est.std_error > 0.0:
            worst = max(worst, abs(closed - est.mean) / est.std_error)
            checked += 1
    # the equality point: P chosen so the closed form equals epsilon exactly
    p, phi_t, phi_r, tau, xi = points[0]
    out = sensing_outcome(scenario, phi_t, tau, xi)
    bbar = b_bar0(scenario, out, phi_t)
    d_frac = (scenario.frame.t_frame - tau) / scenario.frame.t_frame
    p_eq = -scenario.limits.i_pk / (d_frac * bbar * math.log(scenario.limits.epsilon))
    est = mc_outage(scenario, p_eq, phi_t, out, tau, n_samples, seed + 3000)
    eps_hit = abs(est.mean - scenario.limits.epsilon) / est.std_error
    worst = max(worst, eps_hit)
    return CheckResult(
        name="outage-closed-form-vs-monte-carlo",
        passed=worst <= 3.0,
        detail=(f"max deviation {worst:.2f} standard errors over {checked + 1} points; "
                f"epsilon point off by {eps_hit:.2f} se"),
    )


def _derivatives_vs_fd(scenario, seed, count=10):
    points = random_feasible_points(scenario, count, seed + 5000)
    worst_tau = 0.0
    worst_phir = 0.0
    for p, phi_t, phi_r, tau, xi in points:
        ana = d_capacity_d_tau(scenario, p, phi_t, phi_r, tau, xi)
        fd = finite_difference(
            lambda t: ergodic_capacity(scenario, p, phi_t, phi_r, t, xi), tau, 1e-7)
        worst_tau = max(worst_tau, abs(ana - fd) / (max(abs(ana), abs(fd)) + 1e-9))
        ana = d_capacity_d_phir(scenario, p, phi_t, phi_r, tau, xi)
        fd = finite_difference(
            lambda v: ergodic_capacity(scenario, p, phi_t, v, tau, xi), phi_r, 1e-5)
        worst_phir = max(worst_phir, abs(ana - fd) / (max(abs(ana), abs(fd)) + 1e-9))
    ok = worst_tau <= 1e-4 and worst_phir <= 1e-5
    return CheckResult(
        name="analytic-derivatives-vs-finite-differences",
        passed=ok,
        detail=(f"max rel dev: d/dtau {worst_tau:.2e} (tol 1e-4), "
                f"d/dphi_r {worst_phir:.2e} (tol 1e-5) over {count} points"),
    )


def _fading_average_vs_quadrature(scenario, seed):
    from scipy.integrate import quad

    from .capacity import expected_c10_over_interference
    from .scenario import antenna_gain

    points = random_feasible_points(scenario, 5, seed + 7000)
    worst = 0.0
    for p, phi_t, phi_r, tau, xi in points:
        closed = ergodic_capacity(scenario, p, phi_t, phi_r, tau, xi)
        out = sensing_outcome(scenario, phi_t, tau, xi)
        geo = scenario.geometry
        pat = scenario.pattern
        gain_prod = (antenna_gain(pat, phi_t - geo.theta)
                     * antenna_gain(pat, phi_r - math.pi - geo.theta))
        coeff = scenario.l_ss * gain_prod * p / scenario.channels.sigma_n2
        sig_p2 = (scenario.primary.p_p * scenario.channels.gamma_ps * scenario.l_ps
                  * antenna_gain(pat, phi_r - geo.theta_pt_prime))
        y = scenario.channels.sigma_n2 / sig_p2
        mean = scenario.channels.gamma_ss
        d_frac = (scenario.frame.t_frame - tau) / scenario.frame.t_frame

        def integrand(g):
            c00 = math.log1p(coeff * g) / math.log(2.0)
            e_c10 = expected_c10_over_interference(1.0 / (coeff * g), y)
            return ((out.alpha0 * c00 + out.beta0 * e_c10)
                    * math.exp(-g / mean) / mean)

        val, _ = quad(integrand, 1e-300, 80.0 * mean, limit=400,
                      epsabs=1e-13, epsrel=1e-12)
        worst = max(worst, abs(closed - d_frac * val) / max(abs(closed), 1e-300))
    return CheckResult(
        name="fading-average-vs-adaptive-quadrature",
        passed=worst < 1e-8,
        detail=f"max relative deviation from adaptive quadrature: {worst:.2e}",
    )


def _sampler_moments(scenario, seed, n=10 ** 6):
    rng = np.random.Generator(np.random.Philox(key=int(seed + 9000)))
    mean = scenario.channels.gamma_ss
    draws = -mean * np.log1p(-rng.random(n))
    se = draws.std(ddof=1) / math.sqrt(n)
    mean_dev = abs(draws.mean() - mean) / se
    quantiles = np.array([0.1, 0.25, 0.5, 0.75, 0.9])
    kolmogorov = 1.63 / math.sqrt(n)
    cdf_dev = 0.0
    for q in quantiles:
        x_q = -mean * math.log1p(-q)
        cdf_dev = max(cdf_dev, abs(np.mean(draws <= x_q) - q))
    ok = mean_dev <= 4.0 and cdf_dev <= kolmogorov
    return CheckResult(
        name="exponential-sampler-statistics",
        passed=ok,
        detail=(f"mean off by {mean_dev:.2f} se; max CDF deviation {cdf_dev:.2e} "
                f"(bound {kolmogorov:.2e})"),
    )


def _seed_determinism(scenario, seed, n=10 ** 5):
    p, phi_t, phi_r, tau, xi = random_feasible_points(scenario, 1, seed + 11000)[0]
    a = mc_capacity(scenario, p, phi_t, phi_r, tau, xi, max(n, 1000), seed)
    b = mc_capacity(scenario, p, phi_t, phi_r, tau, xi, max(n, 1000), seed)
    ok = a == b
    return CheckResult(
        name="seed-determinism",
        passed=ok,
        detail="identical seeds reproduce identical estimates" if ok
        else f"estimates differ: {a} vs {b}",
    )


def _t_func_identity(seed):
    rng = np.random.Generator(np.random.Philox(key=int(seed + 13000)))
    zs = 10.0 ** rng.uniform(-1.0, np.log10(50.0), 50)
    worst = 0.0
    for z in zs:
        ana = t_func(z) + 1.0 / z
        h = z * 1e-6
        fd = (t_func(z + h) - t_func(z - h)) / (2.0 * h)
        worst = max(worst, abs(ana - fd) / max(abs(fd), 1e-300))
    return CheckResult(
        name="t-func-derivative-identity",
        passed=worst <= 1e-6,
        detail=f"max rel dev of T'(z) = T(z) + 1/z vs finite differences: {worst:.2e}",
    )


def run_all_checks(scenario, seed=20250809, mc_samples=10 ** 6):
    """Run every oracle cross-check; returns a list of CheckResult."""
    return [
        _capacity_vs_mc(scenario, seed, mc_samples),
        _outage_vs_mc(scenario, seed, mc_samples),
        _derivatives_vs_fd(scenario, seed),
        _fading_average_vs_quadrature(scenario, seed),
        _sampler_moments(scenario, seed),
        _seed_determinism(scenario, seed),
        _t_func_identity(seed),
    ]
