"""Experiment sweeps over one scenario parameter, figure-style presets, and
CSV emission.

Two modes: `full-reoptimize` re-runs the requested optimizers at every swept
value; `evaluate-only` keeps the decision variables fixed (antennas pointed
at each other, sensing time at half the frame unless it is the swept
variable) with the transmit power still given by the closed-form rule, so a
sweep over tau traces the objective landscape itself.
"""

import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .capacity import ergodic_capacity
from .optimizer import (SearchConfig, b_bar0, optimal_power, optimize,
                        optimize_los, optimize_omni)
from .scenario import ScenarioError, normalize_angle
from .sensing import sensing_outcome, threshold_from_kappa

__all__ = [
    "SweepSpec",
    "SweepTable",
    "run_sweep",
    "emit_csv",
    "figure_names",
    "run_figure",
]

VARIABLES = ("tau", "epsilon", "theta", "p_p", "phi_3db", "p_pk")
MODES = ("evaluate-only", "full-reoptimize")
BASELINES = ("dir", "omni", "los")

THETA_GRID_DEG = tuple(np.linspace(0.0, 180.0, 19))


@dataclass(frozen=True)
class SweepSpec:
    """One swept variable, its ordered values, the mode, and which
    baselines to report."""

    variable: str
    values: tuple
    mode: str = "full-reoptimize"
    baselines: tuple = ("dir",)

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ScenarioError(f"unknown sweep variable '{self.variable}'")
        if self.mode not in MODES:
            raise ScenarioError(f"unknown sweep mode '{self.mode}'")
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ScenarioError("sweep values must be nonempty")
        diffs = np.diff(values)
        if not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ScenarioError("sweep values must be strictly monotone")
        baselines = tuple(self.baselines)
        if not baselines or any(b not in BASELINES for b in baselines):
            raise ScenarioError(f"baselines must be a nonempty subset of {BASELINES}")
        if len(set(baselines)) != len(baselines):
            raise ScenarioError("baselines must not repeat")
        if self.variable == "tau" and self.mode != "evaluate-only":
            raise ScenarioError("a tau sweep only makes sense in evaluate-only mode")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "baselines", baselines)


@dataclass(frozen=True)
class SweepTable:
    """Column names and one row per swept value."""

    header: tuple
    rows: tuple


def _check_value(scenario, variable, value):
    if variable == "tau" and not 0.0 < value < scenario.frame.t_frame:
        raise ScenarioError("swept tau values must lie in (0, t_frame)")
    if variable == "epsilon" and not 0.0 < value < 1.0:
        raise ScenarioError("swept epsilon values must lie in (0, 1)")
    if variable == "phi_3db" and not 0.0 < value < 180.0:
        raise ScenarioError("swept phi_3db values must lie in (0, 180) degrees")
    if variable in ("p_p", "p_pk") and not value > 0.0:
        raise ScenarioError(f"swept {variable} values must be > 0")


def _apply(scenario, variable, value):
    """Scenario with the swept variable set (degrees for angles)."""
    if variable == "theta":
        return scenario.replace_field("geometry", theta=math.radians(value))
    if variable == "phi_3db":
        return scenario.replace_field("pattern", phi_3db=math.radians(value))
    if variable == "epsilon":
        return scenario.replace_field("limits", epsilon=value)
    if variable == "p_pk":
        return scenario.replace_field("limits", p_pk=value)
    if variable == "p_p":
        return scenario.replace_field("primary", p_p=value)
    return scenario  # tau: decision variable, scenario unchanged


def _fixed_point_eval(scenario, tau, cfg, omni=False):
    """Capacity at the pinned LOS decisions with P from the power rule."""
    theta = scenario.geometry.theta
    phi_t = theta
    phi_r = math.pi + theta
    xi = threshold_from_kappa(scenario, phi_t, cfg.xi_kappa, omni=omni)
    out = sensing_outcome(scenario, phi_t, tau, xi, omni=omni)
    d_frac = (scenario.frame.t_frame - tau) / scenario.frame.t_frame
    bbar = b_bar0(scenario, out, phi_t, omni=omni)
    power, binding = optimal_power(out, bbar, d_frac, scenario.limits)
    cap = ergodic_capacity(scenario, power, phi_t, phi_r, tau, xi, omni=omni)
    return cap, phi_t, phi_r, power, binding


_OPTIMIZERS = {"dir": optimize, "omni": optimize_omni, "los": optimize_los}


def _baseline_columns(baseline):
    return (
        f"c_{baseline}",
        f"tau_{baseline}",
        f"phi_t_deg_{baseline}",
        f"phi_r_deg_{baseline}",
        f"p_{baseline}",
        f"binding_{baseline}",
        f"converged_{baseline}",
    )


def run_sweep(scenario, spec, search_config=None):
    """Sweep table with, per requested baseline, the capacity, the decision
    variables, the binding constraint and a convergence flag."""
    cfg = search_config or SearchConfig()
    for v in spec.values:
        _check_value(scenario, spec.variable, v)
    header = ("value",) + tuple(
        col for b in spec.baselines for col in _baseline_columns(b))
    rows = []
    for value in spec.values:
        sc = _apply(scenario, spec.variable, value)
        row = [value]
        for baseline in spec.baselines:
            if spec.mode == "full-reoptimize":
                res = _OPTIMIZERS[baseline](sc, cfg)
                row += [res.c_opt, res.tau_opt, math.degrees(res.phi_t_opt),
                        math.degrees(res.phi_r_opt), res.p_opt, res.binding,
                        res.converged]
            else:
                tau = value if spec.variable == "tau" else sc.frame.t_frame / 2.0
                cap, phi_t, phi_r, power, binding = _fixed_point_eval(
                    sc, tau, cfg, omni=(baseline == "omni"))
                row += [cap, tau, math.degrees(normalize_angle(phi_t)),
                        math.degrees(normalize_angle(phi_r)),
                        power, binding, True]
        rows.append(tuple(row))
    return SweepTable(header=header, rows=tuple(rows))


# --------------------------------------------------------------------------
# figure presets

def _theta_sweep_columns(scenario, cfg, variants):
    """Optimize at each theta for scenario variants (label, variable, value)
    and collect capacity + reported transmit-orientation columns."""
    header = ["theta_deg"]
    for label, _, _ in variants:
        header += [f"c_dir_{label}", f"phi_t_deg_{label}", f"converged_{label}"]
    rows = []
    for theta_deg in THETA_GRID_DEG:
        row = [theta_deg]
        base = _apply(scenario, "theta", theta_deg)
        for _, variable, value in variants:
            res = optimize(_apply(base, variable, value), cfg)
            row += [res.c_opt, math.degrees(res.phi_t_opt), res.converged]
        rows.append(tuple(row))
    return SweepTable(header=tuple(header), rows=tuple(rows))


def _fig2a(scenario, cfg):
    t_frame = scenario.frame.t_frame
    taus = np.linspace(t_frame / 400.0, 0.999 * t_frame, 80)
    powers = (0.1, 5.0, 15.0)
    header = ("tau_s",) + tuple(f"c_pp{p:g}" for p in powers)
    rows = []
    for tau in taus:
        row = [float(tau)]
        for p_p in powers:
            sc = _apply(scenario, "p_p", p_p)
            cap, *_ = _fixed_point_eval(sc, float(tau), cfg)
            row.append(cap)
        rows.append(tuple(row))
    return SweepTable(header=header, rows=tuple(rows))


def _fig2b(scenario, cfg):
    spec = SweepSpec(variable="epsilon",
                     values=tuple(np.linspace(0.025, 0.5, 20)),
                     mode="full-reoptimize", baselines=("dir",))
    return run_sweep(scenario, spec, cfg)


def _fig3a(scenario, cfg):
    variants = [(f"eps{e:g}", "epsilon", e) for e in (0.05, 0.1, 0.2)]
    return _theta_sweep_columns(scenario, cfg, variants)


def _fig3b(scenario, cfg):
    variants = [(f"bw{int(bw)}", "phi_3db", bw) for bw in (30.0, 45.0)]
    return _theta_sweep_columns(scenario, cfg, variants)


def _fig3c(scenario, cfg):
    spec = SweepSpec(variable="theta", values=THETA_GRID_DEG,
                     mode="full-reoptimize", baselines=("dir", "los", "omni"))
    return run_sweep(scenario, spec, cfg)


def _fig3d(scenario, cfg):
    pk_dbs = (6.0, 8.0)
    header = ["theta_deg"]
    for db in pk_dbs:
        header += [f"c_dir_ppk{db:g}db", f"c_omn_ppk{db:g}db",
                   f"ratio_d2o_ppk{db:g}db", f"converged_ppk{db:g}db"]
    rows = []
    for theta_deg in THETA_GRID_DEG:
        row = [theta_deg]
        base = _apply(scenario, "theta", theta_deg)
        for db in pk_dbs:
            sc = _apply(base, "p_pk", 10.0 ** (db / 10.0))
            dir_res = optimize(sc, cfg)
            omn_res = optimize_omni(sc, cfg)
            row += [dir_res.c_opt, omn_res.c_opt,
                    dir_res.c_opt / omn_res.c_opt,
                    dir_res.converged and omn_res.converged]
        rows.append(tuple(row))
    return SweepTable(header=tuple(header), rows=tuple(rows))


_FIGURES = {
    "fig2a": _fig2a,
    "fig2b": _fig2b,
    "fig3a": _fig3a,
    "fig3b": _fig3b,
    "fig3c": _fig3c,
    "fig3d": _fig3d,
}


def figure_names():
    return tuple(sorted(_FIGURES))


def run_figure(name, scenario, search_config=None):
    """Preset sweep reproducing one figure's structure."""
    if name not in _FIGURES:
        raise ScenarioError(f"unknown figure preset '{name}'")
    cfg = search_config or SearchConfig()
    return _FIGURES[name](scenario, cfg)


# --------------------------------------------------------------------------
# CSV emission

def _format_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return f"{value:.9g}"
    return str(value)


def emit_csv(table, path):
    """Write the table as RFC-4180-style CSV: header row, reals with nine
    significant digits, UTF-8, a newline after the final row.  The file is
    written atomically so failures never leave partial output."""
    lines = [",".join(table.header)]
    for row in table.rows:
        lines.append(",".join(_format_cell(v) for v in row))
    data = "\r\n".join(lines) + "\r\n"
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except Exception:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def table_any_nonconverged(table):
    """True when any convergence flag in the table is false."""
    flags = [i for i, name in enumerate(table.header) if name.startswith("converged")]
    return any(row[i] is False for row in table.rows for i in flags)
