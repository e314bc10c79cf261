"""System description: network geometry, antenna pattern, channel statistics,
primary-user model, frame parameters and constraint limits, plus the gain and
path-loss evaluators and the JSON config loader.

Angles are degrees in config files and radians everywhere else; conversion
happens once at the ingestion boundary.  Peak power and interference limits
may be given either as linear watts (a number) or as a string like "10 dB"
(referenced to 1 W); they are stored linear.
"""

import json
import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "ScenarioError",
    "NetworkGeometry",
    "AntennaPattern",
    "ChannelStats",
    "PrimaryModel",
    "FrameParams",
    "Limits",
    "Scenario",
    "normalize_angle",
    "antenna_gain",
    "antenna_gain_slope",
    "path_loss",
    "combined_gain",
    "load_scenario",
    "scenario_from_mapping",
    "baseline_mapping",
]

_LN2 = math.log(2.0)


class ScenarioError(ValueError):
    """Raised when a scenario file or mapping violates the schema."""


def normalize_angle(angle):
    """Wrap an angle (rad) into (-pi, pi]."""
    a = np.remainder(np.asarray(angle, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    a = np.where(a == -np.pi, np.pi, a)
    return float(a) if a.ndim == 0 else a


@dataclass(frozen=True)
class NetworkGeometry:
    """Orientations (rad, wrapped to (-pi, pi]) and distances (m)."""

    theta: float            # SU_rx seen from SU_tx
    theta_pt: float         # PU_tx seen from SU_tx
    theta_pr: float         # PU_rx seen from SU_tx
    theta_pt_prime: float   # PU_tx seen from SU_rx
    d_ss: float = 1.0
    d_ps: float = 1.0
    d_stpt: float = 1.0
    d_sp: float = 1.0
    d0: float = 1.0
    nu: float = 0.0

    def __post_init__(self):
        for name in ("d_ss", "d_ps", "d_stpt", "d_sp", "d0"):
            if not getattr(self, name) > 0.0:
                raise ScenarioError(f"geometry.{name} must be > 0")
        if self.nu < 0.0:
            raise ScenarioError("geometry.nu must be >= 0")
        for name in ("theta", "theta_pt", "theta_pr", "theta_pt_prime"):
            object.__setattr__(self, name, normalize_angle(getattr(self, name)))


@dataclass(frozen=True)
class AntennaPattern:
    """Single-lobe gain A(phi) = a1 + a0*exp(-ln2*(phi/phi_3db)^2), linear."""

    a0: float
    a1: float
    phi_3db: float  # half-power beam-width, rad

    # shape constant of the exponent; fixed by the half-power construction
    b = _LN2

    def __post_init__(self):
        if not self.a0 > 0.0:
            raise ScenarioError("pattern.a0 must be > 0")
        if self.a1 < 0.0:
            raise ScenarioError("pattern.a1 must be >= 0")
        if not 0.0 < self.phi_3db < np.pi:
            raise ScenarioError("pattern.phi_3db must be in (0, pi)")


@dataclass(frozen=True)
class ChannelStats:
    """Means of the exponential fading power gains and the noise power."""

    gamma_ss: float = 1.0
    gamma_sp: float = 1.0
    gamma_ps: float = 1.0
    gamma_stpt: float = 1.0
    sigma_n2: float = 1.0

    def __post_init__(self):
        for name in ("gamma_ss", "gamma_sp", "gamma_ps", "gamma_stpt", "sigma_n2"):
            if not getattr(self, name) > 0.0:
                raise ScenarioError(f"channels.{name} must be > 0")


@dataclass(frozen=True)
class PrimaryModel:
    """Primary transmitter average power and idle/busy priors."""

    p_p: float
    pi0: float
    pi1: float

    def __post_init__(self):
        if not self.p_p > 0.0:
            raise ScenarioError("primary.p_p must be > 0")
        if not (0.0 < self.pi0 < 1.0 and 0.0 < self.pi1 < 1.0):
            raise ScenarioError("primary.pi0 and primary.pi1 must be in (0, 1)")
        if abs(self.pi0 + self.pi1 - 1.0) > 1e-12:
            raise ScenarioError("primary.pi0 + primary.pi1 must equal 1")


@dataclass(frozen=True)
class FrameParams:
    """Frame length (s) and sampling frequency (Hz)."""

    t_frame: float
    f_s: float

    def __post_init__(self):
        if not self.t_frame > 0.0:
            raise ScenarioError("frame.t_frame must be > 0")
        if not self.f_s > 0.0:
            raise ScenarioError("frame.f_s must be > 0")


@dataclass(frozen=True)
class Limits:
    """Peak transmit power, interference threshold (both linear watts) and
    the maximum interference outage probability."""

    p_pk: float
    i_pk: float
    epsilon: float

    def __post_init__(self):
        if not self.p_pk > 0.0:
            raise ScenarioError("limits.p_pk must be > 0")
        if not self.i_pk > 0.0:
            raise ScenarioError("limits.i_pk must be > 0")
        if not 0.0 < self.epsilon < 1.0:
            raise ScenarioError("limits.epsilon must be in (0, 1)")


@dataclass(frozen=True)
class Scenario:
    """Immutable full system description."""

    geometry: NetworkGeometry
    pattern: AntennaPattern
    channels: ChannelStats
    primary: PrimaryModel
    frame: FrameParams
    limits: Limits

    @property
    def l_ss(self):
        return path_loss(self.geometry.d_ss, self.geometry.d0, self.geometry.nu)

    @property
    def l_ps(self):
        return path_loss(self.geometry.d_ps, self.geometry.d0, self.geometry.nu)

    @property
    def l_stpt(self):
        return path_loss(self.geometry.d_stpt, self.geometry.d0, self.geometry.nu)

    @property
    def l_sp(self):
        return path_loss(self.geometry.d_sp, self.geometry.d0, self.geometry.nu)

    def replace_field(self, section, **kw):
        """New scenario with one section's fields replaced (radians/watts)."""
        return replace(self, **{section: replace(getattr(self, section), **kw)})


def antenna_gain(pattern, offset):
    """Linear gain at an angular offset (rad) from boresight.

    The offset wraps into (-pi, pi] so the single lobe behaves under
    optimization near +-pi; the gain is even in the offset.
    """
    off = normalize_angle(offset)
    return pattern.a1 + pattern.a0 * np.exp(-_LN2 * (off / pattern.phi_3db) ** 2)


def antenna_gain_slope(pattern, offset):
    """Derivative of antenna_gain with respect to the offset (rad)."""
    off = normalize_angle(offset)
    lobe = pattern.a0 * np.exp(-_LN2 * (off / pattern.phi_3db) ** 2)
    return -2.0 * _LN2 * off / pattern.phi_3db ** 2 * lobe


def path_loss(d, d0, nu):
    """Linear attenuation (d0/d)^nu."""
    if not d > 0.0 or not d0 > 0.0:
        raise ScenarioError("path_loss requires d > 0 and d0 > 0")
    return (d0 / d) ** nu


def combined_gain(pattern, theta, phi_t, phi_r):
    """Product gain A(phi_t - theta) * A(phi_r - pi - theta) of the two
    secondary antennas along the SU_tx -> SU_rx link."""
    return antenna_gain(pattern, phi_t - theta) * antenna_gain(pattern, phi_r - np.pi - theta)


# --------------------------------------------------------------------------
# config ingestion

def baseline_mapping():
    """Baseline parameter tree (the published operating point).

    Distances default to d0 (all path losses 1) since no distances are
    published; the PU_tx orientation seen from SU_tx is likewise
    unpublished and defaults to -30 deg, which keeps the sensing
    trade-off active at the default geometry.
    """
    return {
        "geometry": {
            "theta": 50.0,
            "theta_pt": -30.0,
            "theta_pr": 90.0,
            "theta_pt_prime": 130.0,
            "d_ss": 1.0,
            "d_ps": 1.0,
            "d_stpt": 1.0,
            "d_sp": 1.0,
            "d0": 1.0,
            "nu": 0.0,
        },
        "pattern": {"a0": 9.8, "a1": 0.2, "phi_3db": 30.0},
        "channels": {
            "gamma_ss": 1.0,
            "gamma_sp": 1.0,
            "gamma_ps": 1.0,
            "gamma_stpt": 1.0,
            "sigma_n2": 1.0,
        },
        "primary": {"p_p": 0.4, "pi1": 0.3},
        "frame": {"t_frame": 0.010, "f_s": 20000.0},
        "limits": {"p_pk": "10 dB", "i_pk": "2 dB", "epsilon": 0.05},
    }


def _require_number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _power_watts(value, where):
    """Linear watts from a number, or from a '<x> dB' string (re 1 W)."""
    if isinstance(value, str):
        text = value.strip().lower()
        if not text.endswith("db"):
            raise ScenarioError(f"{where}: string values must look like '10 dB'")
        try:
            db = float(text[:-2].strip())
        except ValueError:
            raise ScenarioError(f"{where}: cannot parse dB value {value!r}") from None
        return 10.0 ** (db / 10.0)
    return _require_number(value, where)


def _check_keys(section, tree, allowed):
    unknown = set(tree) - set(allowed)
    if unknown:
        name = sorted(unknown)[0]
        raise ScenarioError(f"unknown key '{section}.{name}'" if section else f"unknown key '{name}'")


def scenario_from_mapping(tree):
    """Validated Scenario from a JSON-compatible key/value tree.

    Omitted fields take the baseline defaults; unknown keys are a hard
    error; every type invariant is checked and the violated one named.
    """
    if not isinstance(tree, dict):
        raise ScenarioError("scenario config must be a JSON object")
    base = baseline_mapping()
    _check_keys("", tree, base)
    merged = {}
    for section, defaults in base.items():
        given = tree.get(section, {})
        if not isinstance(given, dict):
            raise ScenarioError(f"'{section}' must be a JSON object")
        allowed = {"p_p", "pi0", "pi1"} if section == "primary" else set(defaults)
        _check_keys(section, given, allowed)
        merged[section] = {**defaults, **given}

    geo = merged["geometry"]
    geometry = NetworkGeometry(
        theta=math.radians(_require_number(geo["theta"], "geometry.theta")),
        theta_pt=math.radians(_require_number(geo["theta_pt"], "geometry.theta_pt")),
        theta_pr=math.radians(_require_number(geo["theta_pr"], "geometry.theta_pr")),
        theta_pt_prime=math.radians(
            _require_number(geo["theta_pt_prime"], "geometry.theta_pt_prime")),
        d_ss=_require_number(geo["d_ss"], "geometry.d_ss"),
        d_ps=_require_number(geo["d_ps"], "geometry.d_ps"),
        d_stpt=_require_number(geo["d_stpt"], "geometry.d_stpt"),
        d_sp=_require_number(geo["d_sp"], "geometry.d_sp"),
        d0=_require_number(geo["d0"], "geometry.d0"),
        nu=_require_number(geo["nu"], "geometry.nu"),
    )
    pat = merged["pattern"]
    pattern = AntennaPattern(
        a0=_require_number(pat["a0"], "pattern.a0"),
        a1=_require_number(pat["a1"], "pattern.a1"),
        phi_3db=math.radians(_require_number(pat["phi_3db"], "pattern.phi_3db")),
    )
    ch = merged["channels"]
    channels = ChannelStats(**{k: _require_number(ch[k], f"channels.{k}") for k in ch})

    pri_given = tree.get("primary", {})
    p_p = _require_number(merged["primary"]["p_p"], "primary.p_p")
    if "pi0" in pri_given and "pi1" in pri_given:
        pi0 = _require_number(pri_given["pi0"], "primary.pi0")
        pi1 = _require_number(pri_given["pi1"], "primary.pi1")
    elif "pi0" in pri_given:
        pi0 = _require_number(pri_given["pi0"], "primary.pi0")
        pi1 = 1.0 - pi0
    else:
        pi1 = _require_number(merged["primary"]["pi1"], "primary.pi1")
        pi0 = 1.0 - pi1
    primary = PrimaryModel(p_p=p_p, pi0=pi0, pi1=pi1)
    fr = merged["frame"]
    frame = FrameParams(
        t_frame=_require_number(fr["t_frame"], "frame.t_frame"),
        f_s=_require_number(fr["f_s"], "frame.f_s"),
    )
    lim = merged["limits"]
    limits = Limits(
        p_pk=_power_watts(lim["p_pk"], "limits.p_pk"),
        i_pk=_power_watts(lim["i_pk"], "limits.i_pk"),
        epsilon=_require_number(lim["epsilon"], "limits.epsilon"),
    )
    return Scenario(geometry, pattern, channels, primary, frame, limits)


def load_scenario(path):
    """Load and validate a scenario from a JSON config file."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return scenario_from_mapping(tree)
