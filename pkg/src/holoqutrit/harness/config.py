"""Scenario configuration: a YAML file whose keys carry their units.

Every physical quantity is named with its unit suffix (``td_ns``,
``f01_ghz``, ...); values are converted to SI (s, Hz, rad/s) once, here.
"""

import copy
import math
from dataclasses import asdict, dataclass

import yaml

from holoqutrit.dynamics import DecoherenceParams

SCENARIOS = ("fig4", "phase-independence", "fig5", "fig6", "fig7", "rabi-ramsey")

DEFAULTS = {
    "device": {
        "f01_ghz": 7.529,
        "f12_ghz": 7.238,
        "fr_ghz": 5.1249,
        "g_over_2pi_mhz": 103.0,
        "q_loaded": 7000.0,
        "ec_over_h_mhz": 291.0,
        "t1_ns": 430.0,
        "t2_ns": 250.0,
    },
    "pulses": {
        "td_hol_ns": 6.5,
        "td_2ph_ns": 9.0,
        "lead_in_ns": 5.0,
        "gap_ns": 0.0,
        "tail_ns": 0.0,
    },
    "simulation": {
        "dt_ps": 1.0,
        "dt_lindblad_ps": 10.0,
        "record_every_ps": 250.0,
        "decoherence": False,
        "two_photon": "ideal",
        "coupling_ratio": math.sqrt(2.0),
        "t1_21_ns": None,
        "workers": 1,
        "seed": 0,
    },
    "sweep": {
        "points": 41,
        "fig4_phi01_rad": math.pi,
        "phase_check_abs_a": math.sin(math.pi / 8),
        "fig6_max_amplitude_rel": 1.0,
        "rabi_max_amplitude_rel": 1.6,
        "ramsey_detunings_mhz": [4.0, 6.0, 8.0, 10.0, 12.0],
        "ramsey_max_delay_ns": 400.0,
        "ramsey_delays": 401,
    },
}

# f01 - f12 must match the quoted anharmonicity within this (Hz)
ANHARMONICITY_TOL = 1e6


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DeviceParams:
    """Transmon parameters in SI units (Hz, s)."""

    f01: float = 7.529e9
    f12: float = 7.238e9
    fr: float = 5.1249e9
    g_over_2pi: float = 103e6
    Q: float = 7000.0
    EC_over_h: float = 291e6
    T1: float = 430e-9
    T2: float = 250e-9

    def __post_init__(self):
        if abs((self.f01 - self.f12) - self.EC_over_h) > ANHARMONICITY_TOL:
            raise ConfigError(
                f"f01 - f12 = {(self.f01 - self.f12) / 1e6:.3f} MHz disagrees with "
                f"EC/h = {self.EC_over_h / 1e6:.3f} MHz")
        if self.T1 <= 0 or self.T2 <= 0:
            raise ConfigError("coherence times must be positive")

    @property
    def delta(self):
        """Intermediate-level detuning of the two-photon drive, rad/s."""
        return 2 * math.pi * (self.f01 - self.f12) / 2

    @classmethod
    def from_section(cls, d):
        return cls(f01=d["f01_ghz"] * 1e9, f12=d["f12_ghz"] * 1e9, fr=d["fr_ghz"] * 1e9,
                   g_over_2pi=d["g_over_2pi_mhz"] * 1e6, Q=d["q_loaded"],
                   EC_over_h=d["ec_over_h_mhz"] * 1e6, T1=d["t1_ns"] * 1e-9,
                   T2=d["t2_ns"] * 1e-9)


@dataclass(frozen=True)
class ScenarioConfig:
    """Resolved settings for one scenario run (SI units)."""

    scenario: str
    device: DeviceParams
    td_hol: float
    td_2ph: float
    lead_in: float
    gap: float
    tail: float
    dt: float
    dt_lindblad: float
    record_every: float
    decoherence: bool
    two_photon: str
    coupling_ratio: float
    t1_21: float | None
    workers: int
    points: int
    raw: dict

    @property
    def decoherence_params(self):
        if not self.decoherence:
            return DecoherenceParams.closed()
        return DecoherenceParams.from_t1_t2(self.device.T1, self.device.T2, self.t1_21)

    @property
    def step(self):
        return self.dt_lindblad if self.decoherence else self.dt

    def sweep(self, key):
        return self.raw["sweep"][key]

    def with_overrides(self, **kw):
        raw = copy.deepcopy(self.raw)
        for key, val in kw.items():
            for section in raw.values():
                if isinstance(section, dict) and key in section:
                    section[key] = val
                    break
            else:
                raise ConfigError(f"unknown setting {key!r}")
        return resolve(self.scenario, raw)


def _merge(base, override, path=""):
    out = copy.deepcopy(base)
    for key, val in override.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key {where!r}")
        if isinstance(base[key], dict):
            if not isinstance(val, dict):
                raise ConfigError(f"{where!r} must be a mapping")
            out[key] = _merge(base[key], val, where + ".")
        else:
            out[key] = val
    return out


def _number(raw, section, key, positive=False, allow_zero=True):
    val = raw[section][key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{section}.{key} must be a number, got {val!r}")
    if positive and not (val > 0 or (allow_zero and val == 0)):
        raise ConfigError(f"{section}.{key} must be {'non-negative' if allow_zero else 'positive'}")
    return float(val)


def resolve(scenario, raw):
    """Validate a merged raw config mapping and convert it to SI."""
    if scenario not in SCENARIOS and scenario is not None:
        raise KeyError(scenario)
    try:
        for key in DEFAULTS["device"]:
            _number(raw, "device", key, positive=True, allow_zero=False)
        device = DeviceParams.from_section(raw["device"])
        p, s = raw["pulses"], raw["simulation"]
        td_hol = _number(raw, "pulses", "td_hol_ns", True, False) * 1e-9
        td_2ph = _number(raw, "pulses", "td_2ph_ns", True, False) * 1e-9
        for key in ("lead_in_ns", "gap_ns", "tail_ns"):
            _number(raw, "pulses", key, positive=True)
        dt = _number(raw, "simulation", "dt_ps", True, False) * 1e-12
        dt_l = _number(raw, "simulation", "dt_lindblad_ps", True, False) * 1e-12
        rec = _number(raw, "simulation", "record_every_ps", True) * 1e-12
        two_photon = str(s["two_photon"]).lower()
        if two_photon not in ("ideal", "ladder"):
            raise ConfigError(f"simulation.two_photon must be 'ideal' or 'ladder', got {two_photon!r}")
        if not isinstance(s["decoherence"], bool):
            raise ConfigError("simulation.decoherence must be true or false")
        t1_21 = s["t1_21_ns"]
        if t1_21 is not None:
            t1_21 = _number(raw, "simulation", "t1_21_ns", True, False) * 1e-9
        workers = int(s["workers"])
        points = int(raw["sweep"]["points"])
        if points < 1 or workers < 1:
            raise ConfigError("sweep.points and simulation.workers must be >= 1")
        return ScenarioConfig(
            scenario=scenario, device=device, td_hol=td_hol, td_2ph=td_2ph,
            lead_in=p["lead_in_ns"] * 1e-9, gap=p["gap_ns"] * 1e-9, tail=p["tail_ns"] * 1e-9,
            dt=dt, dt_lindblad=dt_l, record_every=rec, decoherence=s["decoherence"],
            two_photon=two_photon,
            coupling_ratio=_number(raw, "simulation", "coupling_ratio", True, False),
            t1_21=t1_21, workers=workers, points=points, raw=raw)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load_config(scenario=None, path=None, overrides=None):
    """Defaults, then the YAML file at ``path``, then ``overrides`` (same nesting)."""
    raw = copy.deepcopy(DEFAULTS)
    if path is not None:
        try:
            with open(path) as fh:
                data = yaml.safe_load(fh) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config root must be a mapping")
        raw = _merge(raw, data)
    if overrides:
        raw = _merge(raw, overrides)
    return resolve(scenario, raw)


def default_config_text():
    return yaml.safe_dump(DEFAULTS, sort_keys=False)


def manifest_dict(cfg):
    d = copy.deepcopy(cfg.raw)
    d["resolved_si"] = {k: v for k, v in asdict(cfg).items() if k not in ("raw", "device")}
    d["resolved_si"]["device"] = asdict(cfg.device)
    return d
