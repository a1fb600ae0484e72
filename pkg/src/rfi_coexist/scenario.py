"""Scenario loading, unit normalization, and the sectorized antenna gain model.

All quantities are stored in SI base units (meters, hertz, watts, kelvin,
radians, linear power ratios). Config files may declare values in the more
convenient field units (km, GHz, dB, degrees); the unit is carried in the
key suffix and conversion happens once, at the load boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Any, Mapping

import yaml

from .errors import AlphaRangeError, ConfigError

BOLTZMANN_J_PER_K = 1.380649e-23


@dataclass(frozen=True)
class GainModel:
    """Two-level sectorized antenna gain: a constant main-lobe gain inside
    the half-beamwidth, a constant side-lobe gain outside. Gains are linear
    power ratios; the main-lobe sector boundary is inclusive."""

    main_lobe_gain: float
    side_lobe_gain: float
    half_beamwidth: float  # radians

    def __post_init__(self):
        if not (self.main_lobe_gain > 0 and self.side_lobe_gain > 0):
            raise ConfigError("antenna gains must be positive linear ratios")
        if not (0 < self.half_beamwidth < math.pi / 2):
            raise ConfigError("half_beamwidth must lie in (0, pi/2) radians")


@dataclass(frozen=True)
class Scenario:
    """Full physical parameter set for one run, normalized to SI base units.

    Immutable after construction; safe to share across threads.
    """

    cluster_intensity: float  # clusters per m^2
    bs_intensity: float  # mean base stations per cluster
    path_loss_exponent: float
    tx_power: float  # W per base station
    carrier_frequency: float  # Hz
    bandwidth: float  # Hz
    light_speed: float  # m/s
    boltzmann: float  # J/K
    earth_radius: float  # m
    sat_center_distance: float  # m, satellite distance from Earth's center
    incidence_angle: float  # rad, boresight incidence geometry
    footprint_area: float  # m^2, main-lobe footprint
    gain: GainModel
    rfi_threshold: float = 1.3  # K

    def __post_init__(self):
        positives = {
            "tx_power": self.tx_power,
            "carrier_frequency": self.carrier_frequency,
            "bandwidth": self.bandwidth,
            "light_speed": self.light_speed,
            "boltzmann": self.boltzmann,
            "earth_radius": self.earth_radius,
            "sat_center_distance": self.sat_center_distance,
            "incidence_angle": self.incidence_angle,
            "footprint_area": self.footprint_area,
            "rfi_threshold": self.rfi_threshold,
        }
        for name, value in positives.items():
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a finite positive number, got {value!r}")
        # Zero intensities are legal (empty process / empty clusters).
        for name, value in (("cluster_intensity", self.cluster_intensity),
                            ("bs_intensity", self.bs_intensity)):
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
                raise ConfigError(f"{name} must be >= 0, got {value!r}")
        if self.path_loss_exponent <= 2:
            raise AlphaRangeError(self.path_loss_exponent)
        if not self.sat_center_distance > self.earth_radius:
            raise ConfigError("sat_center_distance must exceed earth_radius")
        if not math.isfinite(self.tx_power / (self.boltzmann * self.bandwidth)):
            raise ConfigError("tx_power / (boltzmann * bandwidth) is not finite")


def eta(s: Scenario) -> float:
    """Transmit power as a brightness temperature: p_tx / (k_b * beta), in K."""
    return s.tx_power / (s.boltzmann * s.bandwidth)


def omega(s: Scenario) -> float:
    """Free-space path-loss length scale c / (4 pi f), in meters."""
    return s.light_speed / (4.0 * math.pi * s.carrier_frequency)


def antenna_gain(gm: GainModel, deviation: float) -> float:
    """Linear gain for a given angular deviation from the main-lobe axis."""
    return gm.main_lobe_gain if abs(deviation) <= gm.half_beamwidth else gm.side_lobe_gain


def power_to_temperature(s: Scenario, power: float) -> float:
    """Nyquist conversion of received power (W) to brightness temperature (K)."""
    if power < 0:
        raise ConfigError(f"power must be >= 0, got {power!r}")
    return power / (s.boltzmann * s.bandwidth)


# --- config document handling -------------------------------------------------

# (section, logical field) -> {accepted key: multiplier to SI}
_FIELD_UNITS: dict[tuple[str, str], dict[str, float]] = {
    ("network", "cluster_intensity"): {
        "cluster_intensity_per_m2": 1.0,
        "cluster_intensity_per_km2": 1e-6,
    },
    ("network", "bs_intensity"): {"bs_intensity": 1.0},
    ("network", "path_loss_exponent"): {"path_loss_exponent": 1.0},
    ("network", "tx_power"): {"tx_power_w": 1.0},
    ("network", "carrier_frequency"): {
        "carrier_frequency_hz": 1.0,
        "carrier_frequency_mhz": 1e6,
        "carrier_frequency_ghz": 1e9,
    },
    ("network", "bandwidth"): {"bandwidth_hz": 1.0, "bandwidth_mhz": 1e6},
    ("physics", "light_speed"): {
        "light_speed_m_per_s": 1.0,
        "light_speed_km_per_s": 1e3,
    },
    ("physics", "boltzmann"): {"boltzmann_j_per_k": 1.0},
    ("physics", "earth_radius"): {"earth_radius_m": 1.0, "earth_radius_km": 1e3},
    ("satellite", "sat_center_distance"): {
        "center_distance_m": 1.0,
        "center_distance_km": 1e3,
    },
    ("satellite", "incidence_angle"): {
        "incidence_angle_rad": 1.0,
        "incidence_angle_deg": math.pi / 180.0,
    },
    ("satellite", "footprint_area"): {
        "footprint_area_m2": 1.0,
        "footprint_area_km2": 1e6,
    },
    ("satellite", "rfi_threshold"): {"rfi_threshold_k": 1.0},
}

_GAIN_FIELDS: dict[str, dict[str, str]] = {
    "main_lobe_gain": {"main_lobe_gain_linear": "linear", "main_lobe_gain_db": "db"},
    "side_lobe_gain": {"side_lobe_gain_linear": "linear", "side_lobe_gain_db": "db"},
    "half_beamwidth": {"half_beamwidth_rad": "rad", "half_beamwidth_deg": "deg"},
}

# Default parameter set: SMAP-like L-band radiometer over a clustered
# terrestrial network; one cluster per 10^4 km^2, 100 BSs per cluster,
# 3.5 W per BS at 1.413 GHz / 24 MHz, 685 km altitude, 40 deg incidence,
# (40 km)^2 footprint, 0 dB / -55 dB sectorized gains, 1.3 K threshold.
DEFAULTS: dict[str, dict[str, float]] = {
    "network": {
        "cluster_intensity_per_km2": 1e-4,
        "bs_intensity": 100.0,
        "path_loss_exponent": 2.0001,
        "tx_power_w": 3.5,
        "carrier_frequency_ghz": 1.413,
        "bandwidth_mhz": 24.0,
    },
    "physics": {
        "light_speed_m_per_s": 3.0e8,
        "boltzmann_j_per_k": BOLTZMANN_J_PER_K,
        "earth_radius_km": 6371.0,
    },
    "satellite": {
        "center_distance_km": 7056.0,
        "incidence_angle_deg": 40.0,
        "footprint_area_km2": 1600.0,
        "rfi_threshold_k": 1.3,
    },
    "gain": {
        "main_lobe_gain_db": 0.0,
        "side_lobe_gain_db": -55.0,
        "half_beamwidth_deg": 1.2,
    },
}

_SECTIONS = ("network", "physics", "satellite", "gain")


def _as_number(section: str, key: str, raw: Any) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(f"{section}.{key}: expected a number, got {raw!r}")
    return float(raw)


def _pick(section: str, given: Mapping[str, Any], accepted: Mapping[str, float],
          field: str) -> float:
    """Resolve one logical field from its unit-suffixed variants."""
    present = [k for k in accepted if k in given]
    if len(present) > 1:
        raise ConfigError(f"{section}: conflicting keys {present} for {field}")
    if present:
        key = present[0]
        return _as_number(section, key, given[key]) * accepted[key]
    defaults = DEFAULTS[section]
    for key, mult in accepted.items():
        if key in defaults:
            return float(defaults[key]) * mult
    raise ConfigError(f"{section}: missing required field {field}")


def load_scenario(source: Mapping[str, Any] | None = None) -> Scenario:
    """Build a Scenario from a (possibly partial) config mapping.

    Missing fields fall back to the documented defaults; unknown keys are
    rejected so typos do not silently revert to defaults.
    """
    doc = dict(source or {})
    unknown_sections = set(doc) - set(_SECTIONS)
    if unknown_sections:
        raise ConfigError(f"unknown config sections: {sorted(unknown_sections)}")
    sections: dict[str, Mapping[str, Any]] = {}
    for name in _SECTIONS:
        sec = doc.get(name, {})
        if sec is None:
            sec = {}
        if not isinstance(sec, Mapping):
            raise ConfigError(f"section {name!r} must be a mapping")
        sections[name] = sec

    known_keys: dict[str, set[str]] = {name: set() for name in _SECTIONS}
    for (section, _field), accepted in _FIELD_UNITS.items():
        known_keys[section].update(accepted)
    known_keys["gain"].update(k for variants in _GAIN_FIELDS.values() for k in variants)
    for name in _SECTIONS:
        bad = set(sections[name]) - known_keys[name]
        if bad:
            raise ConfigError(f"unknown keys in section {name!r}: {sorted(bad)}")

    values: dict[str, float] = {}
    for (section, field), accepted in _FIELD_UNITS.items():
        values[field] = _pick(section, sections[section], accepted, field)

    gain_values: dict[str, float] = {}
    gsec = sections["gain"]
    for field, variants in _GAIN_FIELDS.items():
        present = [k for k in variants if k in gsec]
        if len(present) > 1:
            raise ConfigError(f"gain: conflicting keys {present} for {field}")
        if present:
            key = present[0]
            raw = _as_number("gain", key, gsec[key])
        else:
            key = next(k for k in variants if k in DEFAULTS["gain"])
            raw = float(DEFAULTS["gain"][key])
        kind = variants[key]
        if kind == "db":
            gain_values[field] = 10.0 ** (raw / 10.0)
        elif kind == "deg":
            gain_values[field] = raw * math.pi / 180.0
        else:
            gain_values[field] = raw

    return Scenario(gain=GainModel(**gain_values), **values)


def load_scenario_file(path: str) -> Scenario:
    """Load a Scenario from a YAML config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path!r}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed scenario file {path!r}: {exc}") from exc
    if doc is None:
        doc = {}
    if not isinstance(doc, Mapping):
        raise ConfigError(f"scenario file {path!r} must contain a mapping")
    return load_scenario(doc)


def dump_scenario(s: Scenario) -> dict[str, dict[str, float]]:
    """Emit a Scenario as a config mapping in SI base units.

    Loading the result reproduces the Scenario exactly (unit round-trip).
    """
    return {
        "network": {
            "cluster_intensity_per_m2": s.cluster_intensity,
            "bs_intensity": s.bs_intensity,
            "path_loss_exponent": s.path_loss_exponent,
            "tx_power_w": s.tx_power,
            "carrier_frequency_hz": s.carrier_frequency,
            "bandwidth_hz": s.bandwidth,
        },
        "physics": {
            "light_speed_m_per_s": s.light_speed,
            "boltzmann_j_per_k": s.boltzmann,
            "earth_radius_m": s.earth_radius,
        },
        "satellite": {
            "center_distance_m": s.sat_center_distance,
            "incidence_angle_rad": s.incidence_angle,
            "footprint_area_m2": s.footprint_area,
            "rfi_threshold_k": s.rfi_threshold,
        },
        "gain": {
            "main_lobe_gain_linear": s.gain.main_lobe_gain,
            "side_lobe_gain_linear": s.gain.side_lobe_gain,
            "half_beamwidth_rad": s.gain.half_beamwidth,
        },
    }


def with_overrides(s: Scenario, **fields) -> Scenario:
    """Scenario copy with selected SI-unit fields replaced (sweep helper)."""
    return replace(s, **fields)
