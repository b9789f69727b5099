"""Scenario configuration: flat key-value text files with SI unit suffixes.

The dialect is one `key = value` pair per line, `#` comments, blank lines
ignored. Numeric keys carry their SI unit as a suffix (_m, _s, _J,
_rad_per_s); dimensionless keys carry none. Unknown keys are rejected.
An empty file yields the reference scenario: a red transition at 719 nm
with a 1.6 ns lifetime and tenfold inhomogeneous broadening, driven by
453 Gaussian pulses of width 10 carriers (38 as), period 33.6 fs, and
0.7 nJ each, focused at numerical aperture 0.1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .constants import C_LIGHT
from .errors import ConfigError
from .excitation import PulseTrainConfig, TwoLevelSystem
from .focal import FocusingGeometry
from .spectra import make_gaussian_spectrum

_W0_DEFAULT = 2.0 * np.pi * C_LIGHT / 719e-9


@dataclass(frozen=True)
class ScenarioConfig:
    carrier_frequency_rad_per_s: float = _W0_DEFAULT
    spectral_width_rad_per_s: float = 10.0 * _W0_DEFAULT
    focal_radius_m: float = 0.01
    waist_m: float = 0.001
    transition_frequency_rad_per_s: float = _W0_DEFAULT
    spontaneous_rate_rad_per_s: float = 1.0 / 1.6e-9
    inhomogeneous_broadening_rad_per_s: float = 10.0 / 1.6e-9
    pulse_count: int = 453
    pulse_period_s: float = 33.6e-15
    pulse_energy_J: float = 0.7e-9
    output_dir: str = "out"
    grid_scale: float = 1.0
    figure_window_widths: float = 6.0

    def build(self):
        """Construct the validated physics objects of this scenario."""
        try:
            spectrum = make_gaussian_spectrum(
                self.carrier_frequency_rad_per_s, self.spectral_width_rad_per_s
            )
            geometry = FocusingGeometry(self.focal_radius_m, self.waist_m)
            tls = TwoLevelSystem(
                self.transition_frequency_rad_per_s,
                self.spontaneous_rate_rad_per_s,
                self.inhomogeneous_broadening_rad_per_s,
            )
            train = PulseTrainConfig(
                self.pulse_count, self.pulse_period_s, self.pulse_energy_J
            )
        except Exception as exc:
            raise ConfigError(f"invalid scenario: {exc}") from exc
        return spectrum, geometry, tls, train

    def serialize(self) -> str:
        lines = ["# pulsescope scenario"]
        for f in fields(self):
            lines.append(f"{f.name} = {getattr(self, f.name)!r}")
        return "\n".join(lines) + "\n"


_FIELD_TYPES = {f.name: f.type for f in fields(ScenarioConfig)}


def _parse_value(key: str, raw: str):
    if key == "output_dir":
        return raw.strip().strip("'\"")
    if key == "pulse_count":
        try:
            value = int(raw)
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: expected an integer, got {raw!r}") from exc
        if value < 0:
            raise ConfigError(f"key {key!r}: must be >= 0, got {value}")
        return value
    try:
        value = float(raw)
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected a number, got {raw!r}") from exc
    if not np.isfinite(value):
        raise ConfigError(f"key {key!r}: must be finite, got {raw!r}")
    if key.endswith(("_m", "_s", "_J", "_rad_per_s")) or key in (
            "grid_scale", "figure_window_widths"):
        if value <= 0:
            raise ConfigError(f"key {key!r}: must be positive, got {value}")
    return value


def loads_config(text: str) -> ScenarioConfig:
    overrides = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _FIELD_TYPES:
            suffix_hint = ""
            base = key.rsplit("_", 1)[0]
            for known in _FIELD_TYPES:
                if known.startswith(base):
                    suffix_hint = f" (did you mean {known!r}? unit suffixes are part of the key)"
                    break
            raise ConfigError(f"line {lineno}: unknown key {key!r}{suffix_hint}")
        if key in overrides:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        overrides[key] = _parse_value(key, raw)
    cfg = ScenarioConfig(**overrides)
    cfg.build()  # re-validate all cross-type invariants at load
    return cfg


def load_config(path) -> ScenarioConfig:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    return loads_config(p.read_text())


def with_output_dir(cfg: ScenarioConfig, output_dir) -> ScenarioConfig:
    return replace(cfg, output_dir=str(output_dir))


@dataclass(frozen=True)
class ScenarioReport:
    """Quoted numbers of one scenario run plus provenance of emitted files."""

    eta: float
    p_e_focal: float
    imaging_rate_hz: float
    spot_intensity_m: float
    spot_excitation_m: float
    flags: dict
    curve_files: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "eta": self.eta,
                "p_e_focal": self.p_e_focal,
                "imaging_rate_hz": self.imaging_rate_hz,
                "spot_intensity_m": self.spot_intensity_m,
                "spot_excitation_m": self.spot_excitation_m,
                "flags": self.flags,
                "curve_files": self.curve_files,
            },
            indent=2, sort_keys=True,
        ) + "\n"
