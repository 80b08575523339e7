"""Run and sweep configuration, JSON loading and unit conversion."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np

from ..engine import DetuningMode, NoiseModel, SimConfig
from ..protocols import GateParams, Protocol

GATE_PRESETS = {
    "sqrtx": (math.pi / 2, 0.0, math.pi / 2),
    "tgate": (0.0, 0.0, math.pi / 4),
}
INITIAL_STATES = ("g", "e", "gx", "gy")
SWEEP_PARAMETERS = ("kappa", "delta", "delta_omega")
DEFAULT_SWEEPS = {
    "kappa": (0.0, 100.0, 21),
    "delta": (-0.2, 0.2, 21),
    "delta_omega": (-0.2, 0.2, 21),
}


class ConfigError(ValueError):
    """Invalid configuration; the CLI maps it to exit code 2."""


def rabi_khz_to_rad_s(rabi_khz: float) -> float:
    """Omega/2pi in kHz -> Omega in rad/s."""
    return 2 * math.pi * 1e3 * rabi_khz


def kappa_khz_to_per_s(kappa_khz: float) -> float:
    """Decay rates quoted in kHz are plain inverse time (no 2pi)."""
    return 1e3 * kappa_khz


def parse_gate(gate) -> tuple[float, float, float]:
    """Preset name or explicit ``(theta, phi, gamma)`` in radians."""
    if isinstance(gate, str):
        key = gate.strip().lower()
        if key in GATE_PRESETS:
            return GATE_PRESETS[key]
        parts = key.split(",")
    else:
        parts = list(gate)
    if len(parts) != 3:
        raise ConfigError(f"gate must be a preset {sorted(GATE_PRESETS)} or 'theta,phi,gamma', got {gate!r}")
    try:
        return tuple(float(x) for x in parts)
    except (TypeError, ValueError):
        raise ConfigError(f"cannot parse gate {gate!r}") from None


def parse_protocols(value) -> tuple[Protocol, ...]:
    items = value.split(",") if isinstance(value, str) else list(value)
    try:
        out = tuple(x if isinstance(x, Protocol) else Protocol(str(x).strip().upper())
                    for x in items if isinstance(x, Protocol) or str(x).strip())
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not out:
        raise ConfigError("at least one protocol is required")
    return out


@dataclass(frozen=True)
class RunConfig:
    protocols: tuple = (Protocol.NHQC, Protocol.BNHQC, Protocol.CBNHQC)
    gate: object = "sqrtx"
    rabi_khz: float = 47.1
    kappa_khz: float = 5.0
    delta: float = 0.0          # detuning in units of Omega
    delta_omega: float = 0.0
    detuning_mode: str = "common"
    shots: int = 0
    steps_per_segment: int = 2000
    record_stride: int = 20
    seed: int = 0
    initial_state: str = "g"

    def __post_init__(self):
        object.__setattr__(self, "protocols", parse_protocols(self.protocols))
        for name in ("rabi_khz", "kappa_khz", "delta", "delta_omega"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
                raise ConfigError(f"{name} must be a finite number, got {val!r}")
        if self.rabi_khz <= 0:
            raise ConfigError("rabi_khz must be positive")
        if self.kappa_khz < 0:
            raise ConfigError("kappa_khz must be non-negative")
        if self.delta_omega <= -1:
            raise ConfigError("delta_omega must exceed -1")
        try:
            DetuningMode(self.detuning_mode)
        except ValueError:
            raise ConfigError(f"detuning_mode must be 'common' or 'differential', got {self.detuning_mode!r}") from None
        for name, low in (("shots", 0), ("steps_per_segment", 16), ("record_stride", 1), ("seed", 0)):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, (int, np.integer)) or val < low:
                raise ConfigError(f"{name} must be an integer >= {low}, got {val!r}")
        if self.initial_state not in INITIAL_STATES:
            raise ConfigError(f"initial_state must be one of {INITIAL_STATES}")
        parse_gate(self.gate)

    @property
    def omega(self) -> float:
        return rabi_khz_to_rad_s(self.rabi_khz)

    def gate_params(self) -> GateParams:
        theta, phi, gamma = parse_gate(self.gate)
        try:
            return GateParams(theta, phi, gamma, self.omega)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def noise_model(self) -> NoiseModel:
        return NoiseModel(
            kappa=kappa_khz_to_per_s(self.kappa_khz),
            delta=self.delta * self.omega,
            delta_omega=self.delta_omega,
            detuning_mode=self.detuning_mode,
        )

    def sim_config(self) -> SimConfig:
        return SimConfig(self.steps_per_segment, self.record_stride, self.seed)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["protocols"] = [p.value for p in self.protocols]
        if not isinstance(self.gate, str):
            d["gate"] = list(self.gate)
        return d


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"sweep parameter must be one of {SWEEP_PARAMETERS}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or not self.start < self.stop:
            raise ConfigError("sweep requires finite from < to")
        if isinstance(self.points, bool) or not isinstance(self.points, int) or self.points < 2:
            raise ConfigError("sweep points must be an integer >= 2")

    @classmethod
    def default(cls, parameter: str) -> "SweepSpec":
        if parameter not in DEFAULT_SWEEPS:
            raise ConfigError(f"sweep parameter must be one of {SWEEP_PARAMETERS}")
        return cls(parameter, *DEFAULT_SWEEPS[parameter])

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    def apply(self, config: RunConfig, value: float) -> RunConfig:
        key = "kappa_khz" if self.parameter == "kappa" else self.parameter
        return replace(config, **{key: float(value)})

    def to_dict(self) -> dict:
        return {"parameter": self.parameter, "from": self.start, "to": self.stop, "points": self.points}


_RUN_FIELDS = {f.name for f in fields(RunConfig)}


def load_config(path) -> tuple[dict, dict | None]:
    """Read a JSON config; returns (run-config keys, sweep dict or None)."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    sweep = doc.pop("sweep", None)
    unknown = set(doc) - _RUN_FIELDS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if sweep is not None and not isinstance(sweep, dict):
        raise ConfigError("'sweep' must be an object")
    return doc, sweep


def build_run_config(base: dict, overrides: dict) -> RunConfig:
    merged = {**base, **{k: v for k, v in overrides.items() if v is not None}}
    try:
        return RunConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def build_sweep_spec(base: dict | None, parameter=None, start=None, stop=None, points=None) -> SweepSpec:
    base = dict(base or {})
    unknown = set(base) - {"parameter", "from", "to", "points"}
    if unknown:
        raise ConfigError(f"unknown sweep keys: {sorted(unknown)}")
    parameter = parameter or base.get("parameter")
    if parameter is None:
        raise ConfigError("sweep parameter is required")
    d_from, d_to, d_points = DEFAULT_SWEEPS.get(parameter, (None, None, None))
    if parameter not in DEFAULT_SWEEPS:
        raise ConfigError(f"sweep parameter must be one of {SWEEP_PARAMETERS}")
    pick = lambda flag, key, default: flag if flag is not None else base.get(key, default)  # noqa: E731
    try:
        return SweepSpec(parameter, float(pick(start, "from", d_from)), float(pick(stop, "to", d_to)),
                         pick(points, "points", d_points))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None
