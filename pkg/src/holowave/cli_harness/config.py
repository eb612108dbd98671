"""Run configuration: a single JSON document mapped onto dataclasses."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from ..dynamics import ConfigError

__all__ = [
    "SCENARIOS",
    "ENSEMBLE_SCENARIOS",
    "DEFAULT_THRESHOLDS",
    "GridSettings",
    "ParamSettings",
    "StepperSettings",
    "RunConfig",
    "load_config",
]

SCENARIOS = (
    "simulate",
    "verify-symbols",
    "conservation",
    "dispersion",
    "linearization",
    "para-residuals",
    "energy-equivalence",
    "energy-growth",
    "identities",
    "integrator-order",
)
ENSEMBLE_SCENARIOS = ("para-residuals", "energy-equivalence", "energy-growth")

DEFAULT_THRESHOLDS = {
    "identity_tol": 1e-12,
    "symbol_residual": 1e-10,
    "symbol_min_samples": 1000,
    "symbol_runtime_s": 10.0,
    "conservation_drift": 1e-6,
    "dispersion_rel": 1e-4,
    "linearization_ratio": [1.6, 2.4],
    "residual_ratio": [3.0, 5.0],
    "energy_band": [0.5, 2.0],
    "growth_a0_max": 0.05,
    "growth_slack": 0.1,
    "rk4_ratio": [12.8, 19.2],
    "scaling_tol": 1e-8,
    "holomorphy_tol": 1e-10,
}


@dataclass
class GridSettings:
    n_modes: int = 128


@dataclass
class ParamSettings:
    g: float = 1.0
    sigma: float = 1.0


@dataclass
class StepperSettings:
    """StepperConfig fields; ``dt = None`` picks the CFL limit times ``cfl_safety``."""

    dt: float | None = None
    scheme: str = "rk4"
    reproject: bool = True
    t_end: float | None = None
    cfl_safety: float = 0.5
    remove_mean: bool = False
    snapshot_every: int = 10


@dataclass
class RunConfig:
    scenario: str = "simulate"
    grid: GridSettings = field(default_factory=GridSettings)
    params: ParamSettings | None = None
    initial_data: dict | str | None = None
    amplitude: float | None = None
    stepper: StepperSettings = field(default_factory=StepperSettings)
    sweep: list | None = None
    seed: int = 0
    output_dir: str | None = None
    thresholds: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        self.validate()

    def threshold(self, name: str):
        return self.thresholds.get(name, DEFAULT_THRESHOLDS[name])

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario: unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")
        n = self.grid.n_modes
        if not isinstance(n, int) or n < 16 or n & (n - 1):
            raise ConfigError(f"grid.n_modes: must be a power of two >= 16, got {n!r}")
        if self.params is not None:
            if not self.params.sigma > 0:
                raise ConfigError("params.sigma: must be positive")
            if not self.params.g >= 0:
                raise ConfigError("params.g: must be non-negative")
        if self.amplitude is not None and not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            raise ConfigError(f"amplitude: must be a non-negative number, got {self.amplitude!r}")
        if self.sweep is not None:
            if not self.sweep or any(not (isinstance(a, (int, float)) and a > 0) for a in self.sweep):
                raise ConfigError("sweep: amplitudes must be positive numbers")
            if self.scenario in ENSEMBLE_SCENARIOS and max(self.sweep) > 0.1:
                raise ConfigError("sweep: ensemble amplitudes must not exceed 0.1")
        st = self.stepper
        if st.dt is not None and not st.dt > 0:
            raise ConfigError("stepper.dt: must be positive")
        if st.t_end is not None and st.t_end < 0:
            raise ConfigError("stepper.t_end: must be non-negative")
        if not 0 < st.cfl_safety <= 1:
            raise ConfigError("stepper.cfl_safety: must lie in (0, 1]")
        if st.scheme not in ("rk4", "ifrk4"):
            raise ConfigError(f"stepper.scheme: unknown scheme {st.scheme!r}")
        if not isinstance(st.snapshot_every, int) or st.snapshot_every < 1:
            raise ConfigError("stepper.snapshot_every: must be a positive integer")
        if not isinstance(self.seed, int):
            raise ConfigError("seed: must be an integer")
        unknown = set(self.thresholds) - set(DEFAULT_THRESHOLDS)
        if unknown:
            raise ConfigError(f"thresholds: unknown entries {sorted(unknown)}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config: top level must be a JSON object")
        known = {f.name for f in fields(cls)}
        extra = set(doc) - known
        if extra:
            raise ConfigError(f"config: unknown fields {sorted(extra)}")
        kw = dict(doc)
        for name, typ in (("grid", GridSettings), ("params", ParamSettings), ("stepper", StepperSettings)):
            if kw.get(name) is not None:
                kw[name] = _sub(name, typ, kw[name])
        return cls(**kw)


def _sub(name: str, typ, doc):
    if not isinstance(doc, dict):
        raise ConfigError(f"{name}: must be a JSON object")
    known = {f.name for f in fields(typ)}
    extra = set(doc) - known
    if extra:
        raise ConfigError(f"{name}.{sorted(extra)[0]}: unknown field")
    return typ(**doc)


def load_config(path) -> RunConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    return RunConfig.from_dict(doc)
