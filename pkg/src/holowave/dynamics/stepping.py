"""RK4 and integrating-factor RK4 time stepping, trajectories and the dispersion fit."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.optimize import least_squares

from ..fields import (
    DegenerateJacobianError,
    DiffState,
    PhysicalParams,
    SurfaceState,
    conserved_energy,
    conserved_momentum,
    control_norms,
    differentiate_state,
    holomorphy_defect,
    save_state,
)
from ..spectral_core import GridSpec, SpectralField
from .rhs import LinearizedState, rhs_linearized, rhs_para_linear, rhs_wq, rhs_wr

__all__ = [
    "ConfigError",
    "BlowUpError",
    "StepperConfig",
    "CoupledState",
    "Trajectory",
    "max_stable_dt",
    "step",
    "simulate",
    "dispersion_check",
    "measure_frequency",
    "CSV_COLUMNS",
]

SCHEMES = ("rk4", "ifrk4")
CSV_COLUMNS = ("t", "E", "P", "A0", "A1", "holo_defect_W", "holo_defect_R", "Es", "Elin")


class ConfigError(ValueError):
    pass


class BlowUpError(RuntimeError):
    def __init__(self, msg: str, last_state=None, t: float | None = None):
        super().__init__(msg)
        self.last_state = last_state
        self.t = t


def max_stable_dt(grid: GridSpec, params: PhysicalParams, cfl_safety: float = 0.5) -> float:
    kmax = grid.n_modes / 2
    return cfl_safety / (math.sqrt(params.sigma) * kmax ** 1.5 + math.sqrt(params.g) * kmax ** 0.5)


@dataclass(frozen=True)
class StepperConfig:
    dt: float
    scheme: str = "rk4"
    reproject: bool = True
    t_end: float = 1.0
    cfl_safety: float = 0.5
    remove_mean: bool = False
    snapshot_every: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigError("dt must be positive")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.t_end < 0:
            raise ConfigError("t_end must be non-negative")
        if self.snapshot_every < 1:
            raise ConfigError("snapshot_every must be at least 1")

    def check_cfl(self, grid: GridSpec, params: PhysicalParams) -> None:
        limit = max_stable_dt(grid, params, self.cfl_safety)
        if self.dt > limit * (1 + 1e-12):
            raise ConfigError(f"dt = {self.dt:.3e} exceeds the CFL limit {limit:.3e}")

    @property
    def n_steps(self) -> int:
        return int(math.ceil(self.t_end / self.dt - 1e-9))


@dataclass(frozen=True, eq=False)
class CoupledState:
    """A background (W, Q) carried together with a linearized perturbation (w, r).

    ``flow`` selects the perturbation equation: the full linearized system or
    the homogeneous paradifferential flow.
    """

    background: SurfaceState
    pert: LinearizedState
    flow: str = "linearized"

    @property
    def grid(self) -> GridSpec:
        return self.background.grid

    @property
    def params(self) -> PhysicalParams:
        return self.background.params


# -- packing ------------------------------------------------------------------
def _pack(state):
    if isinstance(state, SurfaceState):
        return np.stack([state.W.coeffs, state.Q.coeffs])
    if isinstance(state, DiffState):
        return np.stack([state.Wd.coeffs, state.R.coeffs])
    if isinstance(state, CoupledState):
        b, p = state.background, state.pert
        return np.stack([b.W.coeffs, b.Q.coeffs, p.w.coeffs, p.r.coeffs])
    raise TypeError(f"cannot step a {type(state).__name__}")


def _unpack(template, arr):
    grid = template.grid
    F = lambda c: SpectralField(grid, c)  # noqa: E731
    if isinstance(template, SurfaceState):
        return SurfaceState(F(arr[0]), F(arr[1]), template.params)
    if isinstance(template, DiffState):
        return DiffState(F(arr[0]), F(arr[1]), template.params)
    bg = SurfaceState(F(arr[0]), F(arr[1]), template.params)
    return CoupledState(bg, LinearizedState(F(arr[2]), F(arr[3])), template.flow)


def _rhs(state) -> np.ndarray:
    if isinstance(state, SurfaceState):
        return _pack_rate(rhs_wq(state))
    if isinstance(state, DiffState):
        return _pack_rate(rhs_wr(state))
    bg = state.background
    d = differentiate_state(bg)
    fn = rhs_linearized if state.flow == "linearized" else rhs_para_linear
    return np.concatenate([_pack_rate(rhs_wq(bg)), _pack_rate(fn(state.pert, d))])


def _pack_rate(rate) -> np.ndarray:
    a, b = rate
    return np.stack([a.coeffs, b.coeffs])


# -- linear propagator of the zero-background system, pair by pair ------------------
def _linear_parts(grid: GridSpec, params: PhysicalParams):
    k = grid.k.astype(float)
    lam = params.g + params.sigma * k ** 2
    neg = k <= 0
    tau = np.sqrt(np.where(neg, -k * lam, 0.0))
    return k, lam, neg, tau


def _apply_A(arr, k, lam, neg):
    out = np.zeros_like(arr)
    for j in range(0, arr.shape[0], 2):
        out[j] = np.where(neg, -1j * k * arr[j + 1], 0.0)
        out[j + 1] = np.where(neg, 1j * lam * arr[j], 0.0)
    return out


def _expA(arr, t, k, lam, neg, tau):
    c = np.cos(tau * t)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(tau > 0, np.sin(tau * t) / np.where(tau > 0, tau, 1.0), t)
    out = arr.copy()
    for j in range(0, arr.shape[0], 2):
        x, y = arr[j], arr[j + 1]
        out[j] = np.where(neg, c * x + s * (-1j * k * y), x)
        out[j + 1] = np.where(neg, c * y + s * (1j * lam * x), y)
    return out


def step(state, cfg: StepperConfig, dt: float | None = None):
    """Advance one step of size ``dt`` (defaults to cfg.dt)."""
    h = cfg.dt if dt is None else dt
    u = _pack(state)
    f = lambda arr: _rhs(_unpack(state, arr))  # noqa: E731
    if cfg.scheme == "rk4":
        k1 = f(u)
        k2 = f(u + 0.5 * h * k1)
        k3 = f(u + 0.5 * h * k2)
        k4 = f(u + h * k3)
        new = u + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    else:
        k, lam, neg, tau = _linear_parts(state.grid, state.params)
        E = lambda arr, t: _expA(arr, t, k, lam, neg, tau)  # noqa: E731
        N = lambda arr: f(arr) - _apply_A(arr, k, lam, neg)  # noqa: E731
        k1 = N(u)
        k2 = N(E(u + 0.5 * h * k1, 0.5 * h))
        k3 = N(E(u, 0.5 * h) + 0.5 * h * k2)
        k4 = N(E(u, h) + h * E(k3, 0.5 * h))
        new = E(u, h) + h / 6.0 * (E(k1, h) + 2 * E(k2 + k3, 0.5 * h) + k4)
    kk = state.grid.k
    if cfg.reproject:
        new[:, kk > 0] = 0.0
    if cfg.remove_mean:
        new[:, 0] = 0.0
    return _unpack(state, new)


# -- trajectories ---------------------------------------------------------------
@dataclass
class Trajectory:
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    monitors: dict = field(default_factory=lambda: {c: [] for c in CSV_COLUMNS[1:]})

    def append(self, t: float, state, values: dict) -> None:
        if self.times and not t > self.times[-1]:
            raise ValueError("trajectory times must increase strictly")
        self.times.append(float(t))
        self.states.append(state)
        for key in self.monitors:
            self.monitors[key].append(values.get(key))

    def series(self, name: str) -> np.ndarray:
        return np.array([np.nan if v is None else v for v in self.monitors[name]], dtype=float)

    def to_csv(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(CSV_COLUMNS)
            for i, t in enumerate(self.times):
                row = [format(t, ".17g")]
                for key in CSV_COLUMNS[1:]:
                    v = self.monitors[key][i]
                    row.append("" if v is None else format(float(v), ".17g"))
                wr.writerow(row)
        return path

    def save_states(self, directory) -> list:
        directory = Path(directory)
        paths = []
        for i, s in enumerate(self.states):
            target = s.background if isinstance(s, CoupledState) else s
            paths.append(save_state(target, directory / f"state_{i:05d}.json"))
        return paths


def default_monitors(state) -> dict:
    out = {}
    if isinstance(state, CoupledState):
        state = state.background
    if isinstance(state, SurfaceState):
        out["E"] = conserved_energy(state)
        out["P"] = conserved_momentum(state)
        out["holo_defect_W"] = holomorphy_defect(state.W)
        d = differentiate_state(state)
        out["holo_defect_R"] = max(holomorphy_defect(state.Q), d.holo_defect_R)
    else:
        d = state
        out["holo_defect_W"] = holomorphy_defect(d.Wd)
        out["holo_defect_R"] = holomorphy_defect(d.R)
    cn = control_norms(d)
    out["A0"], out["A1"] = cn.a0, cn.a1
    return out


def simulate(state, cfg: StepperConfig,
             monitors: Callable[[object], dict] | None = default_monitors,
             extra: dict | None = None) -> Trajectory:
    """Integrate to cfg.t_end, recording every ``snapshot_every`` steps and the final state."""
    cfg.check_cfl(state.grid, state.params)
    traj = Trajectory()

    def record(t, s):
        vals = monitors(s) if monitors else {}
        for name, fn in (extra or {}).items():
            vals[name] = fn(s)
        traj.append(t, s, vals)

    n = cfg.n_steps
    h = cfg.t_end / n if n else cfg.dt
    t = 0.0
    record(t, state)
    for i in range(1, n + 1):
        try:
            new = step(state, cfg, h)
        except DegenerateJacobianError as exc:
            raise BlowUpError(f"Jacobian degenerated at t = {t:.6g}: {exc}", state, t) from exc
        if not np.all(np.isfinite(_pack(new))):
            raise BlowUpError(f"non-finite values at t = {t + h:.6g}", state, t)
        state, t = new, i * h
        if i % cfg.snapshot_every == 0 or i == n:
            record(t, state)
    return traj


# -- dispersion -----------------------------------------------------------------
def dispersion_check(k: int, params: PhysicalParams) -> float:
    """Predicted angular frequency sqrt(g|k| + sigma |k|^3) of a holomorphic mode k < 0."""
    if k >= 0:
        raise ValueError("only negative (holomorphic) frequencies oscillate")
    a = abs(k)
    return math.sqrt(params.g * a + params.sigma * a ** 3)


def measure_frequency(k: int, params: PhysicalParams, eps: float = 1e-5, n_modes: int = 32,
                      periods: float = 4.0, steps_per_period: int = 200) -> float:
    """Fit the oscillation frequency of W_hat(k) for the single-mode state W = eps e^{ik a}, Q = 0.

    Plain RK4 on the full (W, Q) system; the integrating-factor scheme would
    return the predicted frequency by construction.
    """
    grid = GridSpec(n_modes)
    guess = dispersion_check(k, params)
    period = 2 * math.pi / guess
    dt = min(period / steps_per_period, max_stable_dt(grid, params))
    cfg = StepperConfig(dt=dt, scheme="rk4", t_end=periods * period)
    s0 = SurfaceState(SpectralField.from_modes(grid, {k: eps}), SpectralField.zeros(grid), params)
    traj = simulate(s0, cfg, monitors=None)
    t = np.array(traj.times)
    z = np.array([s.W.mode(k) for s in traj.states]) / eps

    def resid(p):
        om, a, b = p
        model = a * np.cos(om * t) + b * np.sin(om * t)
        r = z - model
        return np.concatenate([r.real, r.imag])

    sol = least_squares(resid, x0=[guess * (1 + 1e-3), 1.0, 0.0], xtol=1e-15, ftol=1e-15)
    return float(sol.x[0])
