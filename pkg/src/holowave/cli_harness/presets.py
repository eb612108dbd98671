"""Named initial data.

Every preset returns a holomorphic zero-mean state.  ``amplitude`` is the
largest modulus among the Fourier coefficients of W (or of Wd for
differentiated states).
"""

from __future__ import annotations

import numpy as np

from ..dynamics import dispersion_check
from ..fields import DiffState, PhysicalParams, SurfaceState
from ..spectral_core import GridSpec, SpectralField

__all__ = ["PRESETS", "preset_state", "random_modes", "random_diff_state"]

PRESETS = ("zero", "single_mode", "two_mode", "random_band", "travelling")


def _check_modes(grid: GridSpec, modes) -> list[int]:
    out = []
    for k in modes:
        if int(k) != k:
            raise ValueError(f"mode {k!r} is not an integer")
        k = int(k)
        if k >= 0:
            raise ValueError(f"mode {k} is not negative; presets are holomorphic")
        if -k >= grid.n_modes // 2:
            raise ValueError(f"mode {k} is not representable on N={grid.n_modes}")
        out.append(k)
    return out


def _band(grid: GridSpec, kmin: int, kmax: int) -> list[int]:
    if kmin > kmax:
        raise ValueError(f"empty band [{kmin}, {kmax}]")
    return _check_modes(grid, range(kmin, kmax + 1))


def random_modes(modes, rng: np.random.Generator, decay: float) -> dict:
    """Complex Gaussian coefficients with modulus decaying like |k|^-decay."""
    z = rng.normal(size=(len(modes), 2))
    return {k: (a + 1j * b) / abs(k) ** decay for k, (a, b) in zip(modes, z)}


def _normalise(W: dict, Q: dict, amplitude: float):
    peak = max((abs(v) for v in W.values()), default=0.0)
    if peak == 0:
        return W, Q
    c = amplitude / peak
    return {k: c * v for k, v in W.items()}, {k: c * v for k, v in Q.items()}


def preset_state(name: str, grid: GridSpec, params: PhysicalParams, amplitude: float,
                 **kw) -> SurfaceState:
    """Build initial data by preset name.

    single_mode(k): W = amplitude e^{ikα}, Q = 0.
    two_mode(k1, k2): equal-amplitude modes, Q = 0.
    random_band(kmin, kmax, seed): Gaussian W and Q on the band, |k|^-1.5 decay.
    travelling(kmin, kmax, seed): random W with Q chosen so every mode is a
    linear wave moving in one direction.
    """
    if amplitude < 0:
        raise ValueError("amplitude must be non-negative")
    if name == "zero":
        W, Q = {}, {}
    elif name == "single_mode":
        (k,) = _check_modes(grid, [kw.get("k", -1)])
        W, Q = {k: 1.0}, {}
    elif name == "two_mode":
        k1, k2 = _check_modes(grid, [kw.get("k1", -1), kw.get("k2", -2)])
        if k1 == k2:
            raise ValueError("two_mode needs distinct modes")
        W, Q = {k1: 1.0, k2: 1.0}, {}
    elif name in ("random_band", "travelling"):
        modes = _band(grid, kw.get("kmin", -4), kw.get("kmax", -1))
        rng = np.random.default_rng(kw.get("seed", 0))
        W = random_modes(modes, rng, 1.5)
        if name == "random_band":
            Q = random_modes(modes, rng, 1.5)
        else:
            Q = {k: dispersion_check(k, params) / abs(k) * v for k, v in W.items()}
    else:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESETS}")
    unknown = set(kw) - {"k", "k1", "k2", "kmin", "kmax", "seed"}
    if unknown:
        raise ValueError(f"unexpected preset arguments {sorted(unknown)}")
    W, Q = _normalise(W, Q, amplitude)
    return SurfaceState(SpectralField.from_modes(grid, W), SpectralField.from_modes(grid, Q), params)


def random_diff_state(grid: GridSpec, params: PhysicalParams, amplitude: float, seed: int = 0,
                      kmin: int = -7, kmax: int = -1, decay: float = 2.0) -> DiffState:
    """Random (Wd, R) with coefficients amplitude * N(0,1)_C / |k|^decay on a band."""
    modes = _band(grid, kmin, kmax)
    rng = np.random.default_rng(seed)
    Wd = {k: amplitude * v for k, v in random_modes(modes, rng, decay).items()}
    R = {k: amplitude * v for k, v in random_modes(modes, rng, decay).items()}
    return DiffState(SpectralField.from_modes(grid, Wd), SpectralField.from_modes(grid, R), params)
