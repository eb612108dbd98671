"""Paraproducts, balanced products, bilinear Fourier multipliers and norms.

All frequency interactions are evaluated as exact double sums over the lattice
(O(N^2)), so no aliasing enters the bilinear calculus.  The paraproduct uses
the quantization

    (T_a u)^(xi) = sum_eta chi(xi - eta, eta) a_hat(xi - eta) psi(eta) u_hat(eta)

with chi from ``spectral_core.para_chi`` and the lattice psi (zero only at the
mean).  The balanced part is the exact remainder of the dealiased product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping

import numpy as np

from .spectral_core import (
    DEFAULT_CUTOFF,
    CutoffParams,
    GridSpec,
    SpectralField,
    chi1,
    chi2,
    lp_block_index,
    para_chi,
    psi,
)

__all__ = [
    "BilinearSymbol",
    "NormReport",
    "REGIONS",
    "paraproduct",
    "balanced",
    "bilinear_apply",
    "sobolev_norm",
    "zygmund_norm",
    "product_norm",
    "norm_report",
    "para_commutator",
    "T",
    "Pi",
]

REGIONS = (
    "holo_lowhigh",
    "holo_balanced",
    "mixed_lowhigh",
    "mixed_balanced",
    "full",
    "mixed_full",
)


@lru_cache(maxsize=16)
def _pairs(n: int):
    """Frequency pairs (p, q) with output slots for sums p+q and differences q-p."""
    k = np.fft.fftfreq(n, d=1.0 / n).round().astype(np.int64)
    p, q = np.meshgrid(k, k, indexing="ij")
    half = n // 2
    s = p + q
    d = q - p
    sum_ok = (s > -half) & (s < half)
    diff_ok = (d > -half) & (d < half)
    return p.astype(float), q.astype(float), s % n, sum_ok, d % n, diff_ok


def _scatter(n: int, idx: np.ndarray, ok: np.ndarray, vals: np.ndarray) -> np.ndarray:
    i = idx[ok]
    v = vals[ok]
    out = np.bincount(i, weights=v.real, minlength=n) + 1j * np.bincount(i, weights=v.imag, minlength=n)
    return out


@lru_cache(maxsize=16)
def _para_weight(n: int, cut: CutoffParams) -> np.ndarray:
    p, q, *_ = _pairs(n)
    return para_chi(p, q, cut) * psi(q)


def _same_grid(*fields: SpectralField) -> GridSpec:
    n = fields[0].grid.n_modes
    for f in fields[1:]:
        if f.grid.n_modes != n:
            raise ValueError("fields live on different grids")
    return fields[0].grid


def paraproduct(a: SpectralField, u: SpectralField, cut: CutoffParams = DEFAULT_CUTOFF) -> SpectralField:
    """Low-high paraproduct T_a u."""
    grid = _same_grid(a, u)
    n = grid.n_modes
    _, _, s_idx, s_ok, _, _ = _pairs(n)
    vals = _para_weight(n, cut) * np.outer(a.coeffs, u.coeffs)
    return SpectralField(grid, _scatter(n, s_idx, s_ok, vals))


def balanced(a: SpectralField, u: SpectralField, cut: CutoffParams = DEFAULT_CUTOFF) -> SpectralField:
    """Pi(a, u) = a u - T_a u - T_u a, with the dealiased product."""
    return a * u - paraproduct(a, u, cut) - paraproduct(u, a, cut)


# short aliases that keep long formulas readable
T = paraproduct
Pi = balanced


def para_commutator(f: SpectralField, g: SpectralField, u: SpectralField,
                    cut: CutoffParams = DEFAULT_CUTOFF) -> SpectralField:
    """[T_f, T_g] u."""
    return paraproduct(f, paraproduct(g, u, cut), cut) - paraproduct(g, paraproduct(f, u, cut), cut)


@dataclass(frozen=True, eq=False)
class BilinearSymbol:
    """A bilinear Fourier multiplier m(first, second) and the region it acts on.

    Holomorphic regions pair u at frequency ``xi`` with v at ``eta`` and write
    to xi + eta.  Mixed regions conjugate the first argument: u at ``eta`` (its
    own frequency, before conjugation) meets v at ``zeta`` and writes to
    zeta - eta, restricted to negative output frequencies.
    """

    eval: Callable[[np.ndarray, np.ndarray], np.ndarray]
    region: str = "full"
    name: str = "m"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.region not in REGIONS:
            raise ValueError(f"unknown region {self.region!r}; expected one of {REGIONS}")

    @property
    def mixed(self) -> bool:
        return self.region.startswith("mixed")

    def weights(self, n: int, cut: CutoffParams = DEFAULT_CUTOFF) -> np.ndarray:
        """Cutoff times symbol on the full pair lattice (non-finite entries kept)."""
        key = (n, cut)
        if key not in self._cache:
            p, q, *_ = _pairs(n)
            out = (q - p) if self.mixed else (p + q)
            if self.region in ("holo_lowhigh", "mixed_lowhigh"):
                c = chi1(p, out, cut)
            elif self.region in ("holo_balanced", "mixed_balanced"):
                c = chi2(p, out, cut)
            else:
                c = np.ones(p.shape)
            if self.mixed:
                c = np.where(out < 0, c, 0.0)
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                m = np.broadcast_to(np.asarray(self.eval(p, q), dtype=np.complex128), p.shape)
                w = np.where(c == 0, 0.0, c * m)
            self._cache[key] = w
        return self._cache[key]


def bilinear_apply(m: BilinearSymbol, u: SpectralField, v: SpectralField,
                   cut: CutoffParams = DEFAULT_CUTOFF) -> SpectralField:
    """Apply the bilinear form with symbol ``m`` by direct lattice convolution."""
    grid = _same_grid(u, v)
    n = grid.n_modes
    _, _, s_idx, s_ok, d_idx, d_ok = _pairs(n)
    w = m.weights(n, cut)
    if m.mixed:
        amp = np.outer(np.conj(u.coeffs), v.coeffs)
        idx, ok = d_idx, d_ok
    else:
        amp = np.outer(u.coeffs, v.coeffs)
        idx, ok = s_idx, s_ok
    bad = ~np.isfinite(w)
    if np.any(bad):
        live = bad & (amp != 0) & ok
        if np.any(live):
            raise FloatingPointError(f"symbol {m.name} is not finite on an active frequency pair")
        w = np.where(bad, 0.0, w)
    return SpectralField(grid, _scatter(n, idx, ok, w * amp))


# -- norms -------------------------------------------------------------------
def sobolev_norm(u: SpectralField, s: float) -> float:
    """||u||_{H^s}^2 = 2 pi sum (1 + k^2)^s |u_hat|^2."""
    k2 = u.grid.k.astype(float) ** 2
    return float(np.sqrt(2 * np.pi * np.sum((1 + k2) ** s * np.abs(u.coeffs) ** 2)))


def zygmund_norm(u: SpectralField, s: float, oversample: int = 4) -> float:
    """max_j 2^{js} ||P_j u||_{L^inf} over sharp dyadic blocks (sup on a refined grid)."""
    grid = u.grid
    blocks = lp_block_index(grid.k)
    m = oversample * grid.n_modes
    best = 0.0
    for j in np.unique(blocks):
        c = np.where(blocks == j, u.coeffs, 0.0)
        if not np.any(c):
            continue
        padded = np.zeros(m, dtype=np.complex128)
        padded[grid.k % m] = c
        sup = float(np.max(np.abs(np.fft.ifft(padded) * m)))
        best = max(best, 2.0 ** (j * s) * sup)
    return best


def product_norm(pair: tuple[SpectralField, SpectralField], s: float) -> float:
    """Norm on H^{s+1/2} x H^s."""
    f, g = pair
    return float(np.hypot(sobolev_norm(f, s + 0.5), sobolev_norm(g, s)))


@dataclass(frozen=True)
class NormReport:
    sobolev: Mapping[float, float]
    zygmund: Mapping[float, float]
    product_Hs: float | None = None

    def __post_init__(self):
        vals = list(self.sobolev.values()) + list(self.zygmund.values())
        if self.product_Hs is not None:
            vals.append(self.product_Hs)
        if any(v < 0 for v in vals):
            raise ValueError("norms must be non-negative")


def norm_report(u: SpectralField, sobolev_s: Iterable[float] = (0.0, 0.5, 1.0),
                zygmund_s: Iterable[float] = (0.0, 0.5, 1.0),
                pair: tuple[SpectralField, SpectralField] | None = None,
                pair_s: float = 1.0) -> NormReport:
    return NormReport(
        sobolev={float(s): sobolev_norm(u, s) for s in sobolev_s},
        zygmund={float(s): zygmund_norm(u, s) for s in zygmund_s},
        product_Hs=None if pair is None else product_norm(pair, pair_s),
    )
